#include "bfgrow/bayes_factor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace bfgrow {

namespace {

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
// on the Legendre recurrence and cached per node count (quadrature is called
// across many grid points with the same counts).
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int k = 0; k < half; ++k) {
        double z = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        rule.nodes[k] = -z;
        rule.nodes[n - 1 - k] = z;
        rule.weights[k] = rule.weights[n - 1 - k] =
            2.0 / ((1.0 - z * z) * pp * pp);
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

// Parameters of the log integrand after the substitution phi = pi/2 - u^2.
struct LogIntegrand {
    double pmi;   // p - i
    double hnp;   // (n - p)/2
    double hni;   // (n - i)/2
    double p1;    // p + 1
    double n;     // sample size
    double nbip;  // n * B_ip

    // log of integrand(u) = sin^pmi(phi) * (n + p1 sin^2)^hnp /
    //                       (nbip + p1 sin^2)^hni * 2u,  phi = pi/2 - u^2.
    double operator()(double u) const {
        const double sin_phi = std::cos(u * u);
        if (!(sin_phi > 0.0)) return -std::numeric_limits<double>::infinity();
        const double s2 = sin_phi * sin_phi;
        const double sin_term = pmi > 0.0 ? pmi * std::log(sin_phi) : 0.0;
        return sin_term + hnp * std::log(n + p1 * s2) -
               hni * std::log(nbip + p1 * s2) + std::log(2.0 * u);
    }
};

// Weighted log-sum-exp of the integrand over an N-node rule mapped onto
// [0, sqrt(pi/2)].
double log_integral(const LogIntegrand& f, int n_nodes) {
    const GaussRule& rule = gauss_legendre(n_nodes);
    const double upper = std::sqrt(std::numbers::pi / 2.0);
    std::vector<double> logs(n_nodes);
    double max_log = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_nodes; ++k) {
        const double u = 0.5 * upper * (rule.nodes[k] + 1.0);
        logs[k] = f(u);
        max_log = std::max(max_log, logs[k]);
    }
    if (std::isinf(max_log)) return max_log;
    double sum = 0.0;
    for (int k = 0; k < n_nodes; ++k) {
        sum += 0.5 * upper * rule.weights[k] * std::exp(logs[k] - max_log);
    }
    return max_log + std::log(sum);
}

}  // namespace

BayesFactorResult log_intrinsic_bf(std::int64_t n, std::int64_t p,
                                   std::int64_t i, double log_bip,
                                   const QuadratureConfig& cfg) {
    if (!(n > p && p >= i && i >= 0)) {
        throw DimensionError("log_intrinsic_bf: need n > p >= i >= 0, got n=" +
                             std::to_string(n) + " p=" + std::to_string(p) +
                             " i=" + std::to_string(i));
    }
    if (!(log_bip <= 0.0)) {
        throw DomainError("log_intrinsic_bf: log_bip must be <= 0");
    }
    if (cfg.initial_nodes < 8 || cfg.max_refinements < 0 ||
        !(cfg.rel_tol > 0.0 && cfg.rel_tol <= 1e-2)) {
        throw ConfigError(
            "log_intrinsic_bf: need initial_nodes >= 8, max_refinements >= 0, "
            "rel_tol in (0, 1e-2]");
    }

    LogIntegrand f;
    f.pmi = static_cast<double>(p - i);
    f.hnp = 0.5 * static_cast<double>(n - p);
    f.hni = 0.5 * static_cast<double>(n - i);
    f.p1 = static_cast<double>(p + 1);
    f.n = static_cast<double>(n);
    // log_bip = 0 must reproduce n exactly, not exp(log n), so that the
    // identical-models identity holds to machine precision.
    f.nbip = log_bip == 0.0
                 ? f.n
                 : std::exp(std::log(static_cast<double>(n)) + log_bip);

    const double prefactor =
        std::log(2.0 / std::numbers::pi) + 0.5 * f.pmi * std::log(f.p1);

    BayesFactorResult result;
    int nodes = cfg.initial_nodes;
    double value = log_integral(f, nodes);
    for (int ref = 0; ref < cfg.max_refinements; ++ref) {
        nodes *= 2;
        const double refined = log_integral(f, nodes);
        result.est_error = std::abs(refined - value);
        value = refined;
        if (result.est_error <=
            cfg.rel_tol * std::max(1.0, std::abs(prefactor + value))) {
            result.converged = true;
            break;
        }
    }
    result.nodes_used = nodes;
    result.log_bf_intrinsic = prefactor + value;
    result.log_bic = log_schwarz(n, p, i, log_bip);
    return result;
}

double log_schwarz(std::int64_t n, std::int64_t p, std::int64_t i,
                   double log_bip) {
    if (!(n > p && p >= i && i >= 0)) {
        throw DimensionError("log_schwarz: need n > p >= i >= 0");
    }
    return 0.5 * static_cast<double>(i - p) *
               std::log(static_cast<double>(n)) -
           0.5 * static_cast<double>(n) * log_bip;
}

double intrinsic_prior_log_density(const Eigen::VectorXd& beta, double sigma_p,
                                   const Eigen::VectorXd& alpha, double sigma_i,
                                   const DesignMatrix& full) {
    const Eigen::Index p = full.cols();
    const Eigen::Index n = full.rows();
    if (beta.size() != p) {
        throw DimensionError(
            "intrinsic_prior_log_density: beta length must equal the design's "
            "column count");
    }
    if (alpha.size() > p) {
        throw DimensionError(
            "intrinsic_prior_log_density: alpha longer than beta");
    }
    if (!(sigma_p > 0.0) || !(sigma_i > 0.0)) {
        throw DomainError("intrinsic_prior_log_density: scales must be > 0");
    }

    Eigen::VectorXd centered = beta;
    centered.head(alpha.size()) -= alpha;

    const Eigen::MatrixXd xtx =
        full.entries().transpose() * full.entries();
    Eigen::LLT<Eigen::MatrixXd> llt(xtx);
    if (llt.info() != Eigen::Success) {
        throw RankDeficient(
            "intrinsic_prior_log_density: X'X is not positive definite");
    }
    double log_det_xtx = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
        log_det_xtx += 2.0 * std::log(llt.matrixLLT()(j, j));
    }

    const double c = sigma_i * sigma_i + sigma_p * sigma_p;
    const double scale = static_cast<double>(n) / static_cast<double>(p + 1);
    // Covariance = c * scale * (X'X)^{-1}, so the log determinant is
    // p*log(c*scale) - log det(X'X) and the precision is (X'X)/(c*scale).
    const double log_det_cov =
        static_cast<double>(p) * std::log(c * scale) - log_det_xtx;
    const double quad =
        (full.entries() * centered).squaredNorm() / (c * scale);

    const double log_normal = -0.5 * static_cast<double>(p) *
                                  std::log(2.0 * std::numbers::pi) -
                              0.5 * log_det_cov - 0.5 * quad;
    const double log_scale_factor =
        std::log(2.0 * sigma_i / (std::numbers::pi * c));
    return log_scale_factor + log_normal;
}

double log_bf_large_p_approx(std::int64_t p, double r, double delta,
                             double s) {
    if (!(r > 1.0) || std::isinf(r)) {
        throw DomainError("log_bf_large_p_approx: requires finite r > 1");
    }
    if (!(delta >= 0.0)) {
        throw DomainError("log_bf_large_p_approx: delta must be >= 0");
    }
    if (p < 1) {
        throw DimensionError("log_bf_large_p_approx: p must be >= 1");
    }
    double second;
    if (std::isinf(s)) {
        second = r * std::log1p((r - 1.0) / (1.0 + delta));
    } else {
        if (!(s > r)) {
            throw DomainError("log_bf_large_p_approx: finite s must exceed r");
        }
        second = r * (s - 1.0) / s *
                 std::log1p((r - 1.0) / (1.0 + delta - 1.0 / s));
    }
    return 0.5 * static_cast<double>(p) *
           ((r - 1.0) * std::log1p(r) - second);
}

double berger_log_bf(const Eigen::VectorXd& group_means, std::int64_t m,
                     double t) {
    if (group_means.size() < 1) {
        throw EmptyInput("berger_log_bf: need at least one group mean");
    }
    if (m < 1 || !(t >= 1.0)) {
        throw DomainError("berger_log_bf: requires m >= 1 and t >= 1");
    }
    const double p = static_cast<double>(group_means.size());
    const double md = static_cast<double>(m);
    return 0.5 * p * std::log(t / (2.0 * md + t)) +
           md * md / (2.0 * md + t) * group_means.squaredNorm();
}

}  // namespace bfgrow
