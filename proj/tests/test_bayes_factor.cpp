#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "bfgrow/asymptotics.hpp"
#include "bfgrow/bayes_factor.hpp"
#include "bfgrow/errors.hpp"
#include "bfgrow/rng.hpp"
#include "oracles.hpp"

using namespace bfgrow;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("identical models give log Bayes factor zero") {
    for (std::int64_t n : {20, 200, 2000}) {
        const BayesFactorResult r = log_intrinsic_bf(n, 5, 5, 0.0);
        CHECK(std::abs(r.log_bf_intrinsic) < 1e-10);
        CHECK(r.converged);
        CHECK(r.log_bic == 0.0);
    }
}

TEST_CASE("quadrature agrees with the adaptive Simpson oracle") {
    const double cases[][4] = {
        {20, 5, 2, 0.5},
        {50, 10, 0, 0.9},
        {200, 50, 49, 0.2},
        {120, 30, 7, 0.05},
    };
    for (const auto& c : cases) {
        const auto n = static_cast<std::int64_t>(c[0]);
        const auto p = static_cast<std::int64_t>(c[1]);
        const auto i = static_cast<std::int64_t>(c[2]);
        const double log_bip = std::log(c[3]);
        const BayesFactorResult got = log_intrinsic_bf(n, p, i, log_bip);
        const double want = oracles::log_intrinsic_bf_simpson(n, p, i, log_bip);
        CHECK(got.converged);
        CHECK(std::abs(got.log_bf_intrinsic - want) < 1e-8);
    }
}

TEST_CASE("large problems with a separated alternative favor the full model") {
    // Ratio statistic at its limiting value for r = 2 and separation 0.8,
    // which lies above the critical threshold, so the evidence must be
    // positive and grow with the problem size.
    const double limit = 0.5 / 1.8;
    const BayesFactorResult r = log_intrinsic_bf(2000, 1000, 1, std::log(limit));
    CHECK(r.converged);
    CHECK(r.log_bf_intrinsic > 0.0);
}

TEST_CASE("log Bayes factor decreases in the ratio statistic") {
    double prev = kInf;
    for (double b = 0.2; b <= 1.0; b += 0.1) {
        const BayesFactorResult r = log_intrinsic_bf(100, 10, 3, std::log(b));
        CHECK(r.log_bf_intrinsic < prev);
        prev = r.log_bf_intrinsic;
    }
}

TEST_CASE("quadrature diagnostics and configuration validation") {
    const BayesFactorResult r = log_intrinsic_bf(100, 10, 3, std::log(0.5));
    CHECK(r.converged);
    CHECK(r.est_error <= 1e-8 * std::max(1.0, std::abs(r.log_bf_intrinsic)));
    CHECK(r.nodes_used >= 64);

    // More initial nodes must reproduce the converged value within tolerance.
    QuadratureConfig wide;
    wide.initial_nodes = 256;
    const BayesFactorResult finer =
        log_intrinsic_bf(100, 10, 3, std::log(0.5), wide);
    CHECK(std::abs(finer.log_bf_intrinsic - r.log_bf_intrinsic) <
          1e-8 * std::max(1.0, std::abs(r.log_bf_intrinsic)) * 4);

    // No refinement budget: the result is still returned, flagged as such.
    QuadratureConfig tight;
    tight.initial_nodes = 8;
    tight.max_refinements = 0;
    const BayesFactorResult rough =
        log_intrinsic_bf(100, 10, 3, std::log(0.5), tight);
    CHECK_FALSE(rough.converged);
    CHECK(rough.est_error == kInf);
    CHECK(std::isfinite(rough.log_bf_intrinsic));

    QuadratureConfig bad_nodes;
    bad_nodes.initial_nodes = 4;
    CHECK_THROWS_AS(log_intrinsic_bf(100, 10, 3, 0.0, bad_nodes), ConfigError);
    QuadratureConfig bad_tol;
    bad_tol.rel_tol = 0.0;
    CHECK_THROWS_AS(log_intrinsic_bf(100, 10, 3, 0.0, bad_tol), ConfigError);
    QuadratureConfig loose_tol;
    loose_tol.rel_tol = 0.1;
    CHECK_THROWS_AS(log_intrinsic_bf(100, 10, 3, 0.0, loose_tol), ConfigError);

    CHECK_THROWS_AS(log_intrinsic_bf(10, 10, 3, 0.0), DimensionError);
    CHECK_THROWS_AS(log_intrinsic_bf(10, 3, 5, 0.0), DimensionError);
    CHECK_THROWS_AS(log_intrinsic_bf(10, 3, -1, 0.0), DimensionError);
    CHECK_THROWS_AS(log_intrinsic_bf(10, 3, 1, 0.5), DomainError);
    CHECK_THROWS_AS(log_intrinsic_bf(10, 3, 1, std::nan("")), DomainError);
}

TEST_CASE("Schwarz approximation closed form") {
    CHECK(log_schwarz(100, 10, 2, 0.0) ==
          doctest::Approx(-4.0 * std::log(100.0)).epsilon(1e-14));
    CHECK(log_schwarz(500, 7, 7, std::log(0.3)) ==
          doctest::Approx(-250.0 * std::log(0.3)).epsilon(1e-14));
    CHECK(log_schwarz(100, 10, 10, -2.0) == 100.0);

    // Hand-evaluated: -4 log(100) - 50 log(0.9).
    CHECK(log_schwarz(100, 10, 2, std::log(0.9)) ==
          doctest::Approx(-13.152654961061053).epsilon(1e-12));

    RngStream rng(41, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::int64_t n = 20 + static_cast<std::int64_t>(
                                        rng.uniform() * 1000);
        const std::int64_t p = 1 + static_cast<std::int64_t>(
                                       rng.uniform() * 15);
        const std::int64_t i = static_cast<std::int64_t>(rng.uniform() *
                                                         (p + 1));
        const double log_bip = std::log(rng.uniform());
        CHECK(log_schwarz(n, p, i, log_bip) ==
              doctest::Approx(oracles::log_schwarz_alt(n, p, i, log_bip))
                  .epsilon(1e-12));
    }
}

TEST_CASE("prior density normalizes, is symmetric, and has the stated scale "
          "factor") {
    RngStream rng(42, 0);
    const Eigen::Index n = 10, p = 2;
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index c = 0; c < p; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) x(r, c) = rng.normal();
    }
    const DesignMatrix design(x);
    const double sigma_i = 1.3;
    Eigen::VectorXd alpha(1);
    alpha << 0.7;
    Eigen::VectorXd alpha_pad(p);
    alpha_pad << 0.7, 0.0;

    // Symmetry about the padded location.
    Eigen::VectorXd v(p);
    v << 0.4, -1.1;
    CHECK(intrinsic_prior_log_density(alpha_pad + v, 0.9, alpha, sigma_i,
                                      design) ==
          doctest::Approx(intrinsic_prior_log_density(alpha_pad - v, 0.9,
                                                      alpha, sigma_i, design))
              .epsilon(1e-12));

    // At sigma_p = sigma_i the scale factor collapses to 1/(pi sigma_i):
    // subtracting the normal's log density at its mean must leave exactly
    // that constant.
    const Eigen::MatrixXd xtx = x.transpose() * x;
    const double c = 2.0 * sigma_i * sigma_i;
    const double scale = static_cast<double>(n) / (p + 1.0);
    const Eigen::MatrixXd cov = c * scale * xtx.inverse();
    const double normal_at_mean =
        -0.5 * p * std::log(2.0 * M_PI) - 0.5 * std::log(cov.determinant());
    const double log_f =
        intrinsic_prior_log_density(alpha_pad, sigma_i, alpha, sigma_i,
                                    design);
    CHECK(log_f - normal_at_mean ==
          doctest::Approx(std::log(1.0 / (M_PI * sigma_i))).epsilon(1e-10));

    // Monte Carlo normalization: importance sampling with the scale drawn
    // from its exact half-Cauchy marginal and the location from a normal
    // with doubled covariance, so the weights are bounded by 2^(p/2).
    const Eigen::LLT<Eigen::MatrixXd> llt(xtx);
    const Eigen::MatrixXd lower = llt.matrixL();
    const int draws = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int k = 0; k < draws; ++k) {
        const double sigma_p = sigma_i * std::tan(M_PI * 0.5 * rng.uniform());
        const double cc = sigma_i * sigma_i + sigma_p * sigma_p;
        Eigen::VectorXd z(p);
        for (Eigen::Index j = 0; j < p; ++j) z[j] = rng.normal();
        // beta ~ N(alpha_pad, 2 * cc * scale * (X'X)^{-1})
        const Eigen::VectorXd beta =
            alpha_pad + std::sqrt(2.0 * cc * scale) *
                            lower.transpose().triangularView<Eigen::Upper>()
                                .solve(z);
        const double log_q_sigma =
            std::log(2.0 * sigma_i / (M_PI * cc));  // half-Cauchy density
        const Eigen::VectorXd centered = x * (beta - alpha_pad);
        const double quad = centered.squaredNorm() / (2.0 * cc * scale);
        const double log_det_cov =
            p * std::log(2.0 * cc * scale) -
            2.0 * lower.diagonal().array().log().sum();
        const double log_q_beta = -0.5 * p * std::log(2.0 * M_PI) -
                                  0.5 * log_det_cov - 0.5 * quad;
        const double log_w =
            intrinsic_prior_log_density(beta, sigma_p, alpha, sigma_i,
                                        design) -
            log_q_sigma - log_q_beta;
        const double w = std::exp(log_w);
        sum += w;
        sum_sq += w * w;
    }
    const double mean = sum / draws;
    const double se = std::sqrt(
        (sum_sq / draws - mean * mean) / draws);
    CHECK(std::abs(mean - 1.0) <= 3.0 * se);

    Eigen::VectorXd too_long(3);
    too_long.setZero();
    CHECK_THROWS_AS(intrinsic_prior_log_density(alpha_pad, 1.0, too_long,
                                                sigma_i, design),
                    DimensionError);
    CHECK_THROWS_AS(intrinsic_prior_log_density(alpha_pad, -1.0, alpha,
                                                sigma_i, design),
                    DomainError);
}

TEST_CASE("closed-form large-dimension approximation") {
    // Vanishes exactly at the critical separation, for any p.
    for (double r : {1.5, 2.0, 5.0}) {
        const double root = delta_r(r);
        for (std::int64_t p : {10, 100, 1000}) {
            CHECK(std::abs(log_bf_large_p_approx(p, r, root)) <
                  1e-10 * static_cast<double>(p));
        }
    }
    for (double r : {1.5, 2.0}) {
        for (double s : {r + 1.0, 3.5 * r}) {
            const double root = delta_rs(r, s);
            CHECK(std::abs(log_bf_large_p_approx(200, r, root, s)) < 1e-8);
        }
    }

    // Positive above the threshold, negative below it.
    CHECK(log_bf_large_p_approx(100, 2.0, 0.8) > 0.0);
    CHECK(log_bf_large_p_approx(100, 2.0, 0.1) < 0.0);

    // Very large finite s approaches the infinite-s form.
    for (double delta : {0.1, 0.8}) {
        CHECK(std::abs(log_bf_large_p_approx(100, 2.0, delta, 1e9) -
                       log_bf_large_p_approx(100, 2.0, delta)) < 1e-5 * 100);
    }

    CHECK_THROWS_AS(log_bf_large_p_approx(100, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(log_bf_large_p_approx(100, 2.0, 0.5, 1.5), DomainError);
    CHECK_THROWS_AS(log_bf_large_p_approx(100, 2.0, -0.1), DomainError);
}

TEST_CASE("group-means log Bayes factor") {
    Eigen::VectorXd zeros = Eigen::VectorXd::Zero(4);
    CHECK(berger_log_bf(zeros, 1, 2.0) ==
          doctest::Approx(2.0 * std::log(0.5)).epsilon(1e-14));

    RngStream rng(43, 0);
    Eigen::VectorXd means(6);
    for (Eigen::Index g = 0; g < 6; ++g) means(g) = rng.normal();
    const double base = berger_log_bf(means, 2, 3.0);
    const double doubled = berger_log_bf(2.0 * means, 2, 3.0);
    const double penalty = 3.0 * std::log(3.0 / 7.0);
    CHECK(doubled - penalty == doctest::Approx(4.0 * (base - penalty))
                                   .epsilon(1e-12));

    for (int trial = 0; trial < 50; ++trial) {
        const std::int64_t p = 1 + static_cast<std::int64_t>(rng.uniform() * 9);
        const std::int64_t m = 1 + static_cast<std::int64_t>(rng.uniform() * 4);
        const double t = 1.0 + 4.0 * rng.uniform();
        Eigen::VectorXd mu(p);
        std::vector<double> mu_std(p);
        for (Eigen::Index g = 0; g < p; ++g) {
            mu[g] = rng.normal();
            mu_std[static_cast<std::size_t>(g)] = mu[g];
        }
        CHECK(berger_log_bf(mu, m, t) ==
              doctest::Approx(oracles::berger_log_bf_alt(mu_std, m, t))
                  .epsilon(1e-12));
    }

    CHECK_THROWS_AS(berger_log_bf(Eigen::VectorXd(0), 1, 2.0), EmptyInput);
    CHECK_THROWS_AS(berger_log_bf(zeros, 0, 2.0), DomainError);
    CHECK_THROWS_AS(berger_log_bf(zeros, 1, 0.5), DomainError);
}
