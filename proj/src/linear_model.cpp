#include "bfgrow/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bfgrow {

namespace {

// Rank of a matrix judged against the same threshold Eigen's ColPivHouseholderQR
// uses by default, made explicit here so the contract is visible.
Eigen::Index numerical_rank(const Eigen::MatrixXd& m) {
    if (m.cols() == 0) return 0;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    const double scale = std::abs(qr.matrixQR()(0, 0));
    const double tol = static_cast<double>(std::max(m.rows(), m.cols())) *
                       std::numeric_limits<double>::epsilon() * scale;
    if (scale == 0.0) return 0;
    Eigen::Index rank = 0;
    const Eigen::Index k = std::min(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < k; ++j) {
        if (std::abs(qr.matrixQR()(j, j)) > tol) ++rank;
    }
    return rank;
}

// RSS through the QR route: residual = |Q2' y|^2 where Q2 spans the
// orthogonal complement of the column space. householderQr is rank-revealing
// enough here because designs are validated full rank on construction.
double rss_impl(const Eigen::Ref<const Eigen::MatrixXd>& x,
                const ResponseVector& y) {
    const Eigen::Index k = x.cols();
    if (k == 0) return y.squaredNorm();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
    Eigen::VectorXd qty = qr.householderQ().adjoint() * y;
    return qty.tail(y.size() - k).squaredNorm();
}

}  // namespace

DesignMatrix::DesignMatrix(Eigen::MatrixXd entries)
    : entries_(std::move(entries)) {
    const Eigen::Index n = entries_.rows();
    const Eigen::Index k = entries_.cols();
    if (n < 1) {
        throw DimensionError("DesignMatrix: need at least one row, got " +
                             std::to_string(n));
    }
    if (!entries_.allFinite()) {
        throw DomainError("DesignMatrix: entries must be finite");
    }
    if (k >= 1) {
        if (n < k) {
            throw DimensionError("DesignMatrix: more columns (" +
                                 std::to_string(k) + ") than rows (" +
                                 std::to_string(n) + ")");
        }
        if (numerical_rank(entries_) < k) {
            throw RankDeficient("DesignMatrix: columns are linearly dependent");
        }
    }
}

NestedModelPair::NestedModelPair(DesignMatrix full, Eigen::Index nested_cols)
    : full_(std::move(full)), nested_cols_(nested_cols) {
    if (nested_cols_ < 0 || nested_cols_ > full_.cols()) {
        throw DimensionError("NestedModelPair: nested_cols " +
                             std::to_string(nested_cols_) +
                             " outside [0, " + std::to_string(full_.cols()) +
                             "]");
    }
    if (full_.rows() <= full_.cols()) {
        throw DimensionError(
            "NestedModelPair: need n > p for positive residual degrees of "
            "freedom, got n = " + std::to_string(full_.rows()) +
            ", p = " + std::to_string(full_.cols()));
    }
}

NestedModelPair build_nested_pair(const Eigen::MatrixXd& full,
                                  Eigen::Index nested_cols) {
    // Shape diagnostics first: a square matrix should report DimensionError,
    // not whatever the rank test happens to say about it.
    if (nested_cols < 0 || nested_cols > full.cols()) {
        throw DimensionError("build_nested_pair: nested_cols " +
                             std::to_string(nested_cols) + " outside [0, " +
                             std::to_string(full.cols()) + "]");
    }
    if (full.rows() <= full.cols()) {
        throw DimensionError("build_nested_pair: need n > p, got n = " +
                             std::to_string(full.rows()) +
                             ", p = " + std::to_string(full.cols()));
    }
    return NestedModelPair(DesignMatrix(full), nested_cols);
}

NestedModelPair build_nested_pair(DesignMatrix full, Eigen::Index nested_cols) {
    return NestedModelPair(std::move(full), nested_cols);
}

TrueModelSpec::TrueModelSpec(DesignMatrix design_in,
                             Eigen::VectorXd coefficients_in, double sigma_in)
    : design(std::move(design_in)),
      coefficients(std::move(coefficients_in)),
      sigma(sigma_in) {
    if (coefficients.size() != design.cols()) {
        throw DimensionError("TrueModelSpec: coefficient length " +
                             std::to_string(coefficients.size()) +
                             " does not match design columns " +
                             std::to_string(design.cols()));
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw DomainError("TrueModelSpec: sigma must be finite and >= 0");
    }
    if (!coefficients.allFinite()) {
        throw DomainError("TrueModelSpec: coefficients must be finite");
    }
}

double residual_sum_squares(const DesignMatrix& design,
                            const ResponseVector& y) {
    if (y.size() != design.rows()) {
        throw DimensionError("residual_sum_squares: response length " +
                             std::to_string(y.size()) +
                             " does not match design rows " +
                             std::to_string(design.rows()));
    }
    if (!y.allFinite()) {
        throw DomainError("residual_sum_squares: response must be finite");
    }
    return rss_impl(design.entries(), y);
}

ModelFit bip_statistic(const NestedModelPair& pair, const ResponseVector& y) {
    if (y.size() != pair.n()) {
        throw DimensionError("bip_statistic: response length " +
                             std::to_string(y.size()) +
                             " does not match design rows " +
                             std::to_string(pair.n()));
    }
    if (!y.allFinite()) {
        throw DomainError("bip_statistic: response must be finite");
    }
    ModelFit fit;
    fit.rss_reduced = rss_impl(pair.nested_entries(), y);
    // i == p means the two models coincide; reuse the value so the ratio is
    // exactly one rather than a quotient of two independently rounded numbers.
    fit.rss_full = (pair.i() == pair.p())
                       ? fit.rss_reduced
                       : rss_impl(pair.full().entries(), y);
    if (fit.rss_reduced <= 0.0) {
        throw DegenerateFit(
            "bip_statistic: submodel residual sum of squares is zero");
    }
    fit.bip_raw = fit.rss_full / fit.rss_reduced;
    fit.bip = std::clamp(fit.bip_raw, std::numeric_limits<double>::min(), 1.0);
    fit.log_bip =
        std::min(0.0, std::log(fit.rss_full) - std::log(fit.rss_reduced));
    return fit;
}

double model_distance(const NestedModelPair& pair, const TrueModelSpec& truth) {
    if (truth.design.rows() != pair.n() || truth.design.cols() != pair.p()) {
        throw DimensionError(
            "model_distance: true model design shape does not match pair");
    }
    if (truth.sigma <= 0.0) {
        throw DomainError("model_distance: sigma must be positive");
    }
    const Eigen::VectorXd mean = truth.design.entries() * truth.coefficients;
    // beta' X' (I - H_i) X beta equals the RSS of the noise-free mean
    // regressed on the submodel columns.
    const double sep = rss_impl(pair.nested_entries(), mean);
    const double n = static_cast<double>(pair.n());
    return sep / (n * truth.sigma * truth.sigma);
}

}  // namespace bfgrow
