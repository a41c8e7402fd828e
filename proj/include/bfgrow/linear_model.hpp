// Nested normal linear models: design matrices, residual sums of squares,
// the residual ratio statistic, and the scaled separation between a fitted
// full model and a nested submodel.
#pragma once

#include <Eigen/Dense>

#include "bfgrow/errors.hpp"

namespace bfgrow {

using ResponseVector = Eigen::VectorXd;

/// A fixed n x k design matrix with full column rank.
///
/// Construction validates the rank via a column-pivoted QR decomposition with
/// tolerance max(n, k) * machine-eps * |largest pivot|, so downstream code can
/// rely on invertibility of X'X. A matrix with zero columns is permitted and
/// represents the empty model. Square full-rank designs (n == k) are allowed;
/// they arise for saturated layouts.
class DesignMatrix {
public:
    explicit DesignMatrix(Eigen::MatrixXd entries);

    const Eigen::MatrixXd& entries() const { return entries_; }
    Eigen::Index rows() const { return entries_.rows(); }
    Eigen::Index cols() const { return entries_.cols(); }

private:
    Eigen::MatrixXd entries_;
};

/// A full n x p design together with a nested submodel formed by its first
/// `nested_cols` columns. Requires n > p so the residual degrees of freedom
/// are positive; 0 <= nested_cols <= p.
class NestedModelPair {
public:
    NestedModelPair(DesignMatrix full, Eigen::Index nested_cols);

    const DesignMatrix& full() const { return full_; }
    Eigen::Index n() const { return full_.rows(); }
    Eigen::Index p() const { return full_.cols(); }
    Eigen::Index i() const { return nested_cols_; }

    /// The first i columns of the full design (a view, no copy).
    Eigen::Ref<const Eigen::MatrixXd> nested_entries() const {
        return full_.entries().leftCols(nested_cols_);
    }

private:
    DesignMatrix full_;
    Eigen::Index nested_cols_;
};

/// Convenience builder validating shape before the rank check, so a square
/// or short-fat matrix reports DimensionError rather than failing the
/// rank test first.
NestedModelPair build_nested_pair(const Eigen::MatrixXd& full,
                                  Eigen::Index nested_cols);
NestedModelPair build_nested_pair(DesignMatrix full, Eigen::Index nested_cols);

/// A data-generating model y = X beta + sigma * z with z standard normal.
/// sigma == 0 is tolerated as a degenerate noise-free limit used in tests;
/// operations that divide by sigma reject it.
struct TrueModelSpec {
    TrueModelSpec(DesignMatrix design_in, Eigen::VectorXd coefficients_in,
                  double sigma_in);

    DesignMatrix design;
    Eigen::VectorXd coefficients;
    double sigma;
};

/// Least-squares residual sum of squares of y on the given design,
/// computed from the orthogonal factor of a QR decomposition rather than
/// through explicit projection matrices. A design with zero columns yields
/// |y|^2.
double residual_sum_squares(const DesignMatrix& design,
                            const ResponseVector& y);

/// Residual sums of squares of both models in a nested pair plus the ratio
/// statistic B = RSS_full / RSS_reduced and its logarithm.
struct ModelFit {
    double rss_reduced = 0.0;  ///< submodel residual sum of squares
    double rss_full = 0.0;     ///< full-model residual sum of squares
    double bip = 0.0;          ///< ratio clamped into (0, 1]
    double log_bip = 0.0;      ///< log of the clamped ratio, <= 0
    double bip_raw = 0.0;      ///< unclamped ratio, for diagnostics
};

/// Fits both models of the pair to y. Throws DegenerateFit when the
/// submodel residual sum of squares is zero (the ratio is undefined), and
/// DimensionError when y's length differs from the design's row count.
/// Nesting guarantees rss_full <= rss_reduced up to roundoff; the ratio is
/// clamped into (0, 1] so that callers can take logarithms safely.
ModelFit bip_statistic(const NestedModelPair& pair, const ResponseVector& y);

/// Scaled separation between the true full model and the nested submodel:
///
///   delta = beta' X' (I - H_i) X beta / (n * sigma^2),
///
/// where H_i projects onto the submodel's column space. Computed via the
/// residual of X beta regressed on the submodel columns, so no n x n
/// projector is formed. Zero exactly when X beta lies in the submodel's
/// span; invariant under shifting beta by any vector whose image does.
double model_distance(const NestedModelPair& pair, const TrueModelSpec& truth);

}  // namespace bfgrow
