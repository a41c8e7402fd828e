// Builders for balanced ANOVA design matrices: one-way block indicators,
// effect-coded factorial layouts, and the closed-form separation for the
// one-way case.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bfgrow/linear_model.hpp"

namespace bfgrow {

/// (p*m) x p block indicator matrix: row block j carries a 1 in column j and
/// zeros elsewhere, m rows per block. Fitting it computes group means.
DesignMatrix oneway_anova_design(std::int64_t groups, std::int64_t replicates);

/// Closed-form separation between the p-group means model and the common-mean
/// submodel on a balanced one-way layout:
///
///   (1 / sigma^2) * (1 / p) * sum_g (mu_g - mean(mu))^2.
///
/// Independent of the replicate count.
double oneway_distance(const Eigen::VectorXd& mu, double sigma);

/// An effect-coded factorial design plus its realized full-rank column count.
struct FactorialDesign {
    DesignMatrix design;
    Eigen::Index parameter_count = 0;
};

/// Balanced three-factor crossed design with sum-to-zero (effect) coding:
/// intercept, main effects, all two-factor interactions, and optionally the
/// three-factor interaction. With it the column count is the full cell-means
/// dimension I*J*K; without it the realized full-rank column count is
/// returned, 1 + (I-1) + (J-1) + (K-1) + (I-1)(J-1) + (I-1)(K-1) + (J-1)(K-1).
/// Rows are ordered cell-major (last factor fastest), replicates innermost.
FactorialDesign factorial_design(const std::array<std::int64_t, 3>& levels,
                                 std::int64_t replicates,
                                 bool include_three_way);

/// How the reduced (no-three-way) factorial parameter count scales with the
/// sample size when the flagged factors' level counts grow without bound and
/// the others stay fixed, at a fixed replicate count.
enum class DimensionGrowth {
    ProportionalToSampleSize,  ///< parameter count stays a positive fraction of n
    NegligibleVsSampleSize,    ///< parameter count is o(n)
};

/// Classifies the reduced factorial's growth: when every factor grows the
/// two-factor interactions are dominated by the cell count and the dimension
/// is o(n); when only some grow, the surviving interaction block scales
/// linearly with n. Requires at least one growing factor.
DimensionGrowth factorial_growth_order(bool i_grows, bool j_grows,
                                       bool k_grows);

}  // namespace bfgrow
