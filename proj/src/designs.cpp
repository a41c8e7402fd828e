#include "bfgrow/designs.hpp"

#include <cmath>
#include <string>

namespace bfgrow {

DesignMatrix oneway_anova_design(std::int64_t groups, std::int64_t replicates) {
    if (groups < 1 || replicates < 1) {
        throw DimensionError(
            "oneway_anova_design: groups and replicates must be >= 1");
    }
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(groups * replicates, groups);
    for (std::int64_t g = 0; g < groups; ++g) {
        x.block(g * replicates, g, replicates, 1).setOnes();
    }
    return DesignMatrix(std::move(x));
}

double oneway_distance(const Eigen::VectorXd& mu, double sigma) {
    if (mu.size() < 1) {
        throw EmptyInput("oneway_distance: need at least one group mean");
    }
    if (!(sigma > 0.0)) {
        throw DomainError("oneway_distance: sigma must be positive");
    }
    const double mean = mu.mean();
    const double ss = (mu.array() - mean).square().sum();
    return ss / (sigma * sigma * static_cast<double>(mu.size()));
}

namespace {

// Sum-to-zero score of a factor level against one of its L-1 effect columns:
// +1 on the column's own level, -1 on the last level, 0 elsewhere.
double effect_score(std::int64_t level, std::int64_t column,
                    std::int64_t n_levels) {
    if (level == column) return 1.0;
    if (level == n_levels - 1) return -1.0;
    return 0.0;
}

}  // namespace

FactorialDesign factorial_design(const std::array<std::int64_t, 3>& levels,
                                 std::int64_t replicates,
                                 bool include_three_way) {
    const std::int64_t I = levels[0], J = levels[1], K = levels[2];
    if (I < 2 || J < 2 || K < 2) {
        throw DimensionError(
            "factorial_design: every factor needs at least 2 levels");
    }
    if (replicates < 1) {
        throw DimensionError("factorial_design: replicates must be >= 1");
    }
    const std::int64_t n = I * J * K * replicates;
    const std::int64_t cols =
        1 + (I - 1) + (J - 1) + (K - 1) + (I - 1) * (J - 1) +
        (I - 1) * (K - 1) + (J - 1) * (K - 1) +
        (include_three_way ? (I - 1) * (J - 1) * (K - 1) : 0);

    Eigen::MatrixXd x(n, cols);
    std::int64_t row = 0;
    for (std::int64_t a = 0; a < I; ++a) {
        for (std::int64_t b = 0; b < J; ++b) {
            for (std::int64_t c = 0; c < K; ++c) {
                for (std::int64_t rep = 0; rep < replicates; ++rep, ++row) {
                    std::int64_t col = 0;
                    x(row, col++) = 1.0;
                    for (std::int64_t l = 0; l < I - 1; ++l)
                        x(row, col++) = effect_score(a, l, I);
                    for (std::int64_t l = 0; l < J - 1; ++l)
                        x(row, col++) = effect_score(b, l, J);
                    for (std::int64_t l = 0; l < K - 1; ++l)
                        x(row, col++) = effect_score(c, l, K);
                    for (std::int64_t la = 0; la < I - 1; ++la)
                        for (std::int64_t lb = 0; lb < J - 1; ++lb)
                            x(row, col++) = effect_score(a, la, I) *
                                            effect_score(b, lb, J);
                    for (std::int64_t la = 0; la < I - 1; ++la)
                        for (std::int64_t lc = 0; lc < K - 1; ++lc)
                            x(row, col++) = effect_score(a, la, I) *
                                            effect_score(c, lc, K);
                    for (std::int64_t lb = 0; lb < J - 1; ++lb)
                        for (std::int64_t lc = 0; lc < K - 1; ++lc)
                            x(row, col++) = effect_score(b, lb, J) *
                                            effect_score(c, lc, K);
                    if (include_three_way) {
                        for (std::int64_t la = 0; la < I - 1; ++la)
                            for (std::int64_t lb = 0; lb < J - 1; ++lb)
                                for (std::int64_t lc = 0; lc < K - 1; ++lc)
                                    x(row, col++) = effect_score(a, la, I) *
                                                    effect_score(b, lb, J) *
                                                    effect_score(c, lc, K);
                    }
                }
            }
        }
    }

    FactorialDesign out{DesignMatrix(std::move(x)), cols};
    return out;
}

DimensionGrowth factorial_growth_order(bool i_grows, bool j_grows,
                                       bool k_grows) {
    const int growing = static_cast<int>(i_grows) + static_cast<int>(j_grows) +
                        static_cast<int>(k_grows);
    if (growing == 0) {
        throw DomainError(
            "factorial_growth_order: at least one factor must grow");
    }
    return growing == 3 ? DimensionGrowth::NegligibleVsSampleSize
                        : DimensionGrowth::ProportionalToSampleSize;
}

}  // namespace bfgrow
