// Consistency thresholds for nested-model Bayes factors under growing model
// dimension: the critical separation curves delta(r) and delta(r, s), the
// limiting values of the residual ratio statistic, the regime classifier,
// and the group-means comparison bound R(t, m).
#pragma once

#include <cstdint>
#include <optional>

#include "bfgrow/errors.hpp"

namespace bfgrow {

/// Growth rates of the nested dimension i = O(n^a) and the full dimension
/// p = O(n^b). When b = 1 the ratio r = lim n/p must be supplied (r > 1);
/// when a = 1 the ratio s = lim n/i must be supplied with s >= r.
struct GrowthRegime {
    GrowthRegime(double a_in, double b_in,
                 std::optional<double> r_in = std::nullopt,
                 std::optional<double> s_in = std::nullopt);

    double a;
    double b;
    std::optional<double> r;
    std::optional<double> s;

    bool full_dimension_linear() const { return b == 1.0; }
    bool nested_dimension_linear() const { return a == 1.0; }
};

enum class Consistency {
    ConsistentUnderBoth,
    InconsistentUnderAlternative,
    BoundaryIndeterminate,
};

/// Outcome of comparing a limiting separation against the regime's critical
/// threshold. margin = delta_lim - threshold_used; the verdict is boundary
/// when |margin| falls within the caller's tolerance.
struct ConsistencyVerdict {
    Consistency verdict = Consistency::BoundaryIndeterminate;
    double threshold_used = 0.0;
    double margin = 0.0;
};

/// Critical separation for regimes where the full dimension grows linearly
/// (p ~ n/r) and the nested one does not:
///
///   delta(r) = (r - 1) / ((r + 1)^((r-1)/r) - 1) - 1,   r > 1.
///
/// Strictly decreasing and convex, tending to 1/log2 - 1 as r -> 1 and to 0
/// as r -> infinity. Near r = 1 the quotient cancels catastrophically, so a
/// second-order expansion around the limit takes over for |r - 1| < 1e-4.
double delta_r(double r);

/// Analytic continuation of the same expression to r >= 0, exposed for
/// testing the documented endpoint limits: the value is 1/log2 - 1 at r = 1
/// and 1/(e - 1) at r = 0. Agrees with delta_r for r > 1.
double delta_r_extended(double r);

/// Critical separation when both dimensions grow linearly (p ~ n/r,
/// i ~ n/s), finite s > r > 1:
///
///   delta(r, s) = (r-1) / ((r+1)^(s(r-1)/(r(s-1))) - 1) - 1 + 1/s.
///
/// Tends to delta(r) as s -> infinity and to 0 as s -> r+. An infinite s
/// delegates to delta_r.
double delta_rs(double r, double s);

/// Bound on the limiting mean square of the group means below which the
/// group-means Bayes factor is inconsistent under the alternative:
///
///   R(t, m) = ((2m + t) / (2 m^2)) * log((2m + t)/t) - 1/m,
///
/// decreasing in both arguments. t >= 1, integer m >= 1.
double berger_bound_R(double t, std::int64_t m);

/// True iff tau_sq lies strictly inside the inconsistency region
/// (0, R(t, m)).
bool in_region_C(double t, std::int64_t m, double tau_sq);

/// Limit in probability of the residual ratio statistic under the given
/// regime. under_null selects the limit when the nested model generates the
/// data (delta is ignored there); otherwise the full model generates data at
/// limiting separation delta.
double bip_limit(const GrowthRegime& regime, double delta, bool under_null);

/// Compares delta_lim against the regime's critical threshold: delta(r, s)
/// when both dimensions are linear in n, delta(r) when only the full one is,
/// and 0 otherwise. |delta_lim - threshold| <= tol yields the boundary
/// verdict, mirroring that no conclusion is available at exact equality.
ConsistencyVerdict classify(const GrowthRegime& regime, double delta_lim,
                            double tol = 1e-9);

}  // namespace bfgrow
