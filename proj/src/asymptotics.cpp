#include "bfgrow/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace bfgrow {

GrowthRegime::GrowthRegime(double a_in, double b_in, std::optional<double> r_in,
                           std::optional<double> s_in)
    : a(a_in), b(b_in), r(r_in), s(s_in) {
    if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
        throw ConfigError("GrowthRegime: exponents must lie in [0, 1]");
    }
    if (a > b) {
        throw ConfigError("GrowthRegime: nested exponent a must not exceed b");
    }
    if (b == 1.0) {
        if (!r || !(*r > 1.0) || !std::isfinite(*r)) {
            throw ConfigError("GrowthRegime: b = 1 requires finite r > 1");
        }
    } else if (r) {
        throw ConfigError("GrowthRegime: r is only meaningful when b = 1");
    }
    if (a == 1.0) {
        if (!s || !(*s >= *r) || !std::isfinite(*s)) {
            throw ConfigError("GrowthRegime: a = 1 requires finite s >= r");
        }
    } else if (s) {
        throw ConfigError("GrowthRegime: s is only meaningful when a = 1");
    }
}

namespace {

// Second-order expansion of the critical separation about r = 1, where the
// closed form divides two quantities that both vanish. Writing
// g(eps) = (eps/(1+eps))*log(2+eps) = L*eps + A*eps^2 + B*eps^3 + ... with
// L = log 2, the expansion of eps/(e^g - 1) - 1 follows from inverting the
// series of (e^g - 1)/eps.
double delta_near_one(double eps) {
    const double L = std::log(2.0);
    const double A = 0.5 - L;
    const double B = L - 0.625;
    const double u = (A + 0.5 * L * L) / L;
    const double v = (B + L * A + L * L * L / 6.0) / L;
    return (1.0 / L - 1.0) - (u / L) * eps + ((u * u - v) / L) * eps * eps;
}

// Direct evaluation of (r-1)/((r+1)^((r-1)/r) - 1) - 1 in extended precision;
// expm1/log1p keep the exponent accurate when the whole expression is small.
double delta_direct(double r) {
    const long double rl = r;
    const long double expo = (rl - 1.0L) / rl * std::log1p(rl);
    return static_cast<double>((rl - 1.0L) / std::expm1(expo) - 1.0L);
}

}  // namespace

double delta_r(double r) {
    if (!(r > 1.0)) {
        throw DomainError("delta_r: requires r > 1");
    }
    if (std::isinf(r)) return 0.0;
    if (r - 1.0 < 1e-4) return delta_near_one(r - 1.0);
    return delta_direct(r);
}

double delta_r_extended(double r) {
    if (!(r >= 0.0)) {
        throw DomainError("delta_r_extended: requires r >= 0");
    }
    if (std::isinf(r)) return 0.0;
    if (r == 0.0) return 1.0 / std::expm1(1.0);
    if (std::abs(r - 1.0) < 1e-4) return delta_near_one(r - 1.0);
    return delta_direct(r);
}

double delta_rs(double r, double s) {
    if (std::isinf(s)) return delta_r(r);
    if (!(r > 1.0) || !(s > r)) {
        throw DomainError("delta_rs: requires s > r > 1");
    }
    const long double rl = r, sl = s;
    const long double expo =
        sl * (rl - 1.0L) / (rl * (sl - 1.0L)) * std::log1p(rl);
    return static_cast<double>((rl - 1.0L) / std::expm1(expo) - 1.0L +
                               1.0L / sl);
}

double berger_bound_R(double t, std::int64_t m) {
    if (!(t >= 1.0) || m < 1) {
        throw DomainError("berger_bound_R: requires t >= 1 and m >= 1");
    }
    const double md = static_cast<double>(m);
    const double top = 2.0 * md + t;
    return top / (2.0 * md * md) * std::log(top / t) - 1.0 / md;
}

bool in_region_C(double t, std::int64_t m, double tau_sq) {
    if (!(tau_sq >= 0.0)) {
        throw DomainError("in_region_C: tau_sq must be >= 0");
    }
    return tau_sq > 0.0 && tau_sq < berger_bound_R(t, m);
}

double bip_limit(const GrowthRegime& regime, double delta, bool under_null) {
    if (!under_null && !(delta >= 0.0)) {
        throw DomainError("bip_limit: delta must be >= 0");
    }
    if (!regime.full_dimension_linear()) {
        return under_null ? 1.0 : 1.0 / (1.0 + delta);
    }
    const double r = *regime.r;
    if (!regime.nested_dimension_linear()) {
        return under_null ? (r - 1.0) / r : (1.0 - 1.0 / r) / (1.0 + delta);
    }
    const double s = *regime.s;
    return under_null ? s * (r - 1.0) / (r * (s - 1.0))
                      : (1.0 - 1.0 / r) / (1.0 + delta - 1.0 / s);
}

ConsistencyVerdict classify(const GrowthRegime& regime, double delta_lim,
                            double tol) {
    if (!(delta_lim >= 0.0)) {
        throw DomainError("classify: delta_lim must be >= 0");
    }
    if (!(tol > 0.0)) {
        throw DomainError("classify: tol must be positive");
    }
    ConsistencyVerdict out;
    if (!regime.full_dimension_linear()) {
        out.threshold_used = 0.0;
    } else if (!regime.nested_dimension_linear()) {
        out.threshold_used = delta_r(*regime.r);
    } else {
        out.threshold_used = delta_rs(*regime.r, *regime.s);
    }
    out.margin = delta_lim - out.threshold_used;
    if (std::abs(out.margin) <= tol) {
        out.verdict = Consistency::BoundaryIndeterminate;
    } else if (out.margin > 0.0) {
        out.verdict = Consistency::ConsistentUnderBoth;
    } else {
        out.verdict = Consistency::InconsistentUnderAlternative;
    }
    return out;
}

}  // namespace bfgrow
