#include "bfgrow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bfgrow {

namespace {

// Continued fraction for the incomplete beta (modified Lentz), convergent
// for x below the crossover (a+1)/(a+b+2).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 400;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw Error("regularized_incomplete_beta: continued fraction stalled");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw DomainError("regularized_incomplete_beta: shapes must be > 0");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("regularized_incomplete_beta: x must be in [0, 1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                             std::lgamma(b) + a * std::log(x) +
                             b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf) {
    if (samples.empty()) {
        throw EmptyInput("ks_distance: samples must be non-empty");
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double dist = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double f = cdf(samples[k]);
        dist = std::max(dist, f - static_cast<double>(k) / n);
        dist = std::max(dist, static_cast<double>(k + 1) / n - f);
    }
    return dist;
}

double ks_two_sample_distance(std::vector<double> first,
                              std::vector<double> second) {
    if (first.empty() || second.empty()) {
        throw EmptyInput("ks_two_sample_distance: both samples must be "
                         "non-empty");
    }
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());
    const double n1 = static_cast<double>(first.size());
    const double n2 = static_cast<double>(second.size());
    std::size_t i = 0, j = 0;
    double dist = 0.0;
    while (i < first.size() && j < second.size()) {
        const double x = std::min(first[i], second[j]);
        while (i < first.size() && first[i] <= x) ++i;
        while (j < second.size() && second[j] <= x) ++j;
        dist = std::max(dist, std::abs(static_cast<double>(i) / n1 -
                                       static_cast<double>(j) / n2));
    }
    return dist;
}

double kolmogorov_cdf(double x) {
    if (x <= 0.0) return 0.0;
    // Alternating tail series 1 - 2 sum (-1)^{k-1} exp(-2 k^2 x^2); a few
    // terms suffice anywhere near the critical region.
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 1000; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-17) break;
    }
    return std::max(0.0, 1.0 - 2.0 * sum);
}

double kolmogorov_critical(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("kolmogorov_critical: alpha must be in (0, 1)");
    }
    double lo = 1e-3, hi = 5.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (kolmogorov_cdf(mid) < 1.0 - alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double ks_critical_value(double alpha, std::size_t n) {
    if (n == 0) throw EmptyInput("ks_critical_value: n must be positive");
    return kolmogorov_critical(alpha) / std::sqrt(static_cast<double>(n));
}

double ks_two_sample_critical(double alpha, std::size_t n1, std::size_t n2) {
    if (n1 == 0 || n2 == 0) {
        throw EmptyInput("ks_two_sample_critical: sizes must be positive");
    }
    const double effective = static_cast<double>(n1) *
                             static_cast<double>(n2) /
                             static_cast<double>(n1 + n2);
    return kolmogorov_critical(alpha) / std::sqrt(effective);
}

}  // namespace bfgrow
