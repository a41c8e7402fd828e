#include "bfgrow/rng.hpp"

#include <cmath>

namespace bfgrow {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    // Hash (seed, stream_id) into one engine seed so that neighboring stream
    // ids do not produce correlated initial states.
    std::uint64_t state = seed;
    const std::uint64_t mixed_seed = splitmix64(state);
    state ^= stream_id + 0x9E3779B97F4A7C15ULL + (mixed_seed << 6) +
             (mixed_seed >> 2);
    engine_.seed(splitmix64(state));
}

double RngStream::uniform() {
    // 53 random bits centered on half-integers: values lie strictly inside
    // (0, 1), so logarithms of either tail are safe.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

double sample_gamma(double shape, RngStream& rng) {
    if (!(shape > 0.0)) {
        throw DomainError("sample_gamma: shape must be positive");
    }
    if (shape < 1.0) {
        return sample_gamma(shape + 1.0, rng) *
               std::pow(rng.uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

namespace {

// Transformed rejection with squeeze (Hormann's PTRS), valid for mean >= 10.
std::int64_t poisson_ptrs(double mean, RngStream& rng) {
    const double log_mean = std::log(mean);
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kf * log_mean - mean - std::lgamma(kf + 1.0)) {
            return static_cast<std::int64_t>(kf);
        }
    }
}

}  // namespace

std::int64_t sample_poisson(double mean, RngStream& rng) {
    if (!(mean >= 0.0) || std::isinf(mean)) {
        throw DomainError("sample_poisson: mean must be finite and >= 0");
    }
    if (mean == 0.0) return 0;
    if (mean < 10.0) {
        const double limit = std::exp(-mean);
        std::int64_t k = 0;
        double prod = rng.uniform();
        while (prod > limit) {
            ++k;
            prod *= rng.uniform();
        }
        return k;
    }
    if (mean <= 1e6) return poisson_ptrs(mean, rng);
    // Beyond 1e6 the relative error of the normal approximation is below
    // sampling noise for any test this library runs.
    const long long draw = std::llround(mean + std::sqrt(mean) * rng.normal());
    return draw < 0 ? 0 : static_cast<std::int64_t>(draw);
}

double sample_chisq(double df, RngStream& rng) {
    if (!(df > 0.0)) {
        throw DomainError("sample_chisq: df must be positive");
    }
    return 2.0 * sample_gamma(0.5 * df, rng);
}

double sample_noncentral_chisq(double df, double lambda, RngStream& rng) {
    if (!(df > 0.0)) {
        throw DomainError("sample_noncentral_chisq: df must be positive");
    }
    if (!(lambda >= 0.0)) {
        throw DomainError("sample_noncentral_chisq: lambda must be >= 0");
    }
    if (lambda == 0.0) return sample_chisq(df, rng);
    const std::int64_t k = sample_poisson(0.5 * lambda, rng);
    return sample_chisq(df + 2.0 * static_cast<double>(k), rng);
}

double sample_dnc_beta(double v1, double v2, double l1, double l2,
                       RngStream& rng) {
    if (!(v1 > 0.0) || !(v2 > 0.0)) {
        throw DomainError("sample_dnc_beta: shapes must be positive");
    }
    const double y1 = sample_noncentral_chisq(2.0 * v1, l1, rng);
    const double y2 = sample_noncentral_chisq(2.0 * v2, l2, rng);
    return y1 / (y1 + y2);
}

}  // namespace bfgrow
