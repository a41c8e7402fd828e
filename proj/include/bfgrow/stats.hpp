// Distributional test utilities: the regularized incomplete beta function
// (beta CDF) and Kolmogorov-Smirnov distances with asymptotic critical
// values.
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "bfgrow/errors.hpp"

namespace bfgrow {

/// I_x(a, b), the CDF of the Beta(a, b) distribution, via continued-fraction
/// evaluation with the symmetry switch I_x(a,b) = 1 - I_{1-x}(b,a) applied
/// when x exceeds the crossover point. Absolute error below 1e-12 for
/// a, b <= 500.
double regularized_incomplete_beta(double a, double b, double x);

/// Sup-norm distance between the empirical CDF of the samples and the given
/// continuous CDF.
double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf);

/// Sup-norm distance between the empirical CDFs of two samples.
double ks_two_sample_distance(std::vector<double> first,
                              std::vector<double> second);

/// CDF of the Kolmogorov distribution (the limiting law of sqrt(n) times the
/// one-sample KS distance).
double kolmogorov_cdf(double x);

/// Upper-alpha quantile of the Kolmogorov distribution, e.g. about 1.3581 at
/// alpha = 0.05 and 1.6276 at alpha = 0.01.
double kolmogorov_critical(double alpha);

/// Asymptotic critical KS distance for a one-sample test of size n.
double ks_critical_value(double alpha, std::size_t n);

/// Asymptotic critical KS distance for a two-sample test with sizes n1, n2.
double ks_two_sample_critical(double alpha, std::size_t n1, std::size_t n2);

}  // namespace bfgrow
