#pragma once

#include <span>

namespace ri {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov statistic (ties handled by advancing both
/// samples past equal values) with the asymptotic Kolmogorov p-value at
/// lambda = sqrt(n m / (n + m)) * D. Throws DomainError on empty input.
KsResult two_sample_ks(std::span<const double> a, std::span<const double> b);

/// P[K > lambda] for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// A Monte Carlo estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double standard_error = 0.0;
};

Estimate mean_estimate(std::span<const double> x);
/// Unbiased sample variance; SE from the fourth central moment.
Estimate variance_estimate(std::span<const double> x);
/// Sample covariance; SE from the spread of centred products.
Estimate covariance_estimate(std::span<const double> x, std::span<const double> y);

}  // namespace ri
