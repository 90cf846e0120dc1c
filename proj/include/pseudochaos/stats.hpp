#pragma once

#include <span>
#include <vector>

namespace pchaos {

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

// Sample mean and standard error of the mean (pairwise-summed).
Estimate mean_and_error(std::span<const double> xs);
double sample_variance(std::span<const double> xs);

// Upper regularized incomplete gamma Q(a, x).
double gamma_q(double a, double x);
// P[chi^2_dof >= stat].
double chi_squared_sf(double stat, double dof);
// Asymptotic Kolmogorov tail P[K > x].
double kolmogorov_sf(double x);

// One-sample KS statistic of xs against a cdf.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf&& cdf);
double ks_pvalue(double stat, std::size_t n);

// Two-sample KS statistic and p-value.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
double ks_two_sample_pvalue(double stat, std::size_t na, std::size_t nb);

struct HistogramCounts {
  double lo = 0.0;
  double width = 1.0;
  std::vector<long long> counts;
  long long total = 0;
  long long overflow = 0;
};

HistogramCounts histogram(std::span<const double> xs, double lo, double hi, std::size_t bins);

}  // namespace pchaos

#include <algorithm>

namespace pchaos {

template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf&& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

}  // namespace pchaos
