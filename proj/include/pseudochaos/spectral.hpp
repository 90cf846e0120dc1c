#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "pseudochaos/ensembles.hpp"
#include "pseudochaos/parallel.hpp"
#include "pseudochaos/quadrature.hpp"
#include "pseudochaos/stats.hpp"

namespace pchaos {

enum class GapNormalization { TimesD, MeanGap };

struct GapSample {
  std::vector<double> gaps;
  GapNormalization normalization = GapNormalization::TimesD;
};

// Consecutive differences of an ascending spectrum, scaled by d or by the
// sample mean gap. A fully degenerate spectrum under MeanGap stays all-zero.
GapSample level_spacings(const Eigen::VectorXd& ascending, GapNormalization norm);
inline GapSample level_spacings(const Spectrum& s, GapNormalization norm) {
  return level_spacings(s.eigenvalues, norm);
}

inline constexpr double kDefaultBulkFraction = 0.8;

// Gaps between levels in the middle `fraction` of the spectrum, still
// scaled by the full d (TimesD) or by their own mean (MeanGap).
GapSample bulk_spacings(const Eigen::VectorXd& ascending, GapNormalization norm,
                        double fraction = kDefaultBulkFraction);

// Nearest-neighbour gap density of d iid semicircle levels, in raw energy
// units s: P(s) = d int p(l) p(l+s) (1 + F(l) - F(l+s))^{d-2} dl.
double iid_gap_pdf(double s, long d);
// Same density in normalized units s_hat = d s.
inline double iid_gap_pdf_hat(double s_hat, long d) {
  return iid_gap_pdf(s_hat / static_cast<double>(d), d) / static_cast<double>(d);
}

// Histogram-based estimate of the s_hat -> 0 density: weighted quadratic
// fit over the first `bins` bins of width `bin_width`, evaluated at zero.
struct InterceptFit {
  double intercept = 0.0;
  double std_error = 0.0;
};
InterceptFit extrapolate_zero_density(std::span<const double> gaps, double bin_width, int bins);

// Approximate k-point marginal of the GUE eigenvalue law (k = 1 or 2):
// (d-k)! (d/pi)^k / d! * det(A + B).
double marginal_density(int k, std::span<const double> lambdas, long d);
inline double marginal_density(double l1, long d) {
  const double x[1] = {l1};
  return marginal_density(1, x, d);
}
inline double marginal_density(double l1, double l2, long d) {
  const double x[2] = {l1, l2};
  return marginal_density(2, x, d);
}

struct MarginalGrid {
  int order = 1;
  long dim = 2;
  std::vector<double> coordinates;
  // order 1: coordinates.size() values; order 2: row-major square grid.
  std::vector<double> density;

  // Tensor trapezoid integral over the grid.
  double integral() const;
};

MarginalGrid tabulate_marginal(int order, long d, std::size_t points);

// 2D integral of the k = 2 marginal over [-2, 2]^2 (nested adaptive quadrature).
QuadratureResult integrate_marginal2(long d, double abs_tol = 1e-7);

// (1/2) int |p2 - p1 x p1| over [-2, 2]^2.
QuadratureResult tv_distance_marginal2(long d, double abs_tol = 1e-6);

// Z(Lambda t) = (1/d) sum_j e^{-i lambda_j t}.
template <typename Derived>
std::complex<double> spectral_form_factor(const Eigen::DenseBase<Derived>& lambda, double t) {
  double re = 0.0, im = 0.0;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    const double x = static_cast<double>(lambda[j]) * t;
    re += std::cos(x);
    im -= std::sin(x);
  }
  const double n = static_cast<double>(lambda.size());
  return {re / n, im / n};
}
inline std::complex<double> spectral_form_factor(const Spectrum& s, double t) {
  return spectral_form_factor(s.eigenvalues, t);
}

struct FormFactorSeries {
  std::vector<double> times;
  std::vector<std::complex<double>> z_values;
};
FormFactorSeries form_factor_series(const Eigen::VectorXd& lambda, std::span<const double> times);

// Early-time prediction (J1(2t)/t)^{2k}; equals 1 at t = 0.
double sff_early_time_prediction(int k, double t);

// Monte-Carlo mean of |Z(Lambda t)|^{2k} over fresh spectra. Sample i uses
// rng.split(i), so the estimate is independent of exec.threads.
Estimate sff_moments(const EnsembleSpec& spec, int k, double t, std::size_t n_samples,
                     const SeededRng& rng, Exec exec = {});

enum class WrapSampling { Iid, Stratified };

// Circular KS (Kuiper) distance between {lambda t mod 2 pi : lambda ~ semicircle}
// and the uniform law on the circle. Stratified sampling draws one point per
// stratum, u_i = (i + v_i) / n with v_i uniform.
double phase_wrap_distance(double t, std::size_t n_samples, SeededRng& rng,
                           WrapSampling sampling = WrapSampling::Stratified);

// Kuiper statistic of points in [0, 1) against the uniform law.
double kuiper_uniform(std::vector<double> u);

}  // namespace pchaos
