#include "pseudochaos/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pchaos {

namespace {

constexpr double pi = std::numbers::pi;

double semicircle_half_width(double l) { return 0.5 * std::sqrt(std::max(0.0, 4.0 - l * l)); }

double sinc_kernel(double delta, long d) {
  const double x = static_cast<double>(d) * delta;
  if (std::abs(delta) < 1e-12) return 1.0;
  return std::sin(x) / x;
}

// Breakpoints for integrating over l2 in [-2, 2] at fixed l1: one panel per
// half-period of the sinc kernel within a window around the diagonal, where
// the integrand oscillates and has |.| kinks.
std::vector<double> diagonal_panels(double l1, long d) {
  const double step = pi / static_cast<double>(d);
  const double window = std::min(4.0, 8.0 / std::sqrt(static_cast<double>(d)));
  std::vector<double> pts{-2.0};
  const int j_max = static_cast<int>(std::ceil(window / step));
  for (int j = -j_max; j <= j_max; ++j) {
    const double x = l1 + j * step;
    if (x > -2.0 && x < 2.0) pts.push_back(x);
  }
  pts.push_back(2.0);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

template <class Inner>
QuadratureResult nested_square(long d, Inner&& inner, double abs_tol) {
  double inner_error = 0.0;
  auto outer = [&](double l1) {
    auto pts = diagonal_panels(l1, d);
    auto r = integrate_adaptive([&](double l2) { return inner(l1, l2); }, pts, abs_tol * 0.01,
                                1e-10, 200);
    inner_error = std::max(inner_error, r.error_estimate);
    return r.value;
  };
  auto r = integrate_adaptive(outer, -2.0, 2.0, abs_tol, 1e-10, 400);
  r.error_estimate += 4.0 * inner_error;
  r.converged = r.converged && r.error_estimate <= 10.0 * abs_tol;
  return r;
}

}  // namespace

GapSample level_spacings(const Eigen::VectorXd& ascending, GapNormalization norm) {
  const Eigen::Index d = ascending.size();
  if (d < 2) throw std::invalid_argument("level_spacings: need at least two levels");
  GapSample out;
  out.normalization = norm;
  out.gaps.resize(static_cast<std::size_t>(d - 1));
  for (Eigen::Index i = 0; i + 1 < d; ++i)
    out.gaps[static_cast<std::size_t>(i)] = std::max(0.0, ascending[i + 1] - ascending[i]);
  if (norm == GapNormalization::TimesD) {
    for (auto& g : out.gaps) g *= static_cast<double>(d);
  } else {
    const double mean = pairwise_sum(out.gaps) / static_cast<double>(out.gaps.size());
    if (mean > 0)
      for (auto& g : out.gaps) g /= mean;
  }
  return out;
}

GapSample bulk_spacings(const Eigen::VectorXd& ascending, GapNormalization norm, double fraction) {
  const Eigen::Index d = ascending.size();
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("bulk_spacings: fraction must be in (0, 1]");
  const auto drop = static_cast<Eigen::Index>(std::floor(0.5 * (1.0 - fraction) * d + 1e-9));
  const Eigen::Index len = d - 2 * drop;
  if (len < 2) throw std::invalid_argument("bulk_spacings: bulk too small");
  GapSample out = level_spacings(Eigen::VectorXd(ascending.segment(drop, len)), GapNormalization::TimesD);
  // Rescale so TimesD uses the full dimension, not the bulk length.
  for (auto& g : out.gaps) g *= static_cast<double>(d) / static_cast<double>(len);
  out.normalization = norm;
  if (norm == GapNormalization::MeanGap) {
    const double mean = pairwise_sum(out.gaps) / static_cast<double>(out.gaps.size());
    if (mean > 0)
      for (auto& g : out.gaps) g /= mean;
  }
  return out;
}

double iid_gap_pdf(double s, long d) {
  if (s < 0) throw std::domain_error("iid_gap_pdf: negative gap");
  if (d < 2) throw std::invalid_argument("iid_gap_pdf: d must be >= 2");
  if (s >= 4.0) return 0.0;
  const double power = static_cast<double>(d - 2);
  auto f = [&](double l) {
    const double a = semicircle_pdf(l) * semicircle_pdf(l + s);
    if (a == 0.0) return 0.0;
    const double window = 1.0 + semicircle_cdf(l) - semicircle_cdf(l + s);
    return a * std::pow(std::max(window, 0.0), power);
  };
  auto r = integrate_adaptive(f, -2.0, 2.0 - s, 1e-14, 1e-11);
  return static_cast<double>(d) * r.value;
}

InterceptFit extrapolate_zero_density(std::span<const double> gaps, double bin_width, int bins) {
  if (bins < 3 || !(bin_width > 0)) throw std::invalid_argument("extrapolate_zero_density: bad bins");
  auto h = histogram(gaps, 0.0, bin_width * bins, static_cast<std::size_t>(bins));
  const double n = static_cast<double>(h.total);
  // Weighted least squares for density(x) = c0 + c1 x + c2 x^2 with Poisson weights.
  Eigen::MatrixXd a(bins, 3);
  Eigen::VectorXd y(bins), w(bins);
  for (int b = 0; b < bins; ++b) {
    const double x = (b + 0.5) * bin_width;
    const double c = static_cast<double>(h.counts[static_cast<std::size_t>(b)]);
    y[b] = c / (n * bin_width);
    const double sd = std::sqrt(std::max(c, 1.0)) / (n * bin_width);
    w[b] = 1.0 / sd;
    a(b, 0) = 1.0;
    a(b, 1) = x;
    a(b, 2) = x * x;
  }
  Eigen::MatrixXd aw = w.asDiagonal() * a;
  Eigen::VectorXd yw = w.asDiagonal() * y;
  Eigen::MatrixXd normal = aw.transpose() * aw;
  Eigen::VectorXd coef = normal.ldlt().solve(aw.transpose() * yw);
  Eigen::MatrixXd cov = normal.inverse();
  return {coef[0], std::sqrt(cov(0, 0))};
}

double marginal_density(int k, std::span<const double> lambdas, long d) {
  if (k != 1 && k != 2) throw std::invalid_argument("marginal_density: order must be 1 or 2");
  if (static_cast<int>(lambdas.size()) != k)
    throw std::invalid_argument("marginal_density: wrong number of coordinates");
  if (d < k) throw std::invalid_argument("marginal_density: d must be >= k");
  for (double l : lambdas)
    if (!(std::abs(l) <= 2.0)) throw std::domain_error("marginal_density: |lambda| > 2");
  // (d-k)! (d/pi)^k / d! = prod_{j<k} d / (pi (d - j))
  double prefactor = 1.0;
  for (int j = 0; j < k; ++j)
    prefactor *= static_cast<double>(d) / (pi * static_cast<double>(d - j));
  if (k == 1) return prefactor * semicircle_half_width(lambdas[0]);
  const double a1 = semicircle_half_width(lambdas[0]);
  const double a2 = semicircle_half_width(lambdas[1]);
  const double b = sinc_kernel(lambdas[0] - lambdas[1], d);
  return prefactor * (a1 * a2 - b * b);
}

double MarginalGrid::integral() const {
  const std::size_t n = coordinates.size();
  if (n < 2) return 0.0;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? coordinates[i] - coordinates[i - 1] : 0.0;
    const double right = i + 1 < n ? coordinates[i + 1] - coordinates[i] : 0.0;
    w[i] = 0.5 * (left + right);
  }
  double total = 0.0;
  if (order == 1) {
    for (std::size_t i = 0; i < n; ++i) total += w[i] * density[i];
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) total += w[i] * w[j] * density[i * n + j];
  }
  return total;
}

MarginalGrid tabulate_marginal(int order, long d, std::size_t points) {
  if (points < 2) throw std::invalid_argument("tabulate_marginal: need at least two points");
  MarginalGrid g;
  g.order = order;
  g.dim = d;
  g.coordinates.resize(points);
  for (std::size_t i = 0; i < points; ++i)
    g.coordinates[i] = -2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(points - 1);
  if (order == 1) {
    for (double x : g.coordinates) g.density.push_back(marginal_density(x, d));
  } else if (order == 2) {
    g.density.reserve(points * points);
    for (double x : g.coordinates)
      for (double y : g.coordinates) g.density.push_back(marginal_density(x, y, d));
  } else {
    throw std::invalid_argument("tabulate_marginal: order must be 1 or 2");
  }
  return g;
}

QuadratureResult integrate_marginal2(long d, double abs_tol) {
  if (d < 2) throw std::invalid_argument("integrate_marginal2: d must be >= 2");
  return nested_square(
      d, [d](double l1, double l2) { return marginal_density(l1, l2, d); }, abs_tol);
}

QuadratureResult tv_distance_marginal2(long d, double abs_tol) {
  if (d < 4) throw std::invalid_argument("tv_distance_marginal2: d must be >= 4");
  auto r = nested_square(
      d,
      [d](double l1, double l2) {
        const double product = semicircle_pdf(l1) * semicircle_pdf(l2);
        return std::abs(marginal_density(l1, l2, d) - product);
      },
      abs_tol);
  r.value *= 0.5;
  r.error_estimate *= 0.5;
  return r;
}

FormFactorSeries form_factor_series(const Eigen::VectorXd& lambda, std::span<const double> times) {
  FormFactorSeries s;
  s.times.assign(times.begin(), times.end());
  s.z_values.reserve(times.size());
  for (double t : times) s.z_values.push_back(spectral_form_factor(lambda, t));
  return s;
}

double sff_early_time_prediction(int k, double t) {
  const double z = t == 0.0 ? 1.0 : bessel_j1(2.0 * t) / t;
  return std::pow(z * z, k);
}

Estimate sff_moments(const EnsembleSpec& spec, int k, double t, std::size_t n_samples,
                     const SeededRng& rng, Exec exec) {
  if (k < 1 || k > 4) throw std::invalid_argument("sff_moments: k must be in [1, 4]");
  if (n_samples < 2) throw std::invalid_argument("sff_moments: need at least two samples");
  validate(spec);
  auto values = parallel_map(n_samples, exec, [&](std::size_t i) {
    SeededRng local = rng.split(i);
    const Spectrum s = sample_spectrum(spec, local);
    return std::pow(std::norm(spectral_form_factor(s, t)), k);
  });
  return mean_and_error(values);
}

double kuiper_uniform(std::vector<double> u) {
  if (u.empty()) throw std::invalid_argument("kuiper_uniform: empty sample");
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d_plus = 0.0, d_minus = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d_plus = std::max(d_plus, (i + 1) / n - u[i]);
    d_minus = std::max(d_minus, u[i] - i / n);
  }
  return d_plus + d_minus;
}

double phase_wrap_distance(double t, std::size_t n_samples, SeededRng& rng, WrapSampling sampling) {
  if (!(t > 0)) throw std::invalid_argument("phase_wrap_distance: t must be positive");
  if (n_samples == 0) throw std::invalid_argument("phase_wrap_distance: no samples");
  std::vector<double> u(n_samples);
  const double two_pi = 2.0 * pi;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double p = sampling == WrapSampling::Stratified
                         ? (static_cast<double>(i) + rng.uniform()) / static_cast<double>(n_samples)
                         : rng.uniform();
    const double phi = std::fmod(semicircle_inv_cdf(p) * t, two_pi);
    double w = (phi < 0 ? phi + two_pi : phi) / two_pi;
    if (w >= 1.0) w = 0.0;
    u[i] = w;
  }
  return kuiper_uniform(std::move(u));
}

}  // namespace pchaos
