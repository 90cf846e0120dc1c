#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace pchaos {

// Counter-based splittable generator. The n-th output of a stream is a pure
// function of (seed, stream_id, n), so sub-streams can be handed to workers
// in any order and still reproduce the same numbers.
class SeededRng {
public:
  using result_type = std::uint64_t;

  explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  // Child stream; independent of the parent's position.
  SeededRng split(std::uint64_t sub_stream) const;

  std::uint64_t next_u64() { return mix(key_ + gamma * counter_++); }
  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n) by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t n);
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  static std::uint64_t mix(std::uint64_t z);

private:
  static constexpr std::uint64_t gamma = 0x9E3779B97F4A7C15ULL;
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Wigner semicircle law on [-2, 2].
template <std::floating_point Real>
Real semicircle_pdf(Real lambda) {
  if (!(std::abs(lambda) <= Real(2))) return Real(0);
  return std::sqrt(Real(4) - lambda * lambda) / (Real(2) * std::numbers::pi_v<Real>);
}

template <std::floating_point Real>
Real semicircle_cdf(Real x) {
  if (x <= Real(-2)) return Real(0);
  if (x >= Real(2)) return Real(1);
  const Real pi = std::numbers::pi_v<Real>;
  Real f = (x * std::sqrt(Real(4) - x * x) + Real(4) * std::asin(x / Real(2))) / (Real(4) * pi) +
           Real(0.5);
  return std::clamp(f, Real(0), Real(1));
}

inline constexpr double kInvCdfTolerance = 1e-12;

// Bisection on the closed-form cdf; throws std::domain_error for u outside [0, 1].
template <std::floating_point Real>
Real semicircle_inv_cdf(Real u) {
  if (!(u >= Real(0) && u <= Real(1)))
    throw std::domain_error("semicircle_inv_cdf: probability outside [0, 1]");
  if (u == Real(0)) return Real(-2);
  if (u == Real(1)) return Real(2);
  Real lo = -2, hi = 2;
  while (hi - lo > Real(kInvCdfTolerance)) {
    Real mid = Real(0.5) * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (semicircle_cdf(mid) < u)
      lo = mid;
    else
      hi = mid;
  }
  return Real(0.5) * (lo + hi);
}

struct SemicircleDist {
  double support_low = -2.0;
  double support_high = 2.0;

  double pdf(double x) const { return semicircle_pdf(x); }
  double cdf(double x) const { return semicircle_cdf(x); }
  double inv_cdf(double u) const { return semicircle_inv_cdf(u); }
  double operator()(SeededRng& rng) const { return semicircle_inv_cdf(rng.uniform()); }
};

// Polynomial hash family over GF(q): x -> (sum_j c_j x^j mod q) mod 2^m.
// Uniform coefficients make any `degree` distinct inputs jointly uniform mod q.
struct KWiseFamily {
  unsigned degree = 1;
  std::uint64_t prime_modulus = 2;
  std::vector<std::uint64_t> coefficients;
  unsigned output_bits = 1;

  // Fresh family with q the smallest prime >= 2^output_bits.
  static KWiseFamily random(unsigned degree, unsigned output_bits, SeededRng& rng);
};

std::uint64_t kwise_eval(const KWiseFamily& family, std::uint64_t x);

bool is_prime(std::uint64_t n);
std::uint64_t next_prime(std::uint64_t n);

enum class BesselKind { I1, J1 };

inline constexpr double kBesselMaxArgument = 1e4;

// I1(x) = (1/pi) int_0^pi e^{x cos th} cos th dth
// J1(x) = (1/pi) int_0^pi cos(th - x sin th) dth
// Both integrands are smooth and periodic, so the trapezoid rule converges
// geometrically; panels are doubled until successive estimates agree.
double bessel(BesselKind kind, double x);
inline double bessel_i1(double x) { return bessel(BesselKind::I1, x); }
inline double bessel_j1(double x) { return bessel(BesselKind::J1, x); }
// e^{-|x|} I1(x); stays finite over the whole validity range.
double bessel_i1_scaled(double x);
// k-th positive root of J1 (k >= 1), bracketed on a grid then bisected.
double bessel_j1_root(int k);

}  // namespace pchaos
