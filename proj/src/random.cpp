#include "pseudochaos/random.hpp"

#include <numbers>

namespace pchaos {

std::uint64_t SeededRng::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id),
      key_(mix(mix(seed + 0x632BE59BD9B4E019ULL) ^ mix(stream_id + 0x8CB92BA72F3D8DD7ULL))) {}

SeededRng SeededRng::split(std::uint64_t sub_stream) const {
  return SeededRng(seed_, mix(stream_ * 0xD1342543DE82EF95ULL + mix(sub_stream + 1)));
}

std::uint64_t SeededRng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("SeededRng::below: empty range");
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t r;
  do {
    r = next_u64();
  } while (r >= limit);
  return r % n;
}

double SeededRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 == 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic witness set for 64-bit integers.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  if (n <= 2) return 2;
  std::uint64_t c = n | 1;
  while (!is_prime(c)) c += 2;
  return c;
}

KWiseFamily KWiseFamily::random(unsigned degree, unsigned output_bits, SeededRng& rng) {
  if (degree == 0) throw std::invalid_argument("KWiseFamily: degree must be positive");
  if (output_bits == 0 || output_bits > 62)
    throw std::invalid_argument("KWiseFamily: output_bits must be in [1, 62]");
  KWiseFamily f;
  f.degree = degree;
  f.output_bits = output_bits;
  f.prime_modulus = next_prime(std::uint64_t{1} << output_bits);
  f.coefficients.resize(degree);
  for (auto& c : f.coefficients) c = rng.below(f.prime_modulus);
  return f;
}

std::uint64_t kwise_eval(const KWiseFamily& family, std::uint64_t x) {
  if (x >= family.prime_modulus)
    throw std::out_of_range("kwise_eval: input outside the prime field");
  const std::uint64_t q = family.prime_modulus;
  std::uint64_t acc = 0;
  for (auto it = family.coefficients.rbegin(); it != family.coefficients.rend(); ++it)
    acc = (mulmod(acc, x, q) + *it % q) % q;
  if (family.output_bits >= 64) return acc;
  return acc & ((std::uint64_t{1} << family.output_bits) - 1);
}

namespace {

void check_bessel_range(double x) {
  if (!(std::abs(x) <= kBesselMaxArgument))
    throw std::domain_error("bessel: argument outside the supported range");
}

// Trapezoid on [0, pi] including endpoints, doubling until converged.
template <class F>
double periodic_trapezoid(F&& f, double scale_hint) {
  int n = 16;
  double h = std::numbers::pi / n;
  double sum = 0.5 * (f(0.0) + f(std::numbers::pi));
  for (int i = 1; i < n; ++i) sum += f(i * h);
  double prev = sum * h;
  for (int level = 0; level < 24; ++level) {
    n *= 2;
    h = std::numbers::pi / n;
    for (int i = 1; i < n; i += 2) sum += f(i * h);
    const double cur = sum * h;
    if (std::abs(cur - prev) <= 1e-14 * std::max(std::abs(cur), scale_hint) && n >= 64)
      return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

double bessel_i1_scaled(double x) {
  check_bessel_range(x);
  if (x == 0.0) return 0.0;
  const double ax = std::abs(x);
  double v = periodic_trapezoid(
                 [ax](double th) { return std::exp(ax * (std::cos(th) - 1.0)) * std::cos(th); },
                 1e-300) /
             std::numbers::pi;
  return x < 0 ? -v : v;
}

double bessel(BesselKind kind, double x) {
  check_bessel_range(x);
  if (kind == BesselKind::I1) {
    if (std::abs(x) > 700.0) throw std::overflow_error("bessel: I1 overflows double precision");
    return bessel_i1_scaled(x) * std::exp(std::abs(x));
  }
  if (x == 0.0) return 0.0;
  // Integrand magnitude is at most one, so absolute convergence at 1e-14 is the right scale.
  return periodic_trapezoid([x](double th) { return std::cos(th - x * std::sin(th)); }, 1.0) /
         std::numbers::pi;
}

double bessel_j1_root(int k) {
  if (k < 1) throw std::invalid_argument("bessel_j1_root: k must be >= 1");
  // Roots interlace near (j + 1/4) pi; scan with a step well below the spacing.
  const double step = 0.1;
  double a = 0.5, fa = bessel_j1(a);
  int found = 0;
  for (;;) {
    double b = a + step, fb = bessel_j1(b);
    if ((fa < 0) != (fb < 0)) {
      if (++found == k) {
        for (int i = 0; i < 200 && b - a > 1e-14 * b; ++i) {
          double m = 0.5 * (a + b), fm = bessel_j1(m);
          if ((fa < 0) != (fm < 0)) {
            b = m;
          } else {
            a = m;
            fa = fm;
          }
        }
        return 0.5 * (a + b);
      }
    }
    a = b;
    fa = fb;
  }
}

}  // namespace pchaos
