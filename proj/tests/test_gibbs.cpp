#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "pseudochaos/gibbs.hpp"

using namespace pchaos;

namespace {

Spectrum fixed_spectrum(unsigned n, std::uint64_t seed) {
  SeededRng r(seed);
  return sample_spectrum(EnsembleSpec{n, PseudoGueKind{}}, r);
}

double tv(const Eigen::VectorXd& p, const Eigen::VectorXd& q) { return 0.5 * (p - q).cwiseAbs().sum(); }

Eigen::VectorXd empirical(const GibbsSampleBatch& b, Eigen::Index d) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(d);
  for (auto x : b.accepted) p[static_cast<Eigen::Index>(x)] += 1.0;
  return p / static_cast<double>(b.accepted.size());
}

}  // namespace

TEST_CASE("envelope constant") {
  CHECK(gibbs_envelope(0.0) == 12.0);
  CHECK(gibbs_envelope(8.0) == doctest::Approx(32.0));
  CHECK(gibbs_envelope(1.0) == 12.0);
}

TEST_CASE("infinite temperature") {
  const auto s = fixed_spectrum(3, 1);
  const auto batch = gibbs_sample_batch(s, 0.0, 24000, SeededRng(2));
  std::uint64_t attempts = 0;
  for (auto a : batch.attempts) {
    REQUIRE(a >= 1);
    attempts += a;
  }
  const double rate = 24000.0 / static_cast<double>(attempts);
  const double sigma = std::sqrt((1.0 / 12) * (11.0 / 12) / static_cast<double>(attempts));
  CHECK(std::abs(rate - 1.0 / 12) < 3 * sigma);
  std::vector<double> counts(8, 0.0);
  for (auto x : batch.accepted) counts[x] += 1;
  double chi2 = 0;
  for (double c : counts) chi2 += (c - 3000) * (c - 3000) / 3000;
  CHECK(chi_squared_sf(chi2, 7) > 1e-4);
  CHECK(exact_gibbs_weights(s, 0.0).isApprox(Eigen::VectorXd::Constant(8, 0.125)));
}

TEST_CASE("rejection sampler matches the Boltzmann weights") {
  const auto s = fixed_spectrum(3, 3);
  const double beta = 1.0;
  const auto batch = gibbs_sample_batch(s, beta, 100000, SeededRng(4));
  const auto exact = exact_gibbs_weights(s, beta);
  CHECK(tv(empirical(batch, 8), exact) <= 0.02);

  // Attempts are geometric with the exact per-attempt acceptance.
  double p = 0;
  for (double l : s.eigenvalues) p += std::exp(-beta * l) / (8 * gibbs_envelope(beta) * std::exp(2 * beta));
  std::vector<double> att(batch.attempts.begin(), batch.attempts.end());
  const auto e = mean_and_error(att);
  CHECK(std::abs(e.mean - 1.0 / p) < 3 * e.std_error);
  CHECK(sample_variance(att) == doctest::Approx((1 - p) / (p * p)).epsilon(0.05));
}

TEST_CASE("rescaled acceptance rule gives the same draws") {
  const auto s = fixed_spectrum(4, 5);
  const double beta = 1.5;
  SeededRng a(6), b(6);
  const double c = gibbs_envelope(beta), top = std::exp(2 * beta);
  for (int i = 0; i < 2000; ++i) {
    const auto g = gibbs_sample(s, beta, a);
    std::uint64_t attempts = 0, x = 0;
    while (true) {
      ++attempts;
      x = b.below(16);
      const double u = b.uniform();
      if (std::exp(-beta * s.eigenvalues[static_cast<Eigen::Index>(x)]) / (c * top) >= u) break;
    }
    REQUIRE(g.x == x);
    REQUIRE(g.attempts == attempts);
  }
}

TEST_CASE("attempt budget") {
  const auto s = fixed_spectrum(3, 7);
  SeededRng r(8);
  CHECK_THROWS_AS(gibbs_sample(s, 8.0, r, 10), BudgetExceeded);
  CHECK_THROWS_AS(gibbs_sample(s, -1.0, r), std::invalid_argument);
}

TEST_CASE("exact weights") {
  const auto s = fixed_spectrum(5, 9);
  for (double beta : {0.0, 0.5, 3.0, 50.0, 700.0}) {
    const auto w = exact_gibbs_weights(s, beta);
    CHECK(std::abs(w.sum() - 1.0) < 1e-12);
    CHECK((w.array() >= 0).all());
  }
  Eigen::Index argmin;
  s.eigenvalues.minCoeff(&argmin);
  CHECK(exact_gibbs_weights(s, 50.0)[argmin] >= 0.999);
}

TEST_CASE("larger beta majorizes smaller beta") {
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    const auto s = fixed_spectrum(4, seed);
    Eigen::VectorXd hot = exact_gibbs_weights(s, 0.7), cold = exact_gibbs_weights(s, 1.9);
    std::sort(hot.data(), hot.data() + hot.size(), std::greater<>());
    std::sort(cold.data(), cold.data() + cold.size(), std::greater<>());
    double ch = 0, cc = 0;
    for (Eigen::Index i = 0; i < hot.size(); ++i) {
      ch += hot[i];
      cc += cold[i];
      CHECK(cc >= ch - 1e-12);
    }
  }
}

TEST_CASE("partition function moments") {
  CHECK(partition_prediction(64, 1e-10) == doctest::Approx(64));
  CHECK(partition_prediction(64, 1e-4) == doctest::Approx(64).epsilon(1e-7));
  const auto stats = partition_moments(EnsembleSpec{8, PseudoGueKind{}}, 1.0, 1000, SeededRng(21));
  CHECK(stats.predicted == doctest::Approx(256 * bessel_i1(2.0)));
  CHECK(stats.mean > 0);
  CHECK(std::abs(stats.mean - stats.predicted) < 3 * stats.std_error);
  CHECK_THROWS(partition_moments(EnsembleSpec{8, PseudoGueKind{}}, 0.0, 1000, SeededRng(1)));
  CHECK_THROWS(partition_moments(EnsembleSpec{8, PseudoGueKind{}}, 1.0, 10, SeededRng(1)));

  double prev = 1e9;
  for (unsigned n : {6u, 8u, 10u}) {
    const auto st = partition_moments(EnsembleSpec{n, PseudoGueKind{}}, 1.0, 400, SeededRng(22));
    const double rel = st.variance / (st.mean * st.mean);
    CHECK(rel < prev);
    prev = rel;
  }
}

TEST_CASE("gibbs ensemble distance") {
  CHECK(gibbs_ensemble_distance(0.0, 64, 64, 20, SeededRng(30), {}, 10).tv < 1e-12);
  double prev = 1.0;
  for (std::uint64_t d : {64u, 128u, 256u}) {
    const auto r = gibbs_ensemble_distance(1.0, d, d, 100, SeededRng(31), {}, 50);
    CHECK(r.tv >= 0.0);
    CHECK(r.tv < prev);
    prev = r.tv;
  }
  CHECK_THROWS(gibbs_ensemble_distance(9.0, 64, 64, 10, SeededRng(1)));
}

TEST_CASE("gibbs ensemble distance self-calibration at d = 256") {
  const SeededRng rng(32);
  const auto spoof = gibbs_ensemble_distance(1.0, 256, 16, 200, rng, {}, 100);
  EnsembleSpec gue{8, GueKind{}, BasisMode::Identity};
  std::vector<Spectrum> a, b;
  for (std::size_t i = 0; i < 200; ++i) {
    auto ra = rng.split(10).split(i), rb = rng.split(11).split(i);
    a.push_back(sample_spectrum(gue, ra));
    b.push_back(sample_spectrum(gue, rb));
  }
  const auto floor = profile_distance(a, b, 1.0, 100, rng.split(12));
  MESSAGE("gue vs pseudo(16) " << spoof.tv << ", gue vs gue " << floor.tv << " +- " << floor.bootstrap_se);
  CHECK(spoof.tv < floor.tv + 3 * floor.bootstrap_se);
}

TEST_CASE("average sign") {
  const auto est = average_sign(64, 400, SeededRng(40));
  for (double v : est.samples) CHECK(v >= 0.0);
  const double d = 64;
  const double predicted = (d - 1) / (4 * std::sqrt(std::numbers::pi * d));
  CHECK(std::abs(est.estimate.mean - predicted) < 3 * est.estimate.std_error);
  const auto all = average_sign(64, 400, SeededRng(40), {}, SignConvention::AllOffDiagonal);
  CHECK(all.estimate.mean == doctest::Approx(2 * est.estimate.mean).epsilon(1e-12));
  CHECK_THROWS(average_sign(1, 10, SeededRng(1)));
}
