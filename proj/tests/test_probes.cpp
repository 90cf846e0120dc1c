#include <doctest.h>

#include "oracles.hpp"
#include "pseudochaos/probes.hpp"
#include "pseudochaos/spectral.hpp"

using namespace pchaos;

namespace {

StateVector random_state(unsigned n, SeededRng& rng) {
  ComplexVector<double> v(Eigen::Index{1} << n);
  for (auto& a : v) a = {rng.normal(), rng.normal()};
  return StateVector::from_amplitudes(v / v.norm());
}

// (1/d) sum_P <P>^4 over every Pauli string, from dense matrices.
double brute_stab_purity(const StateVector& psi) {
  double s = 0;
  for (const auto& p : oracle::all_pauli_strings(psi.n_total)) {
    const double e = (psi.amplitudes.adjoint() * oracle::pauli_string(p) * psi.amplitudes)(0).real();
    s += std::pow(e, 4);
  }
  return s / static_cast<double>(psi.dim());
}

}  // namespace

TEST_CASE("pauli labels match dense Pauli strings") {
  for (const auto& s : oracle::all_pauli_strings(2))
    CHECK(pauli_matrix(PauliLabel::from_string(s), 2).isApprox(oracle::pauli_string(s)));
  CHECK(PauliLabel::from_string("III").is_identity());
  CHECK(PauliLabel::single('Y', 1, 3) == PauliLabel::from_string("IYI"));
  CHECK_THROWS_AS(PauliLabel::from_string("XQ"), std::invalid_argument);
  CHECK_THROWS_AS(PauliLabel::single('X', 3, 3), std::invalid_argument);
}

TEST_CASE("pauli products and commutation") {
  const std::complex<double> i(0, 1);
  const auto strings = oracle::all_pauli_strings(2);
  for (const auto& a : strings)
    for (const auto& b : strings) {
      const auto pa = PauliLabel::from_string(a), pb = PauliLabel::from_string(b);
      const auto prod = multiply(pa, pb);
      const oracle::Mat lhs = oracle::pauli_string(a) * oracle::pauli_string(b);
      CHECK(lhs.isApprox(std::pow(i, prod.phase) * pauli_matrix(prod.label, 2)));
      const oracle::Mat comm = lhs - oracle::pauli_string(b) * oracle::pauli_string(a);
      CHECK(commutes(pa, pb) == (comm.norm() < 1e-12));
    }
}

TEST_CASE("renyi-2 entanglement") {
  const unsigned cut[] = {0, 1};
  CHECK(renyi2_entanglement(StateVector::basis(4, 0), cut) == doctest::Approx(0.0));
  ComplexVector<double> bell = ComplexVector<double>::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  const unsigned first[] = {0};
  CHECK(renyi2_entanglement(StateVector::from_amplitudes(bell), first) == doctest::Approx(1.0));

  SeededRng rng(1);
  for (int k = 0; k < 5; ++k) {
    const auto psi = random_state(5, rng);
    const std::vector<unsigned> a{0, 3}, b{1, 2, 4};
    const double sa = renyi2_entanglement(psi, a);
    CHECK(std::abs(sa - renyi2_entanglement(psi, b)) < 1e-9);
    CHECK(sa == doctest::Approx(-std::log2(oracle::reduced_purity(psi.amplitudes, 5, a))));
    ProbeReport r{ProbeKind::Renyi2, 2.0, sa, 0.0, a, 0};
    CHECK(in_range(r, 5));
  }
  CHECK_THROWS_AS(renyi2_entanglement(StateVector::basis(3, 0), std::vector<unsigned>{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(renyi2_entanglement(StateVector::basis(3, 0), std::vector<unsigned>{0, 1, 2}),
                  std::invalid_argument);
}

TEST_CASE("stabilizer entropy") {
  CHECK(stabilizer_entropy(StateVector::basis(4, 0)) == doctest::Approx(0.0));
  ComplexVector<double> t(2);
  t << 1.0 / std::sqrt(2.0), std::polar(1.0 / std::sqrt(2.0), std::numbers::pi / 4);
  const auto tstate = StateVector::from_amplitudes(t);
  CHECK(stabilizer_entropy(tstate) == doctest::Approx(-std::log2(brute_stab_purity(tstate))));
  CHECK(stabilizer_entropy(tstate) == doctest::Approx(-std::log2(0.75)));

  SeededRng rng(2);
  const auto psi = random_state(3, rng);
  CHECK(stabilizer_entropy(psi) == doctest::Approx(-std::log2(brute_stab_purity(psi))).epsilon(1e-10));
  CHECK(stabilizer_entropy(psi, 3.0) >= 0.0);
  CHECK_THROWS_AS(stabilizer_entropy(random_state(9, rng)), std::length_error);
  CHECK_THROWS_AS(stabilizer_entropy(psi, 1.5), std::invalid_argument);
}

TEST_CASE("stabilizer entropy is Clifford invariant") {
  SeededRng rng(3);
  const unsigned n = 4;
  const auto psi = random_state(n, rng);
  const double m2 = stabilizer_entropy(psi);
  const std::vector<oracle::Mat> gates{
      oracle::on_qubit(oracle::hadamard(), 1, n), oracle::on_qubit(oracle::phase_s(), 2, n),
      oracle::on_pair(oracle::cnot(), 0, n), oracle::on_pair(oracle::cnot(), 2, n),
      oracle::pauli_string("XYZI")};
  for (const auto& g : gates) {
    const auto moved = StateVector::from_amplitudes(g * psi.amplitudes);
    CHECK(std::abs(stabilizer_entropy(moved) - m2) < 1e-9);
  }
}

TEST_CASE("local operator entanglement") {
  const unsigned n = 4;
  const std::vector<unsigned> cut{0, 1};
  const UnitaryMatrix id = UnitaryMatrix::Identity(16, 16);
  CHECK(local_operator_entanglement(id, PauliLabel::single('X', 0, n), cut) == doctest::Approx(0.0));
  CHECK(local_operator_entanglement(id, PauliLabel::from_string("ZIIZ"), cut) == doctest::Approx(0.0));
  CHECK_THROWS_AS(local_operator_entanglement(id, PauliLabel{}, cut), std::invalid_argument);

  SeededRng rng(4);
  const auto u = propagator(sample_gue(16, rng), 1.0);
  const auto o = heisenberg(u, PauliLabel::single('Z', 0, n));
  const double loe = operator_entanglement(o, cut);
  CHECK(operator_entanglement(-o, cut) == loe);
  CHECK(local_operator_entanglement(u, PauliLabel::single('Z', 0, n), cut) == loe);
  CHECK(o.isApprox(u * oracle::pauli_string("ZIII") * u.adjoint()));
  ProbeReport r{ProbeKind::Loe, 2.0, loe, 1.0, cut, 0};
  CHECK(in_range(r, n));

  // Choi vector purity across the doubled cut, through the state oracle.
  oracle::Vec choi(256);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) choi[i * 16 + j] = o(i, j) / 4.0;
  CHECK(loe == doctest::Approx(-std::log2(oracle::reduced_purity(choi, 8, {0, 1, 4, 5}))));
}

TEST_CASE("otoc exact") {
  const unsigned n = 3;
  const UnitaryMatrix id = UnitaryMatrix::Identity(8, 8);
  const auto z0 = PauliLabel::single('Z', 0, n), z2 = PauliLabel::single('Z', 2, n);
  const auto x0 = PauliLabel::single('X', 0, n);
  CHECK(otoc4_exact(id, z0, z2) == doctest::Approx(1.0));
  CHECK(otoc4_exact(id, z0, x0) == doctest::Approx(-1.0));

  SeededRng rng(5);
  const auto u = propagator(sample_gue(8, rng), 0.8);
  const oracle::Mat p1 = u * oracle::pauli_string("ZII") * u.adjoint();
  const oracle::Mat p2 = oracle::pauli_string("IIZ");
  const double ref = (p1 * p2 * p1 * p2).trace().real() / 8;
  const double v = otoc4_exact(u, z0, z2);
  CHECK(v == doctest::Approx(ref).epsilon(1e-12));
  CHECK(v <= 1.0);
  CHECK(v >= -1.0);

  // Conjugating the dynamics by a global Pauli leaves the value unchanged.
  const oracle::Mat q = oracle::pauli_string("XYZ");
  CHECK(otoc4_exact(q * u * q, z0, z2) == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("otoc sampled") {
  const unsigned n = 5;
  const auto z0 = PauliLabel::single('Z', 0, n), z4 = PauliLabel::single('Z', 4, n);
  SeededRng rng(6);
  const auto trivial = otoc4_sampled(UnitaryMatrix::Identity(32, 32), z0, z4, 500, rng);
  CHECK(trivial.mean == 1.0);
  CHECK(trivial.std_error == 0.0);

  const auto u = propagator(sample_gue(32, rng), 0.6);
  const double exact = otoc4_exact(u, z0, z4);
  const auto est = otoc4_sampled(u, z0, z4, 10000, rng);
  CHECK(std::abs(est.mean - exact) < 4 * est.std_error);
  const auto est4 = otoc4_sampled(u, z0, z4, 40000, rng);
  CHECK(est.std_error / est4.std_error == doctest::Approx(2.0).epsilon(0.1));
  CHECK_THROWS(otoc4_sampled(u, z0, z4, 0, rng));
}

TEST_CASE("haar reference formulas") {
  const double d = 64, da = 8, db = 8;
  CHECK(haar_reference(HaarQuantity::Purity, 1.0, 1.0, d, da, db) == doctest::Approx(1.0));
  CHECK(haar_reference(HaarQuantity::StabPurity, 1.0, 1.0, d, da, db) == doctest::Approx(1.0));
  CHECK(haar_reference(HaarQuantity::OpPurity, 1.0, 1.0, d, da, db) == doctest::Approx(1.0));
  CHECK(haar_reference(HaarQuantity::Purity, 0.0, 0.0, d, da, db) == doctest::Approx(0.25));
  const std::complex<double> z(0.3, 0.4);
  CHECK(haar_reference(HaarQuantity::Otoc4, z, 0.1, d, da, db) == doctest::Approx(std::pow(0.5, 4)));
  CHECK_THROWS_AS(haar_reference(HaarQuantity::Purity, 1.5, 0.0, d, da, db), std::invalid_argument);
}

TEST_CASE("haar averages at d = 64") {
  const unsigned n = 6;
  const Eigen::Index d = 64;
  SeededRng rng(7);
  const auto spectrum = sample_spectrum(EnsembleSpec{n, PseudoGueKind{}}, rng);
  const double t = 0.25;
  const auto z = spectral_form_factor(spectrum, t), z2 = spectral_form_factor(spectrum, 2 * t);
  const std::vector<unsigned> cut{0, 1, 2};
  std::vector<double> pur, stab, op, otoc;
  for (int i = 0; i < 200; ++i) {
    const auto v = sample_haar_unitary(d, rng);
    const auto u = propagator_from_eigen(v, spectrum.eigenvalues, t);
    const auto psi = StateVector::from_amplitudes(u.col(0));
    pur.push_back(std::exp2(-renyi2_entanglement(psi, cut)));
    stab.push_back(std::exp2(-stabilizer_entropy(psi)));
    op.push_back(std::exp2(-local_operator_entanglement(u, PauliLabel::single('Z', 0, n), cut)));
    otoc.push_back(otoc4_exact(u, PauliLabel::single('Z', 0, n), PauliLabel::single('Z', 5, n)));
  }
  auto check = [&](const std::vector<double>& xs, HaarQuantity q) {
    const auto e = mean_and_error(xs);
    const double ref = haar_reference(q, z, z2, 64, 8, 8);
    CHECK(std::abs(e.mean - ref) < 4 * e.std_error);
  };
  check(pur, HaarQuantity::Purity);
  check(stab, HaarQuantity::StabPurity);
  check(op, HaarQuantity::OpPurity);
  check(otoc, HaarQuantity::Otoc4);
}
