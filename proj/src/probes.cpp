#include "pseudochaos/probes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "pseudochaos/parallel.hpp"

namespace pchaos {

namespace {

void check_cut(unsigned n, std::span<const unsigned> cut) {
  if (cut.empty() || cut.size() >= n)
    throw std::invalid_argument("cut must be a nonempty proper subset of the qubits");
}

void walsh_hadamard(std::vector<std::complex<double>>& a) {
  for (std::size_t h = 1; h < a.size(); h <<= 1)
    for (std::size_t i = 0; i < a.size(); i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const auto u = a[j], v = a[j + h];
        a[j] = u + v;
        a[j + h] = u - v;
      }
}

unsigned qubit_count(const UnitaryMatrix& u) {
  const auto d = static_cast<std::uint64_t>(u.rows());
  if (u.rows() != u.cols() || !std::has_single_bit(d))
    throw std::invalid_argument("expected a square matrix of power-of-two size");
  return static_cast<unsigned>(std::countr_zero(d));
}

// M P for Hermitian Pauli P.
ComplexMatrix<double> right_pauli(const ComplexMatrix<double>& m, const PauliLabel& p) {
  return apply_pauli(p, ComplexMatrix<double>(m.adjoint())).adjoint();
}

ComplexMatrix<double> otoc_operator(const UnitaryMatrix& u_t, const PauliLabel& p1,
                                    const PauliLabel& p2) {
  const ComplexMatrix<double> w = right_pauli(heisenberg(u_t, p1), p2);
  return w * w;
}

}  // namespace

double renyi2_entanglement(const StateVector& psi, std::span<const unsigned> cut) {
  check_cut(psi.n_total, cut);
  const auto rho = reduced_density(psi, cut);
  return -std::log2(rho.squaredNorm());
}

std::vector<double> pauli_spectrum(const StateVector& psi) {
  if (psi.n_total > kStabilizerMaxQubits)
    throw std::length_error("pauli_spectrum: too many qubits for Pauli enumeration");
  const std::size_t d = psi.dim();
  std::vector<double> out(d * d);
  std::vector<std::complex<double>> a(d);
  for (std::size_t x = 0; x < d; ++x) {
    for (std::size_t k = 0; k < d; ++k)
      a[k] = std::conj(psi.amplitudes[static_cast<Eigen::Index>(k ^ x)]) *
             psi.amplitudes[static_cast<Eigen::Index>(k)];
    walsh_hadamard(a);
    for (std::size_t z = 0; z < d; ++z) out[x * d + z] = std::abs(a[z]);
  }
  return out;
}

double stabilizer_entropy(const StateVector& psi, double alpha) {
  if (!(alpha >= 2.0)) throw std::invalid_argument("stabilizer_entropy: order must be >= 2");
  const auto spec = pauli_spectrum(psi);
  std::vector<double> powers(spec.size());
  std::transform(spec.begin(), spec.end(), powers.begin(),
                 [&](double v) { return std::pow(v, 2.0 * alpha); });
  const double s = pairwise_sum(powers) / static_cast<double>(psi.dim());
  return std::max(0.0, std::log2(s) / (1.0 - alpha));
}

ComplexMatrix<double> heisenberg(const UnitaryMatrix& u, const PauliLabel& o) {
  return right_pauli(u, o) * u.adjoint();
}

double operator_entanglement(const ComplexMatrix<double>& op, std::span<const unsigned> cut) {
  const unsigned n = qubit_count(op);
  if (n > kLoeMaxQubits) throw std::length_error("operator_entanglement: too many qubits");
  check_cut(n, cut);
  const auto d = op.rows();
  StateVector choi;
  choi.n_total = 2 * n;
  choi.amplitudes.resize(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) choi.amplitudes[i * d + j] = op(i, j);
  const double norm = choi.amplitudes.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("operator_entanglement: zero operator");
  choi.amplitudes /= norm;
  std::vector<unsigned> doubled(cut.begin(), cut.end());
  for (unsigned q : cut) doubled.push_back(q + n);
  return renyi2_entanglement(choi, doubled);
}

double local_operator_entanglement(const UnitaryMatrix& u_t, const PauliLabel& o1,
                                   std::span<const unsigned> cut) {
  const unsigned n = qubit_count(u_t);
  if (n > kLoeMaxQubits) throw std::length_error("local_operator_entanglement: too many qubits");
  if (o1.is_identity())
    throw std::invalid_argument("local_operator_entanglement: identity operator");
  return operator_entanglement(heisenberg(u_t, o1), cut);
}

double otoc4_exact(const UnitaryMatrix& u_t, const PauliLabel& p1, const PauliLabel& p2) {
  const ComplexMatrix<double> w = right_pauli(heisenberg(u_t, p1), p2);
  const std::complex<double> tr = w.cwiseProduct(w.transpose()).sum();
  return tr.real() / static_cast<double>(w.rows());
}

Estimate otoc4_sampled(const UnitaryMatrix& u_t, const PauliLabel& p1, const PauliLabel& p2,
                       std::size_t shots, SeededRng& rng) {
  if (shots == 0) throw std::invalid_argument("otoc4_sampled: shots must be >= 1");
  const auto w = otoc_operator(u_t, p1, p2);
  const auto d = static_cast<std::uint64_t>(w.rows());
  std::vector<double> outcomes(shots);
  for (auto& o : outcomes) {
    const auto x = static_cast<Eigen::Index>(rng.below(d));
    const double r = std::clamp(w(x, x).real(), -1.0, 1.0);
    o = rng.uniform() < 0.5 * (1.0 + r) ? 1.0 : -1.0;
  }
  return mean_and_error(outcomes);
}

double haar_reference(HaarQuantity q, std::complex<double> z, std::complex<double> z2, double d,
                      double d_a, double d_b) {
  constexpr double slack = 1e-12;
  if (std::abs(z) > 1.0 + slack || std::abs(z2) > 1.0 + slack)
    throw std::invalid_argument("haar_reference: |z| and |z2| must be <= 1");
  const double a2 = std::norm(z);
  const double a4 = a2 * a2;
  const double a8 = a4 * a4;
  const double cross = (z * z * std::conj(z2)).real();
  switch (q) {
    case HaarQuantity::Purity:
      return a4 + (1.0 / d_a + 1.0 / d_b) * (1.0 - a4);
    case HaarQuantity::StabPurity:
      return a8 + (12.0 * a4 * cross - 16.0 * a8 + 4.0) / d;
    case HaarQuantity::OpPurity: {
      const std::complex<double> zc2 = std::conj(z2);
      const double quartic = (z * z * z * z * zc2 * zc2).real();
      return a8 + (2.0 * quartic + 2.0 * a4 * std::norm(z2) - 2.0 * a8 - 4.0 * a4 * cross + 2.0) / d;
    }
    case HaarQuantity::Otoc4:
      return a4;
  }
  throw std::invalid_argument("haar_reference: unknown quantity");
}

std::string probe_name(ProbeKind p) {
  switch (p) {
    case ProbeKind::Otoc4: return "otoc4";
    case ProbeKind::Renyi2: return "renyi2";
    case ProbeKind::StabEntropy: return "stab_entropy";
    case ProbeKind::Loe: return "loe";
  }
  return "unknown";
}

bool in_range(const ProbeReport& r, unsigned n, double slack) {
  const double na = static_cast<double>(r.cut.size());
  const double m = std::min(na, static_cast<double>(n) - na);
  switch (r.probe) {
    case ProbeKind::Otoc4: return r.value >= -1.0 - slack && r.value <= 1.0 + slack;
    case ProbeKind::Renyi2: return r.value >= -slack && r.value <= m + slack;
    case ProbeKind::StabEntropy: return r.value >= -slack;
    case ProbeKind::Loe: return r.value >= -slack && r.value <= 2.0 * m + slack;
  }
  return false;
}

}  // namespace pchaos
