#include "pseudochaos/state.hpp"

#include <bit>
#include <stdexcept>
#include <vector>

namespace pchaos {

namespace {

void check_register(unsigned n, std::span<const unsigned> reg) {
  std::uint64_t seen = 0;
  for (unsigned q : reg) {
    if (q >= n) throw std::invalid_argument("qubit index out of range");
    if (seen & (std::uint64_t{1} << q)) throw std::invalid_argument("repeated qubit index");
    seen |= std::uint64_t{1} << q;
  }
}

// Offsets of the 2^k local basis states and the list of base indices with
// all register bits cleared.
struct RegisterLayout {
  std::vector<std::uint64_t> local;
  std::vector<std::uint64_t> bases;
};

RegisterLayout layout(unsigned n, std::span<const unsigned> reg) {
  const auto k = static_cast<unsigned>(reg.size());
  RegisterLayout out;
  out.local.assign(std::size_t{1} << k, 0);
  std::uint64_t mask = 0;
  for (std::uint64_t a = 0; a < out.local.size(); ++a) {
    std::uint64_t off = 0;
    for (unsigned j = 0; j < k; ++j)
      if (a & (std::uint64_t{1} << (k - 1 - j))) off |= std::uint64_t{1} << (n - 1 - reg[j]);
    out.local[a] = off;
  }
  for (unsigned q : reg) mask |= std::uint64_t{1} << (n - 1 - q);
  const std::uint64_t d = std::uint64_t{1} << n;
  out.bases.reserve(d >> k);
  for (std::uint64_t x = 0; x < d; ++x)
    if ((x & mask) == 0) out.bases.push_back(x);
  return out;
}

}  // namespace

StateVector StateVector::basis(unsigned n, std::uint64_t index) {
  if (n > 30) throw std::invalid_argument("StateVector: too many qubits");
  StateVector s;
  s.n_total = n;
  s.amplitudes = ComplexVector<double>::Zero(static_cast<Eigen::Index>(s.dim()));
  if (index >= s.dim()) throw std::invalid_argument("StateVector: basis index out of range");
  s.amplitudes[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(ComplexVector<double> amps) {
  const auto size = static_cast<std::uint64_t>(amps.size());
  if (size == 0 || !std::has_single_bit(size))
    throw std::invalid_argument("StateVector: size is not a power of two");
  StateVector s;
  s.n_total = static_cast<unsigned>(std::countr_zero(size));
  s.amplitudes = std::move(amps);
  return s;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  StateVector s;
  s.n_total = a.n_total + b.n_total;
  s.amplitudes.resize(static_cast<Eigen::Index>(s.dim()));
  const Eigen::Index nb = b.amplitudes.size();
  for (Eigen::Index i = 0; i < a.amplitudes.size(); ++i)
    s.amplitudes.segment(i * nb, nb) = a.amplitudes[i] * b.amplitudes;
  return s;
}

void apply_on_qubits(StateVector& psi, std::span<const unsigned> reg,
                     const ComplexMatrix<double>& op) {
  check_register(psi.n_total, reg);
  const auto k = static_cast<Eigen::Index>(Eigen::Index{1} << reg.size());
  if (op.rows() != k || op.cols() != k)
    throw std::invalid_argument("apply_on_qubits: operator size does not match register");
  const auto lay = layout(psi.n_total, reg);
  ComplexVector<double> buf(k);
  for (std::uint64_t base : lay.bases) {
    for (Eigen::Index a = 0; a < k; ++a)
      buf[a] = psi.amplitudes[static_cast<Eigen::Index>(base | lay.local[a])];
    buf = op * buf;
    for (Eigen::Index a = 0; a < k; ++a)
      psi.amplitudes[static_cast<Eigen::Index>(base | lay.local[a])] = buf[a];
  }
}

ComplexMatrix<double> reduced_density(const StateVector& psi, std::span<const unsigned> keep) {
  check_register(psi.n_total, keep);
  const auto lay = layout(psi.n_total, keep);
  const auto da = static_cast<Eigen::Index>(lay.local.size());
  const auto db = static_cast<Eigen::Index>(lay.bases.size());
  ComplexMatrix<double> m(da, db);
  for (Eigen::Index b = 0; b < db; ++b)
    for (Eigen::Index a = 0; a < da; ++a)
      m(a, b) = psi.amplitudes[static_cast<Eigen::Index>(lay.bases[b] | lay.local[a])];
  return m * m.adjoint();
}

}  // namespace pchaos
