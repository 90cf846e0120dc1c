#include "pseudochaos/pauli.hpp"

#include <stdexcept>

namespace pchaos {

namespace {

std::complex<double> i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

int parity(std::uint64_t v) { return std::popcount(v) & 1; }

}  // namespace

PauliLabel PauliLabel::from_string(std::string_view s) {
  const auto n = static_cast<unsigned>(s.size());
  if (n == 0 || n > 62) throw std::invalid_argument("PauliLabel: bad length");
  PauliLabel p;
  for (unsigned q = 0; q < n; ++q) {
    const std::uint64_t b = qubit_bit(n, q);
    switch (s[q]) {
      case 'I': break;
      case 'X': p.x_mask |= b; break;
      case 'Z': p.z_mask |= b; break;
      case 'Y': p.x_mask |= b; p.z_mask |= b; break;
      default: throw std::invalid_argument("PauliLabel: expected one of IXYZ");
    }
  }
  return p;
}

PauliLabel PauliLabel::single(char p, unsigned q, unsigned n) {
  if (q >= n) throw std::invalid_argument("PauliLabel: qubit out of range");
  std::string s(n, 'I');
  s[q] = p;
  return from_string(s);
}

PauliProduct multiply(const PauliLabel& p, const PauliLabel& q) {
  PauliProduct r;
  r.label = {p.x_mask ^ q.x_mask, p.z_mask ^ q.z_mask};
  const int phase = std::popcount(p.x_mask & p.z_mask) + std::popcount(q.x_mask & q.z_mask) +
                    2 * std::popcount(p.z_mask & q.x_mask) -
                    std::popcount(r.label.x_mask & r.label.z_mask);
  r.phase = ((phase % 4) + 4) % 4;
  return r;
}

bool commutes(const PauliLabel& p, const PauliLabel& q) {
  return parity((p.x_mask & q.z_mask) ^ (p.z_mask & q.x_mask)) == 0;
}

ComplexMatrix<double> apply_pauli(const PauliLabel& p, const ComplexMatrix<double>& psi) {
  ComplexMatrix<double> out(psi.rows(), psi.cols());
  const std::complex<double> global = i_power(std::popcount(p.x_mask & p.z_mask));
  for (Eigen::Index k = 0; k < psi.rows(); ++k) {
    const auto uk = static_cast<std::uint64_t>(k);
    const double sign = parity(uk & p.z_mask) ? -1.0 : 1.0;
    out.row(static_cast<Eigen::Index>(uk ^ p.x_mask)) = (global * sign) * psi.row(k);
  }
  return out;
}

ComplexVector<double> apply_pauli(const PauliLabel& p, const ComplexVector<double>& psi) {
  ComplexMatrix<double> m = psi;
  return apply_pauli(p, m).col(0);
}

ComplexMatrix<double> pauli_matrix(const PauliLabel& p, unsigned n) {
  const auto d = static_cast<Eigen::Index>(std::uint64_t{1} << n);
  const ComplexMatrix<double> id = ComplexMatrix<double>::Identity(d, d);
  return apply_pauli(p, id);
}

}  // namespace pchaos
