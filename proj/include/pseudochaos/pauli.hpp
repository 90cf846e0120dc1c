#pragma once

#include <Eigen/Dense>
#include <bit>
#include <complex>
#include <cstdint>
#include <string_view>

#include "pseudochaos/ensembles.hpp"

namespace pchaos {

// Qubit q of an n-qubit register is bit (n - 1 - q) of the basis index, so
// qubit 0 is the most significant ("first") bit.
inline std::uint64_t qubit_bit(unsigned n, unsigned q) { return std::uint64_t{1} << (n - 1 - q); }

// Hermitian Pauli i^{|x & z|} X^x Z^z with masks in basis-index bit positions.
struct PauliLabel {
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;

  bool is_identity() const { return x_mask == 0 && z_mask == 0; }
  friend bool operator==(const PauliLabel&, const PauliLabel&) = default;

  // "XIZY": character q acts on qubit q.
  static PauliLabel from_string(std::string_view s);
  // Single-site Pauli ('X', 'Y' or 'Z') on qubit q of n.
  static PauliLabel single(char p, unsigned q, unsigned n);
};

// P Q = i^phase R.
struct PauliProduct {
  int phase = 0;  // exponent of i, in [0, 4)
  PauliLabel label;
};
PauliProduct multiply(const PauliLabel& p, const PauliLabel& q);
bool commutes(const PauliLabel& p, const PauliLabel& q);

// Applies the Pauli to every column of `psi` (rows are basis indices).
ComplexMatrix<double> apply_pauli(const PauliLabel& p, const ComplexMatrix<double>& psi);
ComplexVector<double> apply_pauli(const PauliLabel& p, const ComplexVector<double>& psi);
ComplexMatrix<double> pauli_matrix(const PauliLabel& p, unsigned n);

}  // namespace pchaos
