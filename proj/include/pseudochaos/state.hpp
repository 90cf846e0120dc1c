#pragma once

#include <cstdint>
#include <span>

#include "pseudochaos/ensembles.hpp"

namespace pchaos {

inline constexpr double kStateNormTolerance = 1e-10;

// Pure state on n_total qubits; qubit 0 is the most significant index bit.
struct StateVector {
  unsigned n_total = 0;
  ComplexVector<double> amplitudes;

  std::uint64_t dim() const { return std::uint64_t{1} << n_total; }
  double norm_error() const { return std::abs(amplitudes.squaredNorm() - 1.0); }

  static StateVector basis(unsigned n, std::uint64_t index);
  // Size must be a power of two; the vector is taken as is.
  static StateVector from_amplitudes(ComplexVector<double> amps);
};

// psi_a (x) psi_b, with psi_a on the leading qubits.
StateVector tensor(const StateVector& a, const StateVector& b);

// Applies a 2^k x 2^k matrix to the listed qubits (reg[0] is the most
// significant bit of the local index). Throws std::invalid_argument on
// repeated or out-of-range qubits or a size mismatch.
void apply_on_qubits(StateVector& psi, std::span<const unsigned> reg,
                     const ComplexMatrix<double>& op);

// Reduced density matrix on `keep`, tracing out the rest.
ComplexMatrix<double> reduced_density(const StateVector& psi, std::span<const unsigned> keep);

}  // namespace pchaos
