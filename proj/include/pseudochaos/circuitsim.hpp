#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pseudochaos/ensembles.hpp"
#include "pseudochaos/random.hpp"
#include "pseudochaos/state.hpp"

namespace pchaos {

// Dense 2^m-point DFT, F[z][x] = e^{2 pi i xz / 2^m} / sqrt(2^m).
ComplexMatrix<double> dft_matrix(unsigned m, bool inverse = false);

StateVector qft(StateVector psi, std::span<const unsigned> reg);
StateVector inverse_qft(StateVector psi, std::span<const unsigned> reg);

// Fixed-point phases, one integer per distinct-energy class. Applying the
// table multiplies basis state x by e^{-2 pi i entries[class_of(x)] / M}.
struct PhaseTable {
  unsigned m = 1;
  double t = 0.0;
  unsigned class_bits = 0;  // log2 of the number of classes
  std::vector<std::uint64_t> entries;
  std::vector<double> energies;  // lambda_c, one per class

  std::uint64_t modulus() const { return std::uint64_t{1} << m; }
  // First class_bits bits of an n-bit index.
  std::uint64_t class_of(std::uint64_t x, unsigned n) const { return x >> (n - class_bits); }
};

// lambda_c = semicircle_inv_cdf(kwise_eval(family, c) / 2^{output_bits}),
// entries[c] = round(t M lambda_c / 2 pi) mod M. Rounding is done in
// 113-bit floating point so the phase error stays within half a step.
PhaseTable build_phase_table(double t, unsigned m, const KWiseFamily& family,
                             std::uint64_t dtilde);
// Same rounding for an explicit list of class energies.
PhaseTable phase_table_from_energies(double t, unsigned m, std::span<const double> energies);

// Per-index energies lambda_{class(x)} for an n-qubit system.
Eigen::VectorXd expand_energies(const PhaseTable& table, unsigned n);

// Applies V diag(e^{-2 pi i entries/M}) V^dagger to the leading log2(dim V)
// qubits, optionally conditioned on `control` being 1. Other qubits are
// spectators.
StateVector apply_pseudo_evolution(const StateVector& psi, const PhaseTable& table,
                                   const UnitaryMatrix& v,
                                   std::optional<unsigned> control = std::nullopt);

enum class KickbackSign { Add, Subtract };

// Phase kickback with explicit ancillas: |x>|1..1> -> QFT on the ancillas,
// ancilla register +-= f(x) mod M, inverse QFT. Returns the n+m qubit state.
StateVector explicit_phase_kickback(const StateVector& system, unsigned m,
                                    std::span<const std::uint64_t> f, KickbackSign sign);

inline constexpr unsigned kExplicitMaxSystem = 3;
inline constexpr unsigned kExplicitMaxAncilla = 8;

// Full controlled circuit on [system | m ancillas | control]: V^dagger,
// controlled QFT or (HX)^{m}, subtraction of the table entries, inverse
// transform, V. Throws std::length_error beyond the size limits.
StateVector simulate_explicit_kickback(const StateVector& system, const PhaseTable& table,
                                       const UnitaryMatrix& v, int control_value);

struct SimCostReport {
  double t = 1.0;
  double epsilon = 1e-6;
  unsigned m = 0;
  std::uint64_t ops = 0;
};

// m = ceil(log2 t) + ceil(log2(2 pi / eps)); ops counts QFT and inverse QFT
// (m(m+1)) plus the m^2 gate adder.
SimCostReport fastforward_cost(double t, double epsilon);

}  // namespace pchaos
