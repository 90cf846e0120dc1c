#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pseudochaos/pauli.hpp"
#include "pseudochaos/random.hpp"
#include "pseudochaos/state.hpp"
#include "pseudochaos/stats.hpp"

namespace pchaos {

inline constexpr unsigned kStabilizerMaxQubits = 8;
inline constexpr unsigned kLoeMaxQubits = 7;

// -log2 tr(rho_A^2). `cut` lists the qubits of A; it must be a nonempty
// proper subset.
double renyi2_entanglement(const StateVector& psi, std::span<const unsigned> cut);

// M_alpha = log2((1/d) sum_P <P>^{2 alpha}) / (1 - alpha), exact over all
// 4^n Paulis. Throws std::length_error for n > kStabilizerMaxQubits.
double stabilizer_entropy(const StateVector& psi, double alpha = 2.0);

// Every <psi| X^x Z^z |psi> for the d^2 mask pairs, indexed [x * d + z].
// Values are real up to the i^{|x & z|} Hermitian phase, which is dropped.
std::vector<double> pauli_spectrum(const StateVector& psi);

// Heisenberg-evolved U O U^dagger as a dense matrix.
ComplexMatrix<double> heisenberg(const UnitaryMatrix& u, const PauliLabel& o);

// 2-Renyi entropy of the normalized Choi vector (1/sqrt d) sum O_ij |i>|j>
// of an operator across (A, A') | (B, B'). Throws for the zero operator.
double operator_entanglement(const ComplexMatrix<double>& op, std::span<const unsigned> cut);

// operator_entanglement of U O1 U^dagger. Throws std::invalid_argument for
// the identity Pauli.
double local_operator_entanglement(const UnitaryMatrix& u_t, const PauliLabel& o1,
                                   std::span<const unsigned> cut);

// (1/d) Re tr(P1(t) P2 P1(t) P2).
double otoc4_exact(const UnitaryMatrix& u_t, const PauliLabel& p1, const PauliLabel& p2);

// Each shot draws x uniformly and returns +-1 with mean Re<x|P1(t)P2P1(t)P2|x>.
Estimate otoc4_sampled(const UnitaryMatrix& u_t, const PauliLabel& p1, const PauliLabel& p2,
                       std::size_t shots, SeededRng& rng);

enum class HaarQuantity { Purity, StabPurity, OpPurity, Otoc4 };

// Haar-eigenbasis average at fixed spectrum, given z = Z(lambda t) and
// z2 = Z(2 lambda t). Throws std::invalid_argument when |z| or |z2| > 1.
double haar_reference(HaarQuantity q, std::complex<double> z, std::complex<double> z2, double d,
                      double d_a, double d_b);

enum class ProbeKind { Otoc4, Renyi2, StabEntropy, Loe };

struct ProbeReport {
  ProbeKind probe = ProbeKind::Renyi2;
  double alpha = 2.0;  // used by StabEntropy
  double value = 0.0;
  double t = 0.0;
  std::vector<unsigned> cut;
  std::uint64_t draw_id = 0;
};

std::string probe_name(ProbeKind p);
// Range check for a report on n qubits (small slack for rounding).
bool in_range(const ProbeReport& r, unsigned n, double slack = 1e-9);

}  // namespace pchaos
