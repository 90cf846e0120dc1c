#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "pseudochaos/random.hpp"

namespace pchaos {

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

// Dense d x d complex matrices. The Hermitian / unitary invariants are
// checked by is_hermitian / is_unitary, not by the type.
using HermitianMatrix = ComplexMatrix<double>;
using UnitaryMatrix = ComplexMatrix<double>;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& h, double tol = kHermitianTolerance) {
  if (h.rows() != h.cols()) return false;
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tol = kUnitaryTolerance) {
  if (u.rows() != u.cols()) return false;
  using Plain = typename Derived::PlainObject;
  return (u.adjoint() * u - Plain::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct GueProvenance {};
struct IidProvenance {};
struct DegenerateProvenance {
  std::uint64_t distinct = 1;
};
struct KWiseProvenance {
  std::uint64_t distinct = 1;
  unsigned k = 1;
};
using SpectrumProvenance =
    std::variant<GueProvenance, IidProvenance, DegenerateProvenance, KWiseProvenance>;

std::string provenance_name(const SpectrumProvenance& p);

// Ascending eigenvalues with the ensemble they came from.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  SpectrumProvenance provenance = GueProvenance{};

  Eigen::Index dim() const { return eigenvalues.size(); }
};

// Throws std::invalid_argument describing the first violated invariant.
void validate(const Spectrum& s);

enum class BasisMode { Haar, Identity };

struct GueKind {};
struct PseudoGueKind {
  std::uint64_t distinct = 0;  // d-tilde; 0 means d
  std::optional<unsigned> kwise = std::nullopt;  // empty means fully independent draws
  unsigned kwise_bits = 32;
};
struct DiagonalGueKind {};
struct DiagonalIidKind {
  std::uint64_t distinct = 0;
};
using EnsembleKind = std::variant<GueKind, PseudoGueKind, DiagonalGueKind, DiagonalIidKind>;

struct EnsembleSpec {
  unsigned n_qubits = 1;
  EnsembleKind kind = GueKind{};
  BasisMode basis_mode = BasisMode::Haar;

  std::uint64_t dim() const { return std::uint64_t{1} << n_qubits; }
  // d-tilde after resolving the 0 = d default; d for GUE kinds.
  std::uint64_t distinct() const;
};

void validate(const EnsembleSpec& spec);

HermitianMatrix sample_gue(Eigen::Index d, SeededRng& rng);
UnitaryMatrix sample_haar_unitary(Eigen::Index d, SeededRng& rng);
Spectrum sample_spectrum(const EnsembleSpec& spec, SeededRng& rng);

// Random basis for the spec (Haar or identity) together with the spectrum,
// giving H = U diag(spectrum) U^dagger. For GUE kinds the pair comes from
// diagonalizing a GUE draw.
struct HamiltonianDraw {
  Spectrum spectrum;
  UnitaryMatrix basis;
};
HamiltonianDraw sample_hamiltonian(const EnsembleSpec& spec, SeededRng& rng);

// U diag(lambda) U^dagger, re-Hermitized. `diag` may be in any order.
template <typename DerivedU, typename DerivedL>
HermitianMatrix assemble_hamiltonian(const Eigen::MatrixBase<DerivedU>& u,
                                     const Eigen::MatrixBase<DerivedL>& diag) {
  if (u.rows() != u.cols() || u.rows() != diag.size())
    throw std::invalid_argument("assemble_hamiltonian: dimension mismatch");
  HermitianMatrix h = u * diag.template cast<std::complex<double>>().asDiagonal() * u.adjoint();
  HermitianMatrix sym = 0.5 * (h + h.adjoint());
  return sym;
}

inline HermitianMatrix assemble_hamiltonian(const UnitaryMatrix& u, const Spectrum& s) {
  return assemble_hamiltonian(u, s.eigenvalues);
}

struct EigenDecomposition {
  Spectrum spectrum;
  UnitaryMatrix vectors;
  double residual = 0.0;  // max-entry |H - V diag V^dagger|
};

inline constexpr double kEigenResidualTolerance = 1e-8;

// Dense Hermitian eigensolver; throws NumericalError on non-convergence or
// when the reconstruction residual exceeds kEigenResidualTolerance.
EigenDecomposition eig_hermitian(const HermitianMatrix& h);

// e^{-iHt} = V diag(e^{-i lambda t}) V^dagger.
UnitaryMatrix propagator(const HermitianMatrix& h, double t);

template <typename DerivedU, typename DerivedL>
UnitaryMatrix propagator_from_eigen(const Eigen::MatrixBase<DerivedU>& v,
                                    const Eigen::MatrixBase<DerivedL>& lambda, double t) {
  ComplexVector<double> phases(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    phases[i] = std::polar(1.0, -static_cast<double>(lambda[i]) * t);
  return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace pchaos
