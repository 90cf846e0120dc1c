#include "pseudochaos/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pchaos {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Eigen::VectorXd sorted(Eigen::VectorXd v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

Eigen::VectorXd degenerate_semicircle(std::uint64_t d, std::uint64_t distinct, SeededRng& rng) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d));
  const std::uint64_t mult = d / distinct;
  for (std::uint64_t j = 0; j < distinct; ++j) {
    const double lambda = semicircle_inv_cdf(rng.uniform());
    for (std::uint64_t r = 0; r < mult; ++r) v[static_cast<Eigen::Index>(j * mult + r)] = lambda;
  }
  return v;
}

Eigen::VectorXd kwise_semicircle(std::uint64_t d, std::uint64_t distinct, unsigned k, unsigned bits,
                                 SeededRng& rng) {
  const KWiseFamily family = KWiseFamily::random(k, bits, rng);
  const double scale = std::ldexp(1.0, -static_cast<int>(bits));
  Eigen::VectorXd v(static_cast<Eigen::Index>(d));
  const std::uint64_t mult = d / distinct;
  for (std::uint64_t j = 0; j < distinct; ++j) {
    const double lambda = semicircle_inv_cdf(static_cast<double>(kwise_eval(family, j)) * scale);
    for (std::uint64_t r = 0; r < mult; ++r) v[static_cast<Eigen::Index>(j * mult + r)] = lambda;
  }
  return v;
}

Eigen::VectorXd gue_eigenvalues(Eigen::Index d, SeededRng& rng) {
  HermitianMatrix h = sample_gue(d, rng);
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("GUE eigenvalue solve did not converge");
  return es.eigenvalues();
}

UnitaryMatrix random_permutation_matrix(Eigen::Index d, SeededRng& rng) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  UnitaryMatrix p = UnitaryMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) p(perm[static_cast<std::size_t>(j)], j) = 1.0;
  return p;
}

}  // namespace

std::string provenance_name(const SpectrumProvenance& p) {
  return std::visit(
      overloaded{[](const GueProvenance&) { return std::string("gue"); },
                 [](const IidProvenance&) { return std::string("iid"); },
                 [](const DegenerateProvenance& q) {
                   return "degenerate(" + std::to_string(q.distinct) + ")";
                 },
                 [](const KWiseProvenance& q) {
                   return "kwise(" + std::to_string(q.distinct) + "," + std::to_string(q.k) + ")";
                 }},
      p);
}

void validate(const Spectrum& s) {
  const auto& v = s.eigenvalues;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1]) throw std::invalid_argument("Spectrum: eigenvalues not ascending");
  if (std::holds_alternative<GueProvenance>(s.provenance)) return;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!(std::abs(v[i]) <= 2.0))
      throw std::invalid_argument("Spectrum: semicircle eigenvalue outside [-2, 2]");
  std::uint64_t distinct = 0;
  if (auto* dg = std::get_if<DegenerateProvenance>(&s.provenance)) distinct = dg->distinct;
  if (auto* kw = std::get_if<KWiseProvenance>(&s.provenance)) distinct = kw->distinct;
  if (distinct == 0) return;
  const auto d = static_cast<std::uint64_t>(v.size());
  if (d % distinct != 0) throw std::invalid_argument("Spectrum: d-tilde does not divide d");
  // Runs of equal values, each of length d / d-tilde. Coinciding draws
  // would merge runs; with continuous draws this has probability zero.
  const std::uint64_t mult = d / distinct;
  std::uint64_t runs = 0;
  for (Eigen::Index i = 0; i < v.size();) {
    Eigen::Index j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    if (static_cast<std::uint64_t>(j - i) % mult != 0)
      throw std::invalid_argument("Spectrum: multiplicity is not d / d-tilde");
    runs += static_cast<std::uint64_t>(j - i) / mult;
    i = j;
  }
  if (runs != distinct) throw std::invalid_argument("Spectrum: wrong number of distinct values");
}

std::uint64_t EnsembleSpec::distinct() const {
  const std::uint64_t d = dim();
  return std::visit(overloaded{[d](const GueKind&) { return d; },
                               [d](const DiagonalGueKind&) { return d; },
                               [d](const PseudoGueKind& k) { return k.distinct ? k.distinct : d; },
                               [d](const DiagonalIidKind& k) { return k.distinct ? k.distinct : d; }},
                    kind);
}

void validate(const EnsembleSpec& spec) {
  if (spec.n_qubits == 0 || spec.n_qubits > 14)
    throw std::invalid_argument("EnsembleSpec: n_qubits must be in [1, 14]");
  const std::uint64_t d = spec.dim(), dt = spec.distinct();
  if (dt == 0 || dt > d || d % dt != 0)
    throw std::invalid_argument("EnsembleSpec: d-tilde must divide d = 2^n");
  if (auto* p = std::get_if<PseudoGueKind>(&spec.kind); p && p->kwise) {
    if (*p->kwise == 0) throw std::invalid_argument("EnsembleSpec: k-wise degree must be >= 1");
    if (p->kwise_bits == 0 || p->kwise_bits > 62)
      throw std::invalid_argument("EnsembleSpec: k-wise output bits must be in [1, 62]");
  }
}

HermitianMatrix sample_gue(Eigen::Index d, SeededRng& rng) {
  if (d < 2) throw std::invalid_argument("sample_gue: d must be >= 2");
  const double sd_diag = std::sqrt(1.0 / static_cast<double>(d));
  const double sd_off = std::sqrt(0.5 / static_cast<double>(d));
  HermitianMatrix h(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    h(j, j) = rng.normal() * sd_diag;
    for (Eigen::Index i = j + 1; i < d; ++i) {
      const double re = rng.normal() * sd_off;
      const double im = rng.normal() * sd_off;
      h(j, i) = {re, im};
      h(i, j) = {re, -im};
    }
  }
  return h;
}

UnitaryMatrix sample_haar_unitary(Eigen::Index d, SeededRng& rng) {
  if (d < 2) throw std::invalid_argument("sample_haar_unitary: d must be >= 2");
  const double s = std::sqrt(0.5);
  ComplexMatrix<double> z(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) z(i, j) = {rng.normal() * s, rng.normal() * s};
  Eigen::HouseholderQR<ComplexMatrix<double>> qr(z);
  UnitaryMatrix q = qr.householderQ();
  const auto& r = qr.matrixQR();
  // Fix the column phases so that R has a positive diagonal; without this
  // the QR output is not Haar distributed.
  for (Eigen::Index j = 0; j < d; ++j) {
    const std::complex<double> rjj = r(j, j);
    const double a = std::abs(rjj);
    q.col(j) *= a > 0 ? rjj / a : std::complex<double>(1.0);
  }
  return q;
}

Spectrum sample_spectrum(const EnsembleSpec& spec, SeededRng& rng) {
  validate(spec);
  const std::uint64_t d = spec.dim();
  const std::uint64_t dt = spec.distinct();
  auto semicircle_spectrum = [&](std::optional<unsigned> kwise, unsigned bits) {
    Spectrum s;
    if (kwise) {
      s.eigenvalues = sorted(kwise_semicircle(d, dt, *kwise, bits, rng));
      s.provenance = KWiseProvenance{dt, *kwise};
    } else if (dt == d) {
      s.eigenvalues = sorted(degenerate_semicircle(d, d, rng));
      s.provenance = IidProvenance{};
    } else {
      s.eigenvalues = sorted(degenerate_semicircle(d, dt, rng));
      s.provenance = DegenerateProvenance{dt};
    }
    return s;
  };
  return std::visit(
      overloaded{[&](const GueKind&) {
                   return Spectrum{gue_eigenvalues(static_cast<Eigen::Index>(d), rng),
                                   GueProvenance{}};
                 },
                 [&](const DiagonalGueKind&) {
                   return Spectrum{gue_eigenvalues(static_cast<Eigen::Index>(d), rng),
                                   GueProvenance{}};
                 },
                 [&](const PseudoGueKind& k) { return semicircle_spectrum(k.kwise, k.kwise_bits); },
                 [&](const DiagonalIidKind&) {
                   return semicircle_spectrum(std::nullopt, 0);
                 }},
      spec.kind);
}

HamiltonianDraw sample_hamiltonian(const EnsembleSpec& spec, SeededRng& rng) {
  validate(spec);
  const auto d = static_cast<Eigen::Index>(spec.dim());
  if (std::holds_alternative<GueKind>(spec.kind)) {
    auto eig = eig_hermitian(sample_gue(d, rng));
    return {std::move(eig.spectrum), std::move(eig.vectors)};
  }
  HamiltonianDraw draw;
  draw.spectrum = sample_spectrum(spec, rng);
  const bool diagonal = std::holds_alternative<DiagonalGueKind>(spec.kind) ||
                        std::holds_alternative<DiagonalIidKind>(spec.kind);
  if (diagonal)
    draw.basis = random_permutation_matrix(d, rng);
  else if (spec.basis_mode == BasisMode::Haar)
    draw.basis = sample_haar_unitary(d, rng);
  else
    draw.basis = UnitaryMatrix::Identity(d, d);
  return draw;
}

EigenDecomposition eig_hermitian(const HermitianMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eig_hermitian: matrix not square");
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw NumericalError("eig_hermitian: eigensolver did not converge");
  EigenDecomposition out;
  out.spectrum.eigenvalues = es.eigenvalues();
  out.spectrum.provenance = GueProvenance{};
  out.vectors = es.eigenvectors();
  HermitianMatrix rebuilt =
      out.vectors * out.spectrum.eigenvalues.cast<std::complex<double>>().asDiagonal() *
      out.vectors.adjoint();
  out.residual = (rebuilt - h).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (!(out.residual <= kEigenResidualTolerance * scale))
    throw NumericalError("eig_hermitian: reconstruction residual " +
                         std::to_string(out.residual) + " exceeds tolerance");
  return out;
}

UnitaryMatrix propagator(const HermitianMatrix& h, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("propagator: time must be finite");
  auto eig = eig_hermitian(h);
  return propagator_from_eigen(eig.vectors, eig.spectrum.eigenvalues, t);
}

}  // namespace pchaos
