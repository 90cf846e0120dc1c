#include "pseudochaos/circuitsim.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace pchaos {

namespace {

using quad = __float128;

constexpr quad kTwoPiQ = 6.28318530717958647692528676655900577Q;

std::uint64_t round_phase(double t, double lambda, unsigned m) {
  const quad scaled = static_cast<quad>(t) * static_cast<quad>(lambda) / kTwoPiQ *
                      static_cast<quad>(std::uint64_t{1} << m);
  const quad limit = 1.0e36Q;
  if (!(scaled < limit && scaled > -limit))
    throw std::overflow_error("phase table: t * M too large");
  const quad shifted = scaled + 0.5Q;
  auto r = static_cast<__int128>(shifted);
  if (static_cast<quad>(r) > shifted) --r;
  const auto mod = static_cast<__int128>(std::uint64_t{1} << m);
  r %= mod;
  if (r < 0) r += mod;
  return static_cast<std::uint64_t>(r);
}

std::complex<double> table_phase(std::uint64_t entry, unsigned m) {
  const double frac = static_cast<double>(entry) / std::ldexp(1.0, static_cast<int>(m));
  return std::polar(1.0, -2.0 * std::numbers::pi * frac);
}

void check_m(unsigned m) {
  if (m < 1 || m > 63) throw std::invalid_argument("phase bits must be in [1, 63]");
}

unsigned system_qubits(const UnitaryMatrix& v) {
  const auto d = static_cast<std::uint64_t>(v.rows());
  if (v.rows() != v.cols() || !std::has_single_bit(d))
    throw std::invalid_argument("basis must be square with power-of-two size");
  return static_cast<unsigned>(std::countr_zero(d));
}

std::vector<unsigned> qubit_range(unsigned first, unsigned count) {
  std::vector<unsigned> r(count);
  std::iota(r.begin(), r.end(), first);
  return r;
}

// HX on one qubit.
ComplexMatrix<double> hx() {
  const double s = std::numbers::sqrt2 / 2.0;
  ComplexMatrix<double> m(2, 2);
  m << s, s, -s, s;
  return m;
}

ComplexMatrix<double> kron_power(const ComplexMatrix<double>& a, unsigned k) {
  ComplexMatrix<double> out = ComplexMatrix<double>::Identity(1, 1);
  for (unsigned i = 0; i < k; ++i) {
    ComplexMatrix<double> next(out.rows() * a.rows(), out.cols() * a.cols());
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c)
        next.block(r * a.rows(), c * a.cols(), a.rows(), a.cols()) = out(r, c) * a;
    out = std::move(next);
  }
  return out;
}

// Block-diagonal controlled operator on [register | control], control last.
ComplexMatrix<double> controlled(const ComplexMatrix<double>& off, const ComplexMatrix<double>& on) {
  const auto k = off.rows();
  ComplexMatrix<double> out = ComplexMatrix<double>::Zero(2 * k, 2 * k);
  for (Eigen::Index r = 0; r < k; ++r)
    for (Eigen::Index c = 0; c < k; ++c) {
      out(2 * r, 2 * c) = off(r, c);
      out(2 * r + 1, 2 * c + 1) = on(r, c);
    }
  return out;
}

// Ancilla register (qubits [n, n+m)) shifted by -+f(system index).
void shift_ancilla(StateVector& psi, unsigned n, unsigned m, std::span<const std::uint64_t> f,
                   KickbackSign sign) {
  const unsigned rest = psi.n_total - n - m;
  const std::uint64_t big_m = std::uint64_t{1} << m;
  ComplexVector<double> out(psi.amplitudes.size());
  for (std::uint64_t idx = 0; idx < psi.dim(); ++idx) {
    const std::uint64_t x = idx >> (m + rest);
    const std::uint64_t z = (idx >> rest) & (big_m - 1);
    const std::uint64_t low = idx & ((std::uint64_t{1} << rest) - 1);
    const std::uint64_t fx = f[x] & (big_m - 1);
    const std::uint64_t z2 = sign == KickbackSign::Add ? (z + fx) & (big_m - 1)
                                                       : (z + big_m - fx) & (big_m - 1);
    const std::uint64_t target = (x << (m + rest)) | (z2 << rest) | low;
    out[static_cast<Eigen::Index>(target)] = psi.amplitudes[static_cast<Eigen::Index>(idx)];
  }
  psi.amplitudes = std::move(out);
}

}  // namespace

ComplexMatrix<double> dft_matrix(unsigned m, bool inverse) {
  const auto big_m = Eigen::Index{1} << m;
  const double norm = 1.0 / std::sqrt(static_cast<double>(big_m));
  const double sgn = inverse ? -1.0 : 1.0;
  ComplexMatrix<double> f(big_m, big_m);
  for (Eigen::Index z = 0; z < big_m; ++z)
    for (Eigen::Index x = 0; x < big_m; ++x) {
      const auto k = (x * z) % big_m;
      f(z, x) = std::polar(norm, sgn * 2.0 * std::numbers::pi * static_cast<double>(k) /
                                     static_cast<double>(big_m));
    }
  return f;
}

StateVector qft(StateVector psi, std::span<const unsigned> reg) {
  apply_on_qubits(psi, reg, dft_matrix(static_cast<unsigned>(reg.size())));
  return psi;
}

StateVector inverse_qft(StateVector psi, std::span<const unsigned> reg) {
  apply_on_qubits(psi, reg, dft_matrix(static_cast<unsigned>(reg.size()), true));
  return psi;
}

PhaseTable phase_table_from_energies(double t, unsigned m, std::span<const double> energies) {
  check_m(m);
  const auto classes = static_cast<std::uint64_t>(energies.size());
  if (classes == 0 || !std::has_single_bit(classes))
    throw std::invalid_argument("phase table: class count must be a power of two");
  PhaseTable table;
  table.m = m;
  table.t = t;
  table.class_bits = static_cast<unsigned>(std::countr_zero(classes));
  table.energies.assign(energies.begin(), energies.end());
  table.entries.reserve(energies.size());
  for (double lambda : energies) table.entries.push_back(round_phase(t, lambda, m));
  return table;
}

PhaseTable build_phase_table(double t, unsigned m, const KWiseFamily& family,
                             std::uint64_t dtilde) {
  if (dtilde == 0 || !std::has_single_bit(dtilde))
    throw std::invalid_argument("build_phase_table: dtilde must be a power of two");
  const double scale = std::ldexp(1.0, -static_cast<int>(family.output_bits));
  std::vector<double> energies(dtilde);
  for (std::uint64_t c = 0; c < dtilde; ++c)
    energies[c] = semicircle_inv_cdf(static_cast<double>(kwise_eval(family, c)) * scale);
  return phase_table_from_energies(t, m, energies);
}

Eigen::VectorXd expand_energies(const PhaseTable& table, unsigned n) {
  if (table.class_bits > n) throw std::invalid_argument("more classes than basis states");
  Eigen::VectorXd out(Eigen::Index{1} << n);
  for (Eigen::Index x = 0; x < out.size(); ++x)
    out[x] = table.energies[table.class_of(static_cast<std::uint64_t>(x), n)];
  return out;
}

StateVector apply_pseudo_evolution(const StateVector& psi, const PhaseTable& table,
                                   const UnitaryMatrix& v, std::optional<unsigned> control) {
  const unsigned n = system_qubits(v);
  if (n > psi.n_total || table.class_bits > n)
    throw std::invalid_argument("apply_pseudo_evolution: dimension mismatch");
  if (control && (*control < n || *control >= psi.n_total))
    throw std::invalid_argument("apply_pseudo_evolution: control must be outside the system");
  ComplexVector<double> phases(v.rows());
  for (Eigen::Index x = 0; x < phases.size(); ++x)
    phases[x] = table_phase(table.entries[table.class_of(static_cast<std::uint64_t>(x), n)],
                            table.m);
  const ComplexMatrix<double> g = v * phases.asDiagonal() * v.adjoint();

  const auto d_rest = static_cast<Eigen::Index>(std::uint64_t{1} << (psi.n_total - n));
  StateVector out = psi;
  // Column-major view: element (r, s) is amplitude s * d_rest + r.
  Eigen::Map<const ComplexMatrix<double>> in_view(psi.amplitudes.data(), d_rest, v.rows());
  Eigen::Map<ComplexMatrix<double>> out_view(out.amplitudes.data(), d_rest, v.rows());
  out_view = in_view * g.transpose();
  if (control) {
    const std::uint64_t bit = std::uint64_t{1} << (psi.n_total - 1 - *control);
    for (Eigen::Index r = 0; r < d_rest; ++r)
      if ((static_cast<std::uint64_t>(r) & bit) == 0) out_view.row(r) = in_view.row(r);
  }
  return out;
}

StateVector explicit_phase_kickback(const StateVector& system, unsigned m,
                                    std::span<const std::uint64_t> f, KickbackSign sign) {
  check_m(m);
  if (f.size() != system.dim()) throw std::invalid_argument("kickback: one f value per basis state");
  const unsigned n = system.n_total;
  StateVector psi = tensor(system, StateVector::basis(m, (std::uint64_t{1} << m) - 1));
  const auto anc = qubit_range(n, m);
  psi = qft(std::move(psi), anc);
  shift_ancilla(psi, n, m, f, sign);
  return inverse_qft(std::move(psi), anc);
}

StateVector simulate_explicit_kickback(const StateVector& system, const PhaseTable& table,
                                       const UnitaryMatrix& v, int control_value) {
  const unsigned n = system_qubits(v);
  const unsigned m = table.m;
  if (n > kExplicitMaxSystem || m > kExplicitMaxAncilla)
    throw std::length_error("simulate_explicit_kickback: register too large");
  if (system.n_total != n || table.class_bits > n)
    throw std::invalid_argument("simulate_explicit_kickback: dimension mismatch");
  if (control_value != 0 && control_value != 1)
    throw std::invalid_argument("simulate_explicit_kickback: control must be 0 or 1");

  StateVector psi = tensor(tensor(system, StateVector::basis(m, (std::uint64_t{1} << m) - 1)),
                           StateVector::basis(1, static_cast<std::uint64_t>(control_value)));
  const auto sys = qubit_range(0, n);
  auto anc_ctrl = qubit_range(n, m);
  anc_ctrl.push_back(n + m);

  std::vector<std::uint64_t> f(std::uint64_t{1} << n);
  for (std::uint64_t x = 0; x < f.size(); ++x) f[x] = table.entries[table.class_of(x, n)];

  const auto hxm = kron_power(hx(), m);
  apply_on_qubits(psi, sys, v.adjoint());
  apply_on_qubits(psi, anc_ctrl, controlled(hxm, dft_matrix(m)));
  shift_ancilla(psi, n, m, f, KickbackSign::Subtract);
  apply_on_qubits(psi, anc_ctrl, controlled(hxm.adjoint(), dft_matrix(m, true)));
  apply_on_qubits(psi, sys, v);
  return psi;
}

SimCostReport fastforward_cost(double t, double epsilon) {
  if (!(t >= 1.0)) throw std::invalid_argument("fastforward_cost: t must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("fastforward_cost: epsilon must be in (0, 1)");
  SimCostReport r;
  r.t = t;
  r.epsilon = epsilon;
  const auto time_bits = static_cast<unsigned>(std::ceil(std::log2(t)));
  const auto precision_bits =
      static_cast<unsigned>(std::ceil(std::log2(2.0 * std::numbers::pi / epsilon)));
  r.m = time_bits + precision_bits;
  const std::uint64_t m = r.m;
  r.ops = m * (m + 1) + m * m;
  return r;
}

}  // namespace pchaos
