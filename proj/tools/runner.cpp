#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "pseudochaos/circuitsim.hpp"
#include "pseudochaos/gibbs.hpp"
#include "pseudochaos/probes.hpp"
#include "pseudochaos/spectral.hpp"

namespace pchaos::cli {

namespace {

using json = nlohmann::json;

std::string trim(std::string s) {
  const auto ws = " \t\r\n";
  s.erase(0, s.find_first_not_of(ws));
  s.erase(s.find_last_not_of(ws) + 1);
  return s;
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream is(value);
  T out{};
  is >> out;
  if (!is || !(is >> std::ws).eof())
    throw UsageError("invalid value for '" + key + "': '" + value + "'");
  return out;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError("invalid value for '" + key + "': expected a nonnegative integer, got '" +
                     value + "'");
  return parse_number<std::uint64_t>(key, value);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

EnsembleSpec ensemble_spec(const ExperimentConfig& cfg, const std::string& name) {
  EnsembleSpec spec;
  spec.n_qubits = cfg.n;
  if (name == "gue")
    spec.kind = GueKind{};
  else if (name == "pseudo")
    spec.kind = PseudoGueKind{cfg.dtilde, cfg.kwise, 32};
  else if (name == "diag-gue")
    spec.kind = DiagonalGueKind{};
  else if (name == "diag-iid")
    spec.kind = DiagonalIidKind{cfg.dtilde};
  else
    throw UsageError("unknown ensemble '" + name + "'");
  return spec;
}

std::vector<unsigned> resolved_cut(const ExperimentConfig& cfg) {
  if (!cfg.cut.empty()) return cfg.cut;
  std::vector<unsigned> cut;
  for (unsigned q = 0; q < cfg.n / 2; ++q) cut.push_back(q);
  return cut;
}

ComplexVector<double> zero_state_column(const UnitaryMatrix& u) { return u.col(0); }

double probe_value(const std::string& probe, const UnitaryMatrix& u, unsigned n,
                   const std::vector<unsigned>& cut) {
  if (probe == "renyi2") return renyi2_entanglement(StateVector::from_amplitudes(zero_state_column(u)), cut);
  if (probe == "stab") return stabilizer_entropy(StateVector::from_amplitudes(zero_state_column(u)), 2.0);
  if (probe == "loe") return local_operator_entanglement(u, PauliLabel::single('Z', 0, n), cut);
  if (probe == "otoc4")
    return otoc4_exact(u, PauliLabel::single('Z', 0, n), PauliLabel::single('Z', n - 1, n));
  throw UsageError("unknown probe '" + probe + "'");
}

PlotSeries histogram_series(const std::vector<double>& values, std::size_t bins,
                            const std::string& title, const std::string& x_label) {
  PlotSeries s;
  s.kind = PlotSeries::Kind::Histogram;
  s.title = title;
  s.x_label = x_label;
  s.y_label = "count";
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (hi - lo < 1e-12) hi = lo + 1.0;
  const auto h = histogram(values, lo, hi + 1e-12 * (hi - lo), bins);
  s.bin_width = h.width;
  for (std::size_t b = 0; b < bins; ++b) {
    s.x.push_back(lo + static_cast<double>(b) * h.width);
    s.y.push_back(static_cast<double>(h.counts[b]));
  }
  return s;
}

void run_spacing(const ExperimentConfig& cfg, Exec exec, RunRecord& rec) {
  const auto spec = ensemble_spec(cfg, cfg.ensemble);
  const SeededRng rng(cfg.seed);
  const auto per_draw = parallel_map(cfg.samples, exec, [&](std::size_t i) {
    auto r = rng.split(i);
    return bulk_spacings(sample_spectrum(spec, r).eigenvalues, GapNormalization::TimesD).gaps;
  });
  std::vector<double> gaps;
  for (const auto& g : per_draw) gaps.insert(gaps.end(), g.begin(), g.end());
  constexpr double width = 0.1;
  constexpr std::size_t bins = 40;
  const auto h = histogram(gaps, 0.0, width * bins, bins);
  rec.table.header = {"s_hat", "count", "density"};
  PlotSeries plot;
  plot.kind = PlotSeries::Kind::Histogram;
  plot.title = "level spacing, " + cfg.ensemble;
  plot.x_label = "s_hat";
  plot.y_label = "density";
  plot.bin_width = width;
  for (std::size_t b = 0; b < bins; ++b) {
    const double centre = (static_cast<double>(b) + 0.5) * width;
    const double density = static_cast<double>(h.counts[b]) / (static_cast<double>(h.total) * width);
    rec.table.rows.push_back({centre, static_cast<std::int64_t>(h.counts[b]), density});
    plot.x.push_back(static_cast<double>(b) * width);
    plot.y.push_back(density);
  }
  const auto fit = extrapolate_zero_density(gaps, width, 10);
  rec.summary["gaps"] = static_cast<double>(gaps.size());
  rec.summary["intercept"] = fit.intercept;
  rec.error_estimates["intercept"] = fit.std_error;
  rec.plot = plot;
}

void run_sff(const ExperimentConfig& cfg, Exec exec, RunRecord& rec) {
  const auto spec = ensemble_spec(cfg, cfg.ensemble);
  const auto grid = cfg.t_grid.value_or(TimeGrid{0.0, 4.0, 41}).points();
  const SeededRng rng(cfg.seed);
  rec.table.header = {"t", "mean_abs_z2", "std_error", "prediction"};
  PlotSeries plot;
  plot.title = "spectral form factor, " + cfg.ensemble;
  plot.x_label = "t";
  plot.y_label = "E|Z|^2";
  double worst = 0.0;
  for (double t : grid) {
    const auto est = sff_moments(spec, 1, t, cfg.samples, rng, exec);
    rec.table.rows.push_back({t, est.mean, est.std_error, sff_early_time_prediction(1, t)});
    plot.x.push_back(t);
    plot.y.push_back(est.mean);
    worst = std::max(worst, est.std_error);
  }
  rec.error_estimates["max_std_error"] = worst;
  rec.plot = plot;
}

std::vector<double> probe_batch(const ExperimentConfig& cfg, const EnsembleSpec& spec,
                                const SeededRng& rng, Exec exec) {
  const auto cut = resolved_cut(cfg);
  return parallel_map(cfg.samples, exec, [&](std::size_t i) {
    auto r = rng.split(i);
    const auto draw = sample_hamiltonian(spec, r);
    const auto u = propagator_from_eigen(draw.basis, draw.spectrum.eigenvalues, cfg.t);
    return probe_value(cfg.probe, u, cfg.n, cut);
  });
}

void run_probes(const ExperimentConfig& cfg, Exec exec, RunRecord& rec) {
  const auto spec = ensemble_spec(cfg, cfg.ensemble);
  const auto values = probe_batch(cfg, spec, SeededRng(cfg.seed), exec);
  rec.table.header = {"draw", cfg.probe};
  for (std::size_t i = 0; i < values.size(); ++i)
    rec.table.rows.push_back({static_cast<std::int64_t>(i), values[i]});
  const auto est = mean_and_error(values);
  rec.summary["mean"] = est.mean;
  rec.error_estimates["mean"] = est.std_error;
  rec.plot = histogram_series(values, 20, cfg.probe + ", " + cfg.ensemble, cfg.probe);
}

void run_distinguish(const ExperimentConfig& cfg, Exec exec, RunRecord& rec) {
  const SeededRng rng(cfg.seed);
  const auto a = probe_batch(cfg, ensemble_spec(cfg, "gue"), rng.split(0), exec);
  const auto b = probe_batch(cfg, ensemble_spec(cfg, "pseudo"), rng.split(1), exec);
  rec.table.header = {"draw", "gue", "pseudo"};
  for (std::size_t i = 0; i < a.size(); ++i)
    rec.table.rows.push_back({static_cast<std::int64_t>(i), a[i], b[i]});
  const auto ea = mean_and_error(a);
  const auto eb = mean_and_error(b);
  rec.summary["gue_mean"] = ea.mean;
  rec.summary["pseudo_mean"] = eb.mean;
  rec.error_estimates["gue_mean"] = ea.std_error;
  rec.error_estimates["pseudo_mean"] = eb.std_error;
  const double ks = ks_two_sample(a, b);
  rec.summary["ks_statistic"] = ks;
  rec.summary["ks_pvalue"] = ks_two_sample_pvalue(ks, a.size(), b.size());
}

void run_evolve(const ExperimentConfig& cfg, Exec, RunRecord& rec) {
  SeededRng rng(cfg.seed);
  const std::uint64_t d = std::uint64_t{1} << cfg.n;
  const std::uint64_t dt = cfg.dtilde == 0 ? d : cfg.dtilde;
  auto fam_rng = rng.split(0);
  const auto family = KWiseFamily::random(cfg.kwise.value_or(4), 32, fam_rng);
  const auto table = build_phase_table(cfg.t, cfg.m, family, dt);
  auto basis_rng = rng.split(1);
  const auto v = sample_haar_unitary(static_cast<Eigen::Index>(d), basis_rng);
  const auto psi0 = StateVector::basis(cfg.n, 0);
  const auto out = apply_pseudo_evolution(psi0, table, v);
  const ComplexVector<double> dense =
      propagator_from_eigen(v, expand_energies(table, cfg.n), cfg.t) * psi0.amplitudes;
  const double fidelity = std::norm(dense.dot(out.amplitudes));
  rec.table.header = {"index", "re", "im"};
  for (Eigen::Index i = 0; i < out.amplitudes.size(); ++i)
    rec.table.rows.push_back(
        {static_cast<std::int64_t>(i), out.amplitudes[i].real(), out.amplitudes[i].imag()});
  rec.summary["fidelity"] = fidelity;
  rec.summary["m"] = cfg.m;
  rec.error_estimates["infidelity"] = 1.0 - fidelity;
  rec.error_estimates["norm"] = out.norm_error();
  const auto cost = fastforward_cost(std::max(1.0, std::abs(cfg.t)), 2.0 * std::numbers::pi /
                                                                        std::ldexp(1.0, static_cast<int>(cfg.m)));
  rec.summary["cost_ops"] = static_cast<double>(cost.ops);
  if (1.0 - fidelity > 1e-6) rec.converged = false;
}

void run_gibbs(const ExperimentConfig& cfg, Exec exec, RunRecord& rec) {
  const auto spec = ensemble_spec(cfg, cfg.ensemble);
  SeededRng rng(cfg.seed);
  auto spec_rng = rng.split(0);
  const auto spectrum = sample_spectrum(spec, spec_rng);
  const auto batch = gibbs_sample_batch(spectrum, cfg.beta, cfg.samples, rng.split(1), exec);
  const auto exact = exact_gibbs_weights(spectrum, cfg.beta);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(spectrum.dim()), 0);
  for (auto x : batch.accepted) ++counts[x];
  rec.table.header = {"x", "lambda", "count", "empirical", "exact"};
  double tv = 0.0;
  for (std::size_t x = 0; x < counts.size(); ++x) {
    const double emp = static_cast<double>(counts[x]) / static_cast<double>(cfg.samples);
    const auto xi = static_cast<Eigen::Index>(x);
    tv += 0.5 * std::abs(emp - exact[xi]);
    rec.table.rows.push_back(
        {static_cast<std::int64_t>(x), spectrum.eigenvalues[xi], counts[x], emp, exact[xi]});
  }
  std::uint64_t attempts = 0;
  for (auto a : batch.attempts) attempts += a;
  rec.summary["tv"] = tv;
  rec.summary["envelope"] = gibbs_envelope(cfg.beta);
  rec.summary["acceptance_rate"] =
      static_cast<double>(cfg.samples) / static_cast<double>(std::max<std::uint64_t>(1, attempts));
}

void run_marginals(const ExperimentConfig& cfg, Exec, RunRecord& rec) {
  const long d = 1L << cfg.n;
  const auto grid = tabulate_marginal(1, d, 201);
  rec.table.header = {"lambda", "marginal1", "semicircle"};
  PlotSeries plot;
  plot.title = "one-point marginal, d=" + std::to_string(d);
  plot.x_label = "lambda";
  plot.y_label = "density";
  for (std::size_t i = 0; i < grid.coordinates.size(); ++i) {
    const double l = grid.coordinates[i];
    rec.table.rows.push_back({l, grid.density[i], semicircle_pdf(l)});
    plot.x.push_back(l);
    plot.y.push_back(grid.density[i]);
  }
  const auto integral = integrate_marginal2(d);
  const auto tv = tv_distance_marginal2(d);
  rec.summary["integral2"] = integral.value;
  rec.error_estimates["integral2"] = integral.error_estimate;
  rec.summary["tv2"] = tv.value;
  rec.error_estimates["tv2"] = tv.error_estimate;
  rec.summary["tv_bound"] = 3.0 * std::numbers::sqrt2 / std::pow(static_cast<double>(d), 0.125);
  rec.converged = integral.converged && tv.converged;
  rec.plot = plot;
}

void run_sign(const ExperimentConfig& cfg, Exec exec, RunRecord& rec) {
  const std::uint64_t d = std::uint64_t{1} << cfg.n;
  const auto est = average_sign(d, cfg.samples, SeededRng(cfg.seed), exec);
  rec.table.header = {"draw", "nu1"};
  for (std::size_t i = 0; i < est.samples.size(); ++i)
    rec.table.rows.push_back({static_cast<std::int64_t>(i), est.samples[i]});
  const double dd = static_cast<double>(d);
  rec.summary["mean"] = est.estimate.mean;
  rec.error_estimates["mean"] = est.estimate.std_error;
  rec.summary["prediction"] = (dd - 1.0) / (4.0 * std::sqrt(std::numbers::pi * dd));
  rec.summary["asymptotic"] = std::sqrt(dd) / (4.0 * std::sqrt(std::numbers::pi));
}

void run_haar_check(const ExperimentConfig& cfg, Exec exec, RunRecord& rec) {
  const unsigned n = cfg.n;
  if (n < 2 || n > kLoeMaxQubits) throw UsageError("haar-check: n must be in [2, 7]");
  const auto d = static_cast<Eigen::Index>(1) << n;
  const SeededRng rng(cfg.seed);
  auto spec_rng = rng.split(0);
  EnsembleSpec iid{n, DiagonalIidKind{cfg.dtilde}, BasisMode::Identity};
  const auto spectrum = sample_spectrum(iid, spec_rng);
  const auto cut = resolved_cut(cfg);
  const auto z = spectral_form_factor(spectrum, cfg.t);
  const auto z2 = spectral_form_factor(spectrum, 2.0 * cfg.t);
  const double da = std::ldexp(1.0, static_cast<int>(cut.size()));
  const double db = static_cast<double>(d) / da;
  const auto p_z0 = PauliLabel::single('Z', 0, n);
  const auto p_zl = PauliLabel::single('Z', n - 1, n);
  const auto basis_rng = rng.split(1);
  const auto rows = parallel_map(cfg.samples, exec, [&](std::size_t i) {
    auto r = basis_rng.split(i);
    const auto v = sample_haar_unitary(d, r);
    const auto u = propagator_from_eigen(v, spectrum.eigenvalues, cfg.t);
    const auto psi = StateVector::from_amplitudes(u.col(0));
    return std::array<double, 4>{std::exp2(-renyi2_entanglement(psi, cut)),
                                 std::exp2(-stabilizer_entropy(psi, 2.0)),
                                 std::exp2(-local_operator_entanglement(u, p_z0, cut)),
                                 otoc4_exact(u, p_z0, p_zl)};
  });
  const std::array<std::pair<const char*, HaarQuantity>, 4> names{
      {{"purity", HaarQuantity::Purity},
       {"stab_purity", HaarQuantity::StabPurity},
       {"op_purity", HaarQuantity::OpPurity},
       {"otoc4", HaarQuantity::Otoc4}}};
  rec.table.header = {"quantity", "mean", "std_error", "reference"};
  for (std::size_t q = 0; q < names.size(); ++q) {
    std::vector<double> xs;
    for (const auto& r : rows) xs.push_back(r[q]);
    const auto est = mean_and_error(xs);
    const double ref = haar_reference(names[q].second, z, z2, static_cast<double>(d), da, db);
    rec.table.rows.push_back({std::string(names[q].first), est.mean, est.std_error, ref});
    rec.error_estimates[names[q].first] = est.std_error;
  }
  rec.summary["abs_z"] = std::abs(z);
}

std::string iso_double(double v) { return format_double(v); }

}  // namespace

std::vector<double> TimeGrid::points() const {
  std::vector<double> out;
  if (steps == 1) return {a};
  for (std::size_t i = 0; i < steps; ++i)
    out.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(steps - 1));
  return out;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"spacing",  "sff",  "probes",     "evolve",
                                              "gibbs",    "marginals", "sign", "haar-check",
                                              "distinguish"};
  return names;
}

void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key.rfind("--", 0) == 0) key = key.substr(2);
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "experiment") {
    cfg.experiment = value;
  } else if (key == "ensemble") {
    cfg.ensemble = value;
  } else if (key == "n") {
    cfg.n = static_cast<unsigned>(parse_unsigned(key, value));
  } else if (key == "dtilde") {
    cfg.dtilde = parse_unsigned(key, value);
  } else if (key == "kwise") {
    if (value.empty() || value == "none")
      cfg.kwise.reset();
    else
      cfg.kwise = static_cast<unsigned>(parse_unsigned(key, value));
  } else if (key == "t") {
    cfg.t = parse_number<double>(key, value);
  } else if (key == "t-grid") {
    const auto parts = split(value, ':');
    if (parts.size() != 3) throw UsageError("invalid value for 't-grid': expected a:b:steps");
    cfg.t_grid = TimeGrid{parse_number<double>(key, parts[0]), parse_number<double>(key, parts[1]),
                          static_cast<std::size_t>(parse_unsigned(key, parts[2]))};
  } else if (key == "beta") {
    cfg.beta = parse_number<double>(key, value);
  } else if (key == "samples") {
    cfg.samples = static_cast<std::size_t>(parse_unsigned(key, value));
  } else if (key == "shots") {
    cfg.shots = static_cast<std::size_t>(parse_unsigned(key, value));
  } else if (key == "cut") {
    cfg.cut.clear();
    for (const auto& p : split(value, ','))
      if (!p.empty()) cfg.cut.push_back(static_cast<unsigned>(parse_unsigned(key, p)));
  } else if (key == "probe") {
    cfg.probe = value;
  } else if (key == "m") {
    cfg.m = static_cast<unsigned>(parse_unsigned(key, value));
  } else if (key == "seed") {
    cfg.seed = parse_unsigned(key, value);
  } else if (key == "threads") {
    cfg.threads = static_cast<unsigned>(parse_unsigned(key, value));
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "svg") {
    cfg.svg = value;
  } else if (key == "format") {
    cfg.format = value;
  } else {
    throw UsageError("unknown setting '" + key + "'");
  }
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

void validate(const ExperimentConfig& cfg) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
    throw UsageError("unknown experiment '" + cfg.experiment + "'");
  if (cfg.n < 1 || cfg.n > 14) throw UsageError("n: must be in [1, 14]");
  if (cfg.samples == 0) throw UsageError("samples: must be >= 1");
  if (cfg.shots == 0) throw UsageError("shots: must be >= 1");
  if (cfg.format != "csv" && cfg.format != "json") throw UsageError("format: must be csv or json");
  if (cfg.t_grid && cfg.t_grid->steps == 0) throw UsageError("t-grid: steps must be >= 1");
  if (cfg.beta < 0.0) throw UsageError("beta: must be >= 0");
  if (cfg.m < 1 || cfg.m > 63) throw UsageError("m: must be in [1, 63]");
  if (cfg.dtilde != 0 && (cfg.dtilde & (cfg.dtilde - 1)) != 0)
    throw UsageError("dtilde: must be a power of two");
  if (cfg.dtilde > (std::uint64_t{1} << cfg.n)) throw UsageError("dtilde: must be <= 2^n");
  for (unsigned q : cfg.cut)
    if (q >= cfg.n) throw UsageError("cut: qubit " + std::to_string(q) + " out of range");
  ensemble_spec(cfg, cfg.ensemble);
  const std::vector<std::string> probes{"renyi2", "stab", "loe", "otoc4"};
  if (std::find(probes.begin(), probes.end(), cfg.probe) == probes.end())
    throw UsageError("probe: must be one of renyi2, stab, loe, otoc4");
}

std::map<std::string, std::string> config_echo(const ExperimentConfig& cfg) {
  std::map<std::string, std::string> e;
  e["experiment"] = cfg.experiment;
  e["ensemble"] = cfg.ensemble;
  e["n"] = std::to_string(cfg.n);
  e["dtilde"] = std::to_string(cfg.dtilde);
  e["kwise"] = cfg.kwise ? std::to_string(*cfg.kwise) : "none";
  e["t"] = iso_double(cfg.t);
  if (cfg.t_grid)
    e["t-grid"] = iso_double(cfg.t_grid->a) + ":" + iso_double(cfg.t_grid->b) + ":" +
                  std::to_string(cfg.t_grid->steps);
  e["beta"] = iso_double(cfg.beta);
  e["samples"] = std::to_string(cfg.samples);
  e["shots"] = std::to_string(cfg.shots);
  std::string cut;
  for (unsigned q : cfg.cut) cut += (cut.empty() ? "" : ",") + std::to_string(q);
  e["cut"] = cut;
  e["probe"] = cfg.probe;
  e["m"] = std::to_string(cfg.m);
  e["seed"] = std::to_string(cfg.seed);
  return e;
}

std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [k, v] : config_echo(cfg)) {
    for (char c : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunRecord compute_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  RunRecord rec;
  rec.config = cfg;
  rec.version = kToolVersion;
  const Exec exec{cfg.threads};
  const auto& e = cfg.experiment;
  if (e == "spacing") run_spacing(cfg, exec, rec);
  else if (e == "sff") run_sff(cfg, exec, rec);
  else if (e == "probes") run_probes(cfg, exec, rec);
  else if (e == "distinguish") run_distinguish(cfg, exec, rec);
  else if (e == "evolve") run_evolve(cfg, exec, rec);
  else if (e == "gibbs") run_gibbs(cfg, exec, rec);
  else if (e == "marginals") run_marginals(cfg, exec, rec);
  else if (e == "sign") run_sign(cfg, exec, rec);
  else if (e == "haar-check") run_haar_check(cfg, exec, rec);
  if (!rec.converged && rec.status == "ok") {
    rec.status = "numerical_failure";
    rec.message = "a computation did not reach its declared tolerance";
  }
  return rec;
}

std::string table_csv(const ResultTable& t) {
  std::ostringstream os;
  CsvWriter w(os, t.header);
  for (const auto& r : t.rows) w.row(r);
  return os.str();
}

namespace {

json cell_json(const CsvCell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  return std::get<std::int64_t>(c);
}

json number_map(const std::map<std::string, double>& m) {
  json o = json::object();
  for (const auto& [k, v] : m) o[k] = std::isfinite(v) ? json(v) : json(nullptr);
  return o;
}

std::string table_json(const ResultTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row = json::array();
    for (const auto& c : r) row.push_back(cell_json(c));
    rows.push_back(row);
  }
  return json{{"columns", t.header}, {"rows", rows}}.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("cannot write '" + path + "'");
  os << content;
}

}  // namespace

std::string manifest_json(const RunRecord& r) {
  json config = json::object();
  for (const auto& [k, v] : config_echo(r.config)) config[k] = v;
  json m{{"schema", 1},
         {"tool_version", r.version},
         {"experiment", r.config.experiment},
         {"config", config},
         {"config_hash", config_hash(r.config)},
         {"threads", r.config.threads},
         {"wall_seconds", r.wall_seconds},
         {"status", r.status},
         {"message", r.message},
         {"converged", r.converged},
         {"rows", r.table.rows.size()},
         {"summary", number_map(r.summary)},
         {"error_estimates", number_map(r.error_estimates)}};
  return m.dump(2) + "\n";
}

int run_experiment(const ExperimentConfig& cfg, RunRecord* record) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.config = cfg;
  rec.version = kToolVersion;
  int code = kExitOk;
  try {
    rec = compute_experiment(cfg);
    if (!rec.converged) code = kExitNumerical;
  } catch (const UsageError& e) {
    rec.status = "usage_error";
    rec.message = e.what();
    code = kExitUsage;
  } catch (const BudgetExceeded& e) {
    rec.status = "budget_exceeded";
    rec.message = e.what();
    code = kExitBudget;
  } catch (const std::invalid_argument& e) {
    rec.status = "usage_error";
    rec.message = e.what();
    code = kExitUsage;
  } catch (const std::exception& e) {
    rec.status = "numerical_failure";
    rec.message = e.what();
    code = kExitNumerical;
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (code != kExitOk && code != kExitNumerical) rec.converged = false;

  try {
    if (!rec.table.header.empty()) {
      const std::string payload = cfg.format == "json" ? table_json(rec.table) : table_csv(rec.table);
      if (cfg.out.empty())
        std::cout << payload;
      else
        write_file(cfg.out, payload);
    }
    if (!cfg.out.empty()) write_file(cfg.out + ".manifest.json", manifest_json(rec));
    if (!cfg.svg.empty() && rec.plot) write_file(cfg.svg, emit_svg(*rec.plot, config_hash(cfg)));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (code == kExitOk) code = kExitUsage;
  }
  if (code != kExitOk) std::cerr << "error: " << rec.message << "\n";
  if (record) *record = std::move(rec);
  return code;
}

}  // namespace pchaos::cli
