#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pseudochaos/io.hpp"

namespace pchaos::cli {

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitNumerical = 3, kExitBudget = 4 };

struct TimeGrid {
  double a = 0.0;
  double b = 1.0;
  std::size_t steps = 2;

  std::vector<double> points() const;
};

struct ExperimentConfig {
  std::string experiment;
  std::string ensemble = "gue";
  unsigned n = 6;
  std::uint64_t dtilde = 0;  // 0 means d
  std::optional<unsigned> kwise;
  double t = 1.0;
  std::optional<TimeGrid> t_grid;
  double beta = 1.0;
  std::size_t samples = 100;
  std::size_t shots = 1000;
  std::vector<unsigned> cut;  // empty means the first half of the qubits
  std::string probe = "renyi2";
  unsigned m = 48;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out;
  std::string svg;
  std::string format = "csv";
};

const std::vector<std::string>& experiment_names();

// Applies one key=value setting; throws UsageError naming the field.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);
// Line-oriented key=value file; '#' starts a comment.
std::map<std::string, std::string> parse_config_file(const std::string& path);
std::map<std::string, std::string> parse_config_text(const std::string& text);
// Checks cross-field constraints; throws UsageError.
void validate(const ExperimentConfig& cfg);

// Canonical key=value echo (threads and output paths excluded) and its hash.
std::map<std::string, std::string> config_echo(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

struct ResultTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;
};

struct PlotSeries {
  enum class Kind { Histogram, Line };
  Kind kind = Kind::Line;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;  // bin left edges for histograms
  std::vector<double> y;
  double bin_width = 0.0;
};

struct RunRecord {
  ExperimentConfig config;
  std::string version;
  double wall_seconds = 0.0;
  ResultTable table;
  std::map<std::string, double> summary;
  std::map<std::string, double> error_estimates;
  std::optional<PlotSeries> plot;
  bool converged = true;
  std::string status = "ok";
  std::string message;
};

// Computes the experiment. Library exceptions propagate.
RunRecord compute_experiment(const ExperimentConfig& cfg);

// compute_experiment plus output files (CSV or JSON table, manifest,
// optional SVG). Returns the exit code; failures still write a manifest
// when an output path is set.
int run_experiment(const ExperimentConfig& cfg, RunRecord* record = nullptr);

std::string table_csv(const ResultTable& t);
std::string manifest_json(const RunRecord& r);

// Self-contained SVG; throws std::invalid_argument for an empty series.
std::string emit_svg(const PlotSeries& series, const std::string& config_hash);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace pchaos::cli
