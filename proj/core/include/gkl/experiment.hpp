#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gkl/analysis.hpp"
#include "gkl/geometry.hpp"
#include "gkl/greedy.hpp"
#include "gkl/kernels.hpp"
#include "gkl/svg.hpp"
#include "gkl/trace.hpp"

namespace gkl {

struct SliceConfig {
  int axis = 0;
  double value = 0.0;
};

struct DomainConfig {
  int dim = 1;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::optional<SliceConfig> slice;
  std::size_t grid_resolution = 0;  // uniform grid when > 0
  std::string points_csv;           // explicit point list when nonempty
};

struct TargetConfig {
  enum class Kind { PowerLaw, Synthesized, Csv };
  Kind kind = Kind::PowerLaw;
  double alpha = 1.0;  // f(x) = ||x||^alpha
  std::uint64_t centers_seed = 0;
  std::size_t center_count = 10;
  std::uint64_t coeff_seed = 1;
  std::string path;  // values aligned to domain.points_csv rows
};

struct RuleConfig {
  SelectionRule rule;
  bool slice = false;  // restrict selection to the slice candidates
};

struct OutputsConfig {
  std::string trace_csv;  // "{rule}" placeholder, or suffix appended
  std::string checks_csv;
  std::string plot_svg;  // "{quantity}" placeholder, or suffix appended
  std::vector<std::string> plot_quantities = {"max_residual"};
  std::vector<double> plot_reference_slopes;
};

struct ExperimentConfig {
  std::string kernel_name;
  DomainConfig domain;
  TargetConfig target;
  std::vector<RuleConfig> rules;
  StopCriteria stop;
  OutputsConfig outputs;
};

/// Parses and validates a config file. Throws std::invalid_argument on
/// validation failure, io_error when the file cannot be read.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

/// Candidate set, target values and selectable index sets realized from a
/// config. When a slice is configured the candidates are the base points
/// followed by their projections; slice rules select from the latter only.
struct PreparedExperiment {
  KernelModel model;
  CandidateSet candidates;
  std::vector<double> f_values;
  std::optional<double> f_norm_sq;  // synthesized targets only
  std::vector<std::size_t> base_indices;
  std::vector<std::size_t> slice_indices;
  std::vector<std::string> warnings;
};

PreparedExperiment prepare_experiment(const ExperimentConfig& config);

RunTrace run_rule(const PreparedExperiment& prep, const RuleConfig& rule,
                  const StopCriteria& stop);

struct ExperimentResult {
  std::vector<RunTrace> traces;  // aligned with config.rules
  std::vector<CheckRecord> checks;
  std::vector<std::string> warnings;
  std::vector<std::string> written_files;
};

/// Runs every rule (concurrently, capped by GKL_THREADS), writes one trace
/// CSV per rule, an aggregated checks CSV and the configured log-log SVGs.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct VerifyResult {
  bool ok = true;
  std::vector<CheckRecord> records;
  std::vector<std::string> skipped;
};

/// Runs fresh traces and evaluates every applicable inequality check.
/// Norm-dependent checks require a synthesized target and are reported as
/// skipped otherwise.
VerifyResult verify_experiment(const ExperimentConfig& config);

/// Inequality checks for one trace; norm-dependent ones only when
/// f_norm_sq is present and the rule is not Random.
std::vector<CheckRecord> checks_for_trace(const RunTrace& trace, const RuleConfig& rule,
                                          std::optional<double> f_norm_sq,
                                          std::size_t max_window = 20);

/// Worker cap from GKL_THREADS, falling back to the hardware concurrency.
unsigned worker_count();

}  // namespace gkl
