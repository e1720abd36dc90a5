#include "gkl/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "gkl/errors.hpp"

namespace gkl {

using nlohmann::json;

namespace {

std::string rule_label(const RuleConfig& rc) {
  return rc.slice ? rc.rule.label() + "_slice" : rc.rule.label();
}

// Substitutes "{key}" or, absent a placeholder, inserts "_value" before the
// extension so one template yields one file per rule / quantity.
std::string resolve_path(const std::string& tmpl, const std::string& key,
                         const std::string& value) {
  const std::string placeholder = "{" + key + "}";
  auto pos = tmpl.find(placeholder);
  if (pos != std::string::npos) {
    return tmpl.substr(0, pos) + value + tmpl.substr(pos + placeholder.size());
  }
  auto dot = tmpl.find_last_of('.');
  if (dot == std::string::npos) return tmpl + "_" + value;
  return tmpl.substr(0, dot) + "_" + value + tmpl.substr(dot);
}

SelectionRule parse_rule(const json& j) {
  SelectionRule rule;
  const std::string variant = j.value("variant", "beta");
  if (variant == "beta") {
    rule.variant = SelectionRule::Variant::Beta;
    if (!j.contains("beta")) throw std::invalid_argument("rule variant 'beta' needs a beta value");
    rule.beta = j.at("beta").get<double>();
    if (!(rule.beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  } else if (variant == "f_over_p") {
    rule.variant = SelectionRule::Variant::FOverP;
  } else if (variant == "random") {
    rule.variant = SelectionRule::Variant::Random;
    rule.random_seed = j.value("seed", 0ULL);
  } else {
    throw std::invalid_argument("unknown rule variant '" + variant + "'");
  }
  if (j.contains("power_floor")) rule.power_floor = j.at("power_floor").get<double>();
  return rule;
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

std::vector<double> read_values_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    try {
      values.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw io_error("bad value in '" + path + "'");
    }
  }
  return values;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.kernel_name = j.at("kernel").at("name").get<std::string>();

    const auto& dom = j.at("domain");
    cfg.domain.dim = dom.value("dim", 1);
    cfg.domain.count = dom.value("count", std::size_t{0});
    cfg.domain.seed = dom.value("seed", std::uint64_t{0});
    cfg.domain.grid_resolution = dom.value("grid_resolution", std::size_t{0});
    cfg.domain.points_csv = dom.value("points_csv", std::string{});
    if (dom.contains("slice")) {
      SliceConfig s;
      s.axis = dom.at("slice").at("axis").get<int>();
      s.value = dom.at("slice").at("value").get<double>();
      cfg.domain.slice = s;
    }

    if (j.contains("target")) {
      const auto& tgt = j.at("target");
      const std::string kind = tgt.value("kind", "power_law");
      if (kind == "power_law") {
        cfg.target.kind = TargetConfig::Kind::PowerLaw;
        cfg.target.alpha = tgt.value("alpha", 1.0);
      } else if (kind == "synthesized") {
        cfg.target.kind = TargetConfig::Kind::Synthesized;
        cfg.target.centers_seed = tgt.value("centers_seed", std::uint64_t{0});
        cfg.target.center_count = tgt.value("center_count", std::size_t{10});
        cfg.target.coeff_seed = tgt.value("coeff_seed", std::uint64_t{1});
      } else if (kind == "csv") {
        cfg.target.kind = TargetConfig::Kind::Csv;
        cfg.target.path = tgt.at("path").get<std::string>();
      } else {
        throw std::invalid_argument("unknown target kind '" + kind + "'");
      }
    }

    for (const auto& rj : j.at("rules")) {
      RuleConfig rc;
      rc.rule = parse_rule(rj);
      rc.slice = rj.value("slice", false);
      cfg.rules.push_back(rc);
    }

    if (j.contains("stop")) {
      const auto& stop = j.at("stop");
      cfg.stop.max_points = stop.value("max_points", std::size_t{300});
      cfg.stop.power_tol = stop.value("power_tol", 1e-5);
      cfg.stop.residual_tol = stop.value("residual_tol", 1e-14);
    }

    if (j.contains("outputs")) {
      const auto& out = j.at("outputs");
      cfg.outputs.trace_csv = out.value("trace_csv", std::string{});
      cfg.outputs.checks_csv = out.value("checks_csv", std::string{});
      cfg.outputs.plot_svg = out.value("plot_svg", std::string{});
      if (out.contains("plot_quantities")) {
        cfg.outputs.plot_quantities = out.at("plot_quantities").get<std::vector<std::string>>();
      }
      if (out.contains("plot_reference_slopes")) {
        cfg.outputs.plot_reference_slopes =
            out.at("plot_reference_slopes").get<std::vector<double>>();
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config error: ") + e.what());
  }

  if (cfg.rules.empty()) throw std::invalid_argument("config error: rules must be nonempty");
  if (cfg.domain.dim < 1) throw std::invalid_argument("config error: domain.dim must be >= 1");
  if (cfg.domain.points_csv.empty() && cfg.domain.grid_resolution == 0 && cfg.domain.count == 0) {
    throw std::invalid_argument(
        "config error: domain needs count, grid_resolution or points_csv");
  }
  if (cfg.domain.slice) {
    if (cfg.domain.slice->axis < 0 || cfg.domain.slice->axis >= cfg.domain.dim) {
      throw std::invalid_argument("config error: slice axis out of range");
    }
  } else {
    for (const auto& rc : cfg.rules) {
      if (rc.slice) throw std::invalid_argument("config error: slice rule without domain.slice");
    }
  }
  if (cfg.target.kind == TargetConfig::Kind::Csv && cfg.domain.points_csv.empty()) {
    throw std::invalid_argument("config error: csv target needs domain.points_csv");
  }
  cfg.stop.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

PreparedExperiment prepare_experiment(const ExperimentConfig& config) {
  PreparedExperiment prep;
  prep.model = make_kernel(config.kernel_name, config.domain.dim);

  CandidateSet base;
  if (!config.domain.points_csv.empty()) {
    base = load_points_csv(config.domain.points_csv);
    if (base.dim != config.domain.dim) {
      throw std::invalid_argument("point file dimension does not match domain.dim");
    }
  } else if (config.domain.grid_resolution > 0) {
    base = uniform_grid(config.domain.grid_resolution, config.domain.dim);
  } else {
    base = sample_random(config.domain.seed, config.domain.count, config.domain.dim);
  }
  const std::size_t base_count = base.size();
  prep.base_indices.resize(base_count);
  for (std::size_t i = 0; i < base_count; ++i) prep.base_indices[i] = i;

  prep.candidates = base;
  if (config.domain.slice) {
    const auto slice = project_to_slice(base, config.domain.slice->axis,
                                        config.domain.slice->value);
    std::set<std::vector<double>> base_keys;
    for (std::size_t i = 0; i < base_count; ++i) {
      auto p = base.point(i);
      base_keys.emplace(p.begin(), p.end());
    }
    for (std::size_t i = 0; i < slice.size(); ++i) {
      auto p = slice.point(i);
      std::vector<double> key(p.begin(), p.end());
      if (base_keys.count(key)) continue;
      prep.slice_indices.push_back(prep.candidates.size());
      prep.candidates.coords.insert(prep.candidates.coords.end(), p.begin(), p.end());
    }
  }
  prep.candidates.provenance.seed = config.domain.seed;

  const std::size_t total = prep.candidates.size();
  prep.f_values.resize(total);
  switch (config.target.kind) {
    case TargetConfig::Kind::PowerLaw:
      for (std::size_t i = 0; i < total; ++i) {
        prep.f_values[i] = std::pow(norm2(prep.candidates.point(i)), config.target.alpha);
      }
      break;
    case TargetConfig::Kind::Synthesized: {
      const auto centers = sample_random(config.target.centers_seed,
                                         config.target.center_count, config.domain.dim);
      std::mt19937_64 rng(config.target.coeff_seed);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      std::vector<double> coeff(centers.size());
      for (auto& a : coeff) a = unit(rng);
      for (std::size_t i = 0; i < total; ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < centers.size(); ++c) {
          s += coeff[c] * kernel_eval(prep.model, prep.candidates.point(i), centers.point(c));
        }
        prep.f_values[i] = s;
      }
      double norm_sq = 0.0;
      for (std::size_t a = 0; a < centers.size(); ++a) {
        for (std::size_t b = 0; b < centers.size(); ++b) {
          norm_sq += coeff[a] * coeff[b] *
                     kernel_eval(prep.model, centers.point(a), centers.point(b));
        }
      }
      prep.f_norm_sq = norm_sq;
      break;
    }
    case TargetConfig::Kind::Csv: {
      auto values = read_values_csv(config.target.path);
      if (values.size() != base_count || config.domain.slice) {
        throw std::invalid_argument("csv target values not aligned with the point list");
      }
      for (std::size_t i = 0; i < base_count; ++i) prep.f_values[i] = values[i];
      break;
    }
  }

  double max_diag = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    max_diag = std::max(max_diag, kernel_diag(prep.model, prep.candidates.point(i)));
  }
  if (max_diag > 1.0 + 1e-12) {
    prep.warnings.push_back("kernel is not normalized: max k(x,x) = " +
                            std::to_string(max_diag) + " > 1");
  }
  return prep;
}

RunTrace run_rule(const PreparedExperiment& prep, const RuleConfig& rule,
                  const StopCriteria& stop) {
  const std::vector<std::size_t>* selectable = nullptr;
  const std::vector<std::size_t>* evaluation = nullptr;
  if (rule.slice) {
    selectable = &prep.slice_indices;
    evaluation = &prep.base_indices;  // suprema stay over the base discretization
  } else if (!prep.slice_indices.empty()) {
    selectable = &prep.base_indices;
    evaluation = &prep.base_indices;
  }
  RunTrace trace = run_greedy(prep.model, prep.candidates, prep.f_values, rule.rule,
                              stop, selectable, evaluation);
  trace.rule = rule_label(rule);
  return trace;
}

unsigned worker_count() {
  if (const char* env = std::getenv("GKL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 4;
}

std::vector<CheckRecord> checks_for_trace(const RunTrace& trace, const RuleConfig& rule,
                                          std::optional<double> f_norm_sq,
                                          std::size_t max_window) {
  std::vector<CheckRecord> records;
  const std::size_t rows = trace.rows.size();

  if (rows >= 4) {
    const auto nu = trace.nu_series();
    const auto sigma = trace.sigma_series();
    std::mt19937_64 rng(12345);
    const std::size_t len = nu.size();
    for (int t = 0; t < 100; ++t) {
      std::uniform_int_distribution<std::size_t> pick_k(2, std::min<std::size_t>(len - 1, 40));
      const std::size_t K = pick_k(rng);
      if (len < K + 1) continue;
      std::uniform_int_distribution<std::size_t> pick_n(0, len - 1 - K);
      const std::size_t N = pick_n(rng);
      std::uniform_int_distribution<std::size_t> pick_m(1, K - 1);
      const std::size_t m = pick_m(rng);
      records.push_back(check_abstract_product_inequality(nu, sigma, sigma, N, K, m));
    }
  }

  const bool random_rule = rule.rule.variant == SelectionRule::Variant::Random;
  if (f_norm_sq && rows >= 3) {
    const std::size_t n_max = std::min(max_window, (rows - 1) / 2);
    for (std::size_t n = 1; n <= n_max; ++n) {
      records.push_back(check_residual_product_lemma(trace, *f_norm_sq, n));
      if (!random_rule) {
        records.push_back(check_theorem_final(trace, *f_norm_sq, rule.rule, n));
      }
    }
    if (!random_rule) {
      records.push_back(check_improved_power_estimate(trace, *f_norm_sq, rule.rule));
    }
  }
  return records;
}

namespace {

void run_all_rules(const ExperimentConfig& config, const PreparedExperiment& prep,
                   std::vector<RunTrace>& traces) {
  traces.resize(config.rules.size());
  const unsigned workers = std::min<std::size_t>(worker_count(), config.rules.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < config.rules.size(); ++i) {
      traces[i] = run_rule(prep, config.rules[i], config.stop);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < config.rules.size(); i = next.fetch_add(1)) {
        traces[i] = run_rule(prep, config.rules[i], config.stop);
      }
    });
  }
  for (auto& t : pool) t.join();
}

// Per-rule series of a trace quantity against n; "gm_nu"/"gm_sigma" are the
// geometric-mean windows of nu and sigma.
PlotSeries series_for(const RunTrace& trace, const std::string& quantity) {
  PlotSeries s;
  s.label = trace.rule + ":" + quantity;
  if (quantity == "gm_nu" || quantity == "gm_sigma") {
    const auto seq = quantity == "gm_nu" ? trace.nu_series() : trace.sigma_series();
    if (seq.size() < 2) return s;
    for (std::size_t n = 1; 2 * n <= seq.size(); ++n) {
      s.ns.push_back(static_cast<double>(n));
      s.values.push_back(geometric_mean_window(seq, n));
    }
    return s;
  }
  const auto values = trace.column(quantity);
  for (std::size_t i = 0; i < values.size(); ++i) {
    s.ns.push_back(static_cast<double>(trace.rows[i].n));
    s.values.push_back(values[i]);
  }
  return s;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  auto prep = prepare_experiment(config);
  ExperimentResult result;
  result.warnings = prep.warnings;

  run_all_rules(config, prep, result.traces);

  for (std::size_t i = 0; i < result.traces.size(); ++i) {
    if (result.traces[i].stop_reason == "breakdown") {
      result.warnings.push_back("rule " + result.traces[i].rule +
                                " stopped on numerical breakdown");
    }
    if (!config.outputs.trace_csv.empty()) {
      const std::string path =
          resolve_path(config.outputs.trace_csv, "rule", result.traces[i].rule);
      write_trace_csv(result.traces[i], path);
      result.written_files.push_back(path);
    }
  }

  for (std::size_t i = 0; i < result.traces.size(); ++i) {
    auto records = checks_for_trace(result.traces[i], config.rules[i], prep.f_norm_sq);
    result.checks.insert(result.checks.end(), records.begin(), records.end());
  }
  if (!config.outputs.checks_csv.empty()) {
    write_checks_csv(result.checks, config.outputs.checks_csv);
    result.written_files.push_back(config.outputs.checks_csv);
  }

  if (!config.outputs.plot_svg.empty()) {
    std::vector<ReferenceLine> refs;
    for (double slope : config.outputs.plot_reference_slopes) {
      refs.push_back({"", slope});
    }
    for (const auto& quantity : config.outputs.plot_quantities) {
      std::vector<PlotSeries> series;
      for (const auto& trace : result.traces) {
        auto s = series_for(trace, quantity);
        if (!s.ns.empty()) series.push_back(std::move(s));
      }
      const std::string path = resolve_path(config.outputs.plot_svg, "quantity", quantity);
      auto plot = emit_plot(series, refs, path);
      if (plot.dropped_points > 0) {
        result.warnings.push_back("plot " + path + ": dropped " +
                                  std::to_string(plot.dropped_points) + " nonpositive points");
      }
      if (plot.written) {
        result.written_files.push_back(path);
      } else {
        result.warnings.push_back("plot " + path + ": no plottable points, file not written");
      }
    }
  }
  return result;
}

VerifyResult verify_experiment(const ExperimentConfig& config) {
  auto prep = prepare_experiment(config);
  VerifyResult result;
  std::vector<RunTrace> traces;
  run_all_rules(config, prep, traces);
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (!prep.f_norm_sq) {
      result.skipped.push_back("rule " + traces[i].rule +
                               ": norm-dependent checks skipped (target is not synthesized)");
    }
    auto records = checks_for_trace(traces[i], config.rules[i], prep.f_norm_sq);
    for (const auto& r : records) {
      if (!r.pass) result.ok = false;
    }
    result.records.insert(result.records.end(), records.begin(), records.end());
  }
  return result;
}

}  // namespace gkl
