// Command line front end: runs experiments from JSON configs, verifies the
// inequality suite, renders log-log SVG plots and fits convergence rates.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gkl/analysis.hpp"
#include "gkl/errors.hpp"
#include "gkl/experiment.hpp"
#include "gkl/svg.hpp"
#include "gkl/trace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitIo = 3;

int cmd_run(const std::string& config_path) {
  auto config = gkl::load_config(config_path);
  auto result = gkl::run_experiment(config);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& f : result.written_files) std::cout << "wrote " << f << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& config_path) {
  auto config = gkl::load_config(config_path);
  auto result = gkl::verify_experiment(config);
  for (const auto& s : result.skipped) std::cout << "skipped: " << s << "\n";
  std::size_t failures = 0;
  for (const auto& r : result.records) {
    if (!r.pass) {
      ++failures;
      std::cout << "FAIL " << r.name << " n=" << r.n << " lhs_log=" << r.lhs_log
                << " rhs_log=" << r.rhs_log << " margin=" << r.margin << "\n";
    }
  }
  std::cout << result.records.size() - failures << "/" << result.records.size()
            << " checks passed\n";
  return result.ok ? kExitOk : kExitCheckFailed;
}

int cmd_plot(const std::vector<std::string>& trace_paths, const std::string& out_path,
             const std::vector<double>& ref_slopes, const std::string& column) {
  std::vector<gkl::PlotSeries> series;
  for (const auto& path : trace_paths) {
    auto trace = gkl::read_trace_csv(path);
    gkl::PlotSeries s;
    s.label = trace.rule.empty() ? path : trace.rule;
    const auto values = trace.column(column);
    for (std::size_t i = 0; i < values.size(); ++i) {
      s.ns.push_back(static_cast<double>(trace.rows[i].n));
      s.values.push_back(values[i]);
    }
    series.push_back(std::move(s));
  }
  std::vector<gkl::ReferenceLine> refs;
  for (double slope : ref_slopes) refs.push_back({"", slope});
  auto result = gkl::emit_plot(series, refs, out_path);
  if (result.dropped_points > 0) {
    std::cerr << "warning: dropped " << result.dropped_points << " nonpositive points\n";
  }
  if (!result.written) {
    std::cerr << "warning: no plottable points, no file written\n";
    return kExitOk;
  }
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

int cmd_rates(const std::string& trace_path, const std::string& column,
              const std::string& window) {
  auto sep = window.find(':');
  if (sep == std::string::npos) {
    throw std::invalid_argument("window must be lo:hi");
  }
  const double lo = std::stod(window.substr(0, sep));
  const double hi = std::stod(window.substr(sep + 1));
  auto trace = gkl::read_trace_csv(trace_path);
  const auto values = trace.column(column);
  std::vector<double> ns;
  ns.reserve(trace.rows.size());
  for (const auto& r : trace.rows) ns.push_back(static_cast<double>(r.n));
  auto fit = gkl::fit_loglog_slope(ns, values, lo, hi);
  std::printf("column=%s window=[%g,%g] slope=%.6f intercept=%.6f used=%d skipped=%d\n",
              column.c_str(), lo, hi, fit.slope, fit.intercept, fit.used, fit.skipped);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"greedy kernel interpolation experiments"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "config file")->required();

  std::string verify_config_path;
  auto* verify = app.add_subcommand("verify", "run the inequality check suite");
  verify->add_option("config", verify_config_path, "config file")->required();

  std::vector<std::string> trace_paths;
  std::string plot_out;
  std::vector<double> ref_slopes;
  std::string plot_column = "max_residual";
  auto* plot = app.add_subcommand("plot", "render trace CSVs as a log-log SVG");
  plot->add_option("traces", trace_paths, "trace CSV files")->required();
  plot->add_option("--out", plot_out, "output SVG path")->required();
  plot->add_option("--ref", ref_slopes, "dashed reference slope (repeatable)");
  plot->add_option("--column", plot_column, "trace column to plot");

  std::string rates_trace, rates_column = "max_residual", rates_window = "10:100";
  auto* rates = app.add_subcommand("rates", "fit a log-log slope over a window");
  rates->add_option("trace", rates_trace, "trace CSV file")->required();
  rates->add_option("--column", rates_column, "trace column");
  rates->add_option("--window", rates_window, "fit window lo:hi");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (verify->parsed()) return cmd_verify(verify_config_path);
    if (plot->parsed()) return cmd_plot(trace_paths, plot_out, ref_slopes, plot_column);
    if (rates->parsed()) return cmd_rates(rates_trace, rates_column, rates_window);
  } catch (const gkl::io_error& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}
