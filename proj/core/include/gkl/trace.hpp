#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gkl {

/// One row per greedy step. Row n describes the state with n points already
/// selected and the selection of point n+1: nu = P_n(x_{n+1}),
/// sigma = max_x P_n(x), max_residual = ||r_n||_inf, coefficient = c_{n+1},
/// partial_native_norm = sum_{j<=n+1} c_j^2 (i.e. ||s_{n+1}||^2).
struct TraceRow {
  std::size_t n = 0;
  std::size_t selected_index = 0;
  std::vector<double> x;
  double nu = 0.0;
  double sigma = 0.0;
  double residual_at_selected = 0.0;
  double max_residual = 0.0;
  double criterion_value = 0.0;
  double coefficient = 0.0;
  double partial_native_norm = 0.0;
};

struct RunTrace {
  std::string kernel;
  std::string rule;
  std::uint64_t seed = 0;
  int dim = 1;
  std::string stop_reason;
  double final_max_residual = 0.0;  // ||r_N||_inf after the last update
  double final_sigma = 0.0;         // max_x P_N(x) after the last update
  std::vector<TraceRow> rows;

  std::vector<double> nu_series() const;
  std::vector<double> sigma_series() const;
  std::vector<double> max_residual_series() const;
  std::vector<double> residual_at_selected_series() const;
  std::vector<double> partial_native_norm_series() const;
  std::vector<double> column(const std::string& name) const;
};

/// Fixed column order:
/// n, selected_index, x_1..x_d, nu, sigma, residual_at_selected,
/// max_residual, criterion_value, coefficient, partial_native_norm.
/// Metadata is stored in leading '# key value' comment lines.
void write_trace_csv(const RunTrace& trace, const std::string& path);
RunTrace read_trace_csv(const std::string& path);

/// '.' decimal separator, scientific notation, 17 significant digits.
std::string format_number(double v);

/// Ensures the parent directory of `path` exists.
void create_parent_directories(const std::string& path);

}  // namespace gkl
