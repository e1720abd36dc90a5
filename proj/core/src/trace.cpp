#include "gkl/trace.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gkl/errors.hpp"

namespace gkl {

void create_parent_directories(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  if (ec) throw io_error("cannot create directory '" + parent.string() + "': " + ec.message());
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

std::vector<double> RunTrace::nu_series() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.nu);
  return out;
}

std::vector<double> RunTrace::sigma_series() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.sigma);
  return out;
}

std::vector<double> RunTrace::max_residual_series() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.max_residual);
  return out;
}

std::vector<double> RunTrace::residual_at_selected_series() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.residual_at_selected);
  return out;
}

std::vector<double> RunTrace::partial_native_norm_series() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.partial_native_norm);
  return out;
}

std::vector<double> RunTrace::column(const std::string& name) const {
  if (name == "nu") return nu_series();
  if (name == "sigma") return sigma_series();
  if (name == "max_residual") return max_residual_series();
  if (name == "residual_at_selected") return residual_at_selected_series();
  if (name == "partial_native_norm") return partial_native_norm_series();
  if (name == "criterion_value" || name == "coefficient") {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
      out.push_back(name == "coefficient" ? r.coefficient : r.criterion_value);
    }
    return out;
  }
  throw std::invalid_argument("unknown trace column '" + name + "'");
}

void write_trace_csv(const RunTrace& trace, const std::string& path) {
  create_parent_directories(path);
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << "# kernel " << trace.kernel << "\n";
  out << "# rule " << trace.rule << "\n";
  out << "# seed " << trace.seed << "\n";
  out << "# dim " << trace.dim << "\n";
  out << "# stop_reason " << trace.stop_reason << "\n";
  out << "# final_max_residual " << format_number(trace.final_max_residual) << "\n";
  out << "# final_sigma " << format_number(trace.final_sigma) << "\n";
  out << "n,selected_index";
  for (int a = 1; a <= trace.dim; ++a) out << ",x_" << a;
  out << ",nu,sigma,residual_at_selected,max_residual,criterion_value,"
         "coefficient,partial_native_norm\n";
  for (const auto& r : trace.rows) {
    out << r.n << ',' << r.selected_index;
    for (double c : r.x) out << ',' << format_number(c);
    out << ',' << format_number(r.nu) << ',' << format_number(r.sigma) << ','
        << format_number(r.residual_at_selected) << ',' << format_number(r.max_residual)
        << ',' << format_number(r.criterion_value) << ',' << format_number(r.coefficient)
        << ',' << format_number(r.partial_native_norm) << "\n";
  }
  if (!out) throw io_error("write failure on '" + path + "'");
}

RunTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  RunTrace trace;
  std::string line;
  bool header_seen = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::stringstream meta(line.substr(1));
      std::string key, value;
      meta >> key;
      std::getline(meta, value);
      if (!value.empty() && value[0] == ' ') value.erase(0, 1);
      try {
        if (key == "kernel") trace.kernel = value;
        else if (key == "rule") trace.rule = value;
        else if (key == "seed") trace.seed = std::stoull(value);
        else if (key == "dim") trace.dim = std::stoi(value);
        else if (key == "stop_reason") trace.stop_reason = value;
        else if (key == "final_max_residual") trace.final_max_residual = std::stod(value);
        else if (key == "final_sigma") trace.final_sigma = std::stod(value);
      } catch (const std::exception&) {
        throw io_error("bad metadata in '" + path + "' line " + std::to_string(lineno));
      }
      continue;
    }
    if (!header_seen) {  // column header line
      header_seen = true;
      continue;
    }
    std::stringstream row(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(row, cell, ',')) {
      try {
        cells.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw io_error("bad number in '" + path + "' line " + std::to_string(lineno));
      }
    }
    const std::size_t expected = 2 + static_cast<std::size_t>(trace.dim) + 7;
    if (cells.size() != expected) {
      throw io_error("wrong column count in '" + path + "' line " + std::to_string(lineno));
    }
    TraceRow r;
    r.n = static_cast<std::size_t>(cells[0]);
    r.selected_index = static_cast<std::size_t>(cells[1]);
    r.x.assign(cells.begin() + 2, cells.begin() + 2 + trace.dim);
    std::size_t k = 2 + trace.dim;
    r.nu = cells[k++];
    r.sigma = cells[k++];
    r.residual_at_selected = cells[k++];
    r.max_residual = cells[k++];
    r.criterion_value = cells[k++];
    r.coefficient = cells[k++];
    r.partial_native_norm = cells[k++];
    trace.rows.push_back(std::move(r));
  }
  if (!header_seen) throw io_error("no column header in '" + path + "'");
  return trace;
}

}  // namespace gkl
