#include "gkl/analysis.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "gkl/errors.hpp"

namespace gkl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogTol = 1e-10;
constexpr double kAbstractTol = 1e-12;

double safe_log(double v) {
  if (v < 0.0) v = 0.0;
  return v > 0.0 ? std::log(v) : -kInf;
}

CheckRecord make_record(std::string name, long n, double lhs, double rhs, double tol) {
  CheckRecord rec;
  rec.name = std::move(name);
  rec.n = n;
  rec.lhs_log = lhs;
  rec.rhs_log = rhs;
  rec.margin = rhs - lhs;
  if (lhs == -kInf) {
    rec.pass = true;
    rec.margin = kInf;
  } else if (rhs == -kInf) {
    rec.pass = false;
    rec.margin = -kInf;
  } else {
    rec.pass = rec.margin >= -tol * std::max(1.0, std::abs(rhs));
  }
  return rec;
}

// ||r_i||^2 in the native space at trace row i, via the projection identity
// ||r_i||^2 = ||f||^2 - ||s_i||^2 for synthesized f.
double residual_norm_sq(const RunTrace& trace, double f_norm_sq, std::size_t i) {
  const double partial = i == 0 ? 0.0 : trace.rows[i - 1].partial_native_norm;
  if (f_norm_sq < partial - 1e-9) {
    throw std::invalid_argument("inconsistent norm: f_norm_sq below the partial native norm");
  }
  return std::max(f_norm_sq - partial, 0.0);
}

}  // namespace

double geometric_mean_window(std::span<const double> seq, std::size_t n) {
  if (n < 1) throw std::invalid_argument("geometric_mean_window: n must be >= 1");
  if (seq.size() < 2 * n) {
    throw std::invalid_argument("geometric_mean_window: sequence shorter than 2n");
  }
  double log_sum = 0.0;
  for (std::size_t i = n + 1; i <= 2 * n; ++i) {
    const double v = seq[i - 1];
    if (v < 0.0) throw std::invalid_argument("geometric_mean_window: negative entry");
    if (v == 0.0) return 0.0;
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(n));
}

CheckRecord check_abstract_product_inequality(std::span<const double> nu,
                                              std::span<const double> sigma,
                                              std::span<const double> d_bound,
                                              std::size_t N, std::size_t K, std::size_t m) {
  if (K < 1 || m < 1 || m >= K) {
    throw std::invalid_argument("check_abstract_product_inequality: need 1 <= m < K");
  }
  if (nu.size() <= N + K || sigma.size() <= N + 1 || d_bound.size() <= m) {
    throw std::invalid_argument("check_abstract_product_inequality: sequences too short");
  }
  double lhs = 0.0;
  for (std::size_t i = 1; i <= K; ++i) lhs += 2.0 * safe_log(nu[N + i]);
  const double kd = static_cast<double>(K);
  const double md = static_cast<double>(m);
  const double rhs = md * std::log(kd / md) + (kd - md) * std::log(kd / (kd - md)) +
                     2.0 * md * safe_log(sigma[N + 1]) +
                     2.0 * (kd - md) * safe_log(d_bound[m]);
  return make_record("abstract_product", static_cast<long>(N), lhs, rhs, kAbstractTol);
}

double bound_algebraic(long n, double alpha, double C0) {
  if (n < 3) throw std::invalid_argument("bound_algebraic: n must be >= 3");
  const double c0t = std::max(1.0, C0);
  return std::pow(2.0, alpha + 0.5) * c0t * std::exp(alpha) *
         std::pow(std::log(static_cast<double>(n)), alpha) *
         std::pow(static_cast<double>(n), -alpha);
}

double bound_exponential(long n, double alpha, double c0, double C0) {
  if (n < 2) throw std::invalid_argument("bound_exponential: n must be >= 2");
  const double c1 = std::pow(2.0, -(2.0 + alpha)) * c0;
  return std::sqrt(2.0 * std::max(1.0, C0)) *
         std::exp(-c1 * std::pow(static_cast<double>(n), alpha));
}

CheckRecord check_residual_product_lemma(const RunTrace& trace, double f_norm_sq,
                                         std::size_t n) {
  if (n < 1) throw std::invalid_argument("check_residual_product_lemma: n must be >= 1");
  if (trace.rows.size() < 2 * n + 1) {
    throw std::invalid_argument("check_residual_product_lemma: trace shorter than 2n+1 rows");
  }
  const double nd = static_cast<double>(n);
  double lhs = 0.0;
  double log_power_prod = 0.0;
  for (std::size_t i = n + 1; i <= 2 * n; ++i) {
    lhs += safe_log(trace.rows[i].residual_at_selected);
    log_power_prod += safe_log(trace.rows[i].nu);
  }
  lhs /= nd;
  const double rhs = -0.5 * std::log(nd) +
                     0.5 * safe_log(residual_norm_sq(trace, f_norm_sq, n + 1)) +
                     log_power_prod / nd;
  return make_record("residual_product_lemma", static_cast<long>(n), lhs, rhs, kLogTol);
}

CheckRecord check_improved_power_estimate(const RunTrace& trace, double f_norm_sq,
                                          const SelectionRule& rule) {
  const double e = rule.inv_beta_max1();
  CheckRecord worst;
  worst.name = "improved_power_estimate";
  worst.pass = true;
  worst.margin = kInf;
  bool first = true;
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const double lhs = safe_log(trace.rows[i].max_residual);
    const double rhs = 0.5 * safe_log(residual_norm_sq(trace, f_norm_sq, i)) +
                       e * safe_log(trace.rows[i].nu);
    CheckRecord rec = make_record(worst.name, static_cast<long>(i), lhs, rhs, kLogTol);
    if (first || rec.margin < worst.margin) {
      worst = rec;
      first = false;
    }
    if (!rec.pass) worst.pass = false;
  }
  return worst;
}

CheckRecord check_theorem_final(const RunTrace& trace, double f_norm_sq,
                                const SelectionRule& rule, std::size_t n) {
  if (n < 1) throw std::invalid_argument("check_theorem_final: n must be >= 1");
  if (trace.rows.size() < 2 * n + 1) {
    throw std::invalid_argument("check_theorem_final: trace shorter than 2n+1 rows");
  }
  const double nd = static_cast<double>(n);
  double lhs = 0.0;
  double log_power_prod = 0.0;
  for (std::size_t i = n + 1; i <= 2 * n; ++i) {
    lhs += safe_log(trace.rows[i].max_residual);
    log_power_prod += safe_log(trace.rows[i].nu);
  }
  lhs /= nd;
  const double rhs = -0.5 * rule.beta_min1() * std::log(nd) +
                     0.5 * safe_log(residual_norm_sq(trace, f_norm_sq, n + 1)) +
                     rule.inv_beta_max1() * log_power_prod / nd;
  return make_record("theorem_final", static_cast<long>(n), lhs, rhs, kLogTol);
}

SlopeFit fit_loglog_slope(std::span<const double> ns, std::span<const double> values,
                          double window_lo, double window_hi) {
  if (ns.size() != values.size()) {
    throw std::invalid_argument("fit_loglog_slope: length mismatch");
  }
  SlopeFit fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < window_lo || ns[i] > window_hi) continue;
    if (!(values[i] > 0.0) || !(ns[i] > 0.0)) {
      ++fit.skipped;
      continue;
    }
    const double x = std::log(ns[i]);
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++fit.used;
  }
  if (fit.used < 3) {
    throw std::invalid_argument("fit_loglog_slope: fewer than 3 usable points in window");
  }
  const double nd = fit.used;
  const double denom = nd * sxx - sx * sx;
  fit.slope = (nd * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / nd;
  return fit;
}

double l1_error_segment(double z1, double z2, double alpha) {
  if (!(0.0 <= z1 && z1 < z2)) {
    throw std::invalid_argument("l1_error_segment: need 0 <= z1 < z2");
  }
  const double a1 = 1.0 + alpha;
  return (std::pow(z2, a1) - std::pow(z1, a1)) / a1 -
         0.5 * (std::pow(z2, alpha) - std::pow(z1, alpha)) * (z2 - z1) -
         std::pow(z1, alpha) * (z2 - z1);
}

double h_alpha(double k, double alpha) {
  if (!(k > 1.0)) throw std::invalid_argument("h_alpha: k must be > 1");
  const double ka = std::pow(k, -alpha);
  return 1.0 / (1.0 + alpha) + (1.0 / (1.0 + alpha)) * (1.0 - ka) / (k - 1.0) -
         0.5 * (1.0 + ka);
}

double lower_bound_curves(long n, double alpha, LowerBoundVariant variant) {
  if (n < 1) throw std::invalid_argument("lower_bound_curves: n must be >= 1");
  const double nd = static_cast<double>(n);
  return variant == LowerBoundVariant::Uniform ? std::pow(nd, -alpha) : std::pow(nd, -2.0);
}

void write_checks_csv(const std::vector<CheckRecord>& records, const std::string& path) {
  create_parent_directories(path);
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << "check_name,n,lhs_log,rhs_log,margin,pass\n";
  for (const auto& r : records) {
    out << r.name << ',' << r.n << ',' << format_number(r.lhs_log) << ','
        << format_number(r.rhs_log) << ',' << format_number(r.margin) << ','
        << (r.pass ? 1 : 0) << "\n";
  }
  if (!out) throw io_error("write failure on '" + path + "'");
}

}  // namespace gkl
