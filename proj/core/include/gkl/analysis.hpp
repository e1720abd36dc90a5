#pragma once

#include <span>
#include <string>
#include <vector>

#include "gkl/greedy.hpp"
#include "gkl/trace.hpp"

namespace gkl {

/// Outcome of one numeric inequality check, evaluated in log space.
/// margin = rhs_log - lhs_log; pass iff margin >= -tol * max(1, |rhs_log|).
struct CheckRecord {
  std::string name;
  long n = 0;
  double lhs_log = 0.0;
  double rhs_log = 0.0;
  double margin = 0.0;
  bool pass = false;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;  // natural log scale
  int used = 0;
  int skipped = 0;  // nonpositive values dropped
};

/// (prod_{i=n+1}^{2n} seq_i)^(1/n) for a 1-based sequence stored 0-based
/// (seq_i = seq[i-1]). Computed in log space; 0 if any factor is 0.
double geometric_mean_window(std::span<const double> seq, std::size_t n);

/// prod_{i=1}^{K} nu_{N+i}^2 <= (K/m)^m (K/(K-m))^(K-m) sigma_{N+1}^(2m)
/// d_m^(2K-2m), with all sequences position-indexed from 0 (nu[i] is nu_i).
/// d_bound is a user-supplied upper bound on the Kolmogorov widths; the max
/// power value of any fixed point sequence qualifies.
CheckRecord check_abstract_product_inequality(std::span<const double> nu,
                                              std::span<const double> sigma,
                                              std::span<const double> d_bound,
                                              std::size_t N, std::size_t K, std::size_t m);

/// 2^(alpha+1/2) * max(1,C0) * e^alpha * log(n)^alpha * n^(-alpha), n >= 3.
double bound_algebraic(long n, double alpha, double C0);

/// sqrt(2*max(1,C0)) * exp(-2^-(2+alpha) * c0 * n^alpha), n >= 2.
double bound_exponential(long n, double alpha, double c0, double C0);

/// [prod |r_i(x_{i+1})|]^(1/n) <= n^(-1/2) ||r_{n+1}|| [prod P_i(x_{i+1})]^(1/n),
/// products over i = n+1..2n. Holds for any point sequence. f must be
/// synthesized with known squared native norm f_norm_sq.
CheckRecord check_residual_product_lemma(const RunTrace& trace, double f_norm_sq,
                                         std::size_t n);

/// Per row i: ||r_i||_inf <= ||r_i|| * P_i(x_{i+1})^e with e = 1 for
/// beta in [0,1] and e = 1/beta for beta in (1, inf]. Reports the worst row.
CheckRecord check_improved_power_estimate(const RunTrace& trace, double f_norm_sq,
                                          const SelectionRule& rule);

/// [prod ||r_i||_inf]^(1/n) <= n^(-min(1,beta)/2) ||r_{n+1}||
/// [prod P_i(x_{i+1})^(1/max(1,beta))]^(1/n), products over i = n+1..2n.
CheckRecord check_theorem_final(const RunTrace& trace, double f_norm_sq,
                                const SelectionRule& rule, std::size_t n);

/// Ordinary least squares on (log n, log value) restricted to
/// n in [window_lo, window_hi]. Needs >= 3 usable points.
SlopeFit fit_loglog_slope(std::span<const double> ns, std::span<const double> values,
                          double window_lo, double window_hi);

/// Closed-form L1 error of the chord of x^alpha on [z1, z2].
double l1_error_segment(double z1, double z2, double alpha);

/// 1/(1+a) + (1/(1+a)) (1-k^-a)/(k-1) - (1+k^-a)/2 for k > 1.
double h_alpha(double k, double alpha);

enum class LowerBoundVariant { Uniform, Optimal };

/// Reference curves n^-alpha (uniform points) and n^-2 (optimal points),
/// constant 1; slope comparison only.
double lower_bound_curves(long n, double alpha, LowerBoundVariant variant);

void write_checks_csv(const std::vector<CheckRecord>& records, const std::string& path);

}  // namespace gkl
