#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gkl/geometry.hpp"
#include "gkl/kernels.hpp"
#include "gkl/trace.hpp"

namespace gkl {

/// Point selection rule on the beta scale: score(x) = |r_n(x)|^beta *
/// P_n(x)^(1-beta). Beta 0, 0.5 and 1 are P-, f*P- and f-greedy; FOverP is
/// the limit rule |r_n(x)| / P_n(x). Random ignores scores and draws an
/// eligible candidate from its own seeded generator.
struct SelectionRule {
  enum class Variant { Beta, FOverP, Random };
  Variant variant = Variant::Beta;
  double beta = 0.0;            // used by Variant::Beta only
  std::uint64_t random_seed = 0;  // used by Variant::Random only
  double power_floor = 1e-13;   // eligibility threshold on P^2

  std::string label() const;
  /// min(1, beta) / max(1, beta) with the FOverP limit (beta = inf, 1/inf = 0).
  double beta_min1() const;
  double inv_beta_max1() const;
};

struct StopCriteria {
  std::size_t max_points = 300;
  double power_tol = 1e-5;      // stop when max P_n over the evaluation set < power_tol
  double residual_tol = 1e-14;  // stop when max |r_n| < residual_tol

  void validate() const;
};

/// Incremental interpolation state over a fixed candidate set. Holds the
/// Newton basis values at every candidate, the current squared power
/// function and the current residual. Confined to one run; not thread-safe.
class GreedyState {
 public:
  GreedyState(const KernelModel& model, const CandidateSet& candidates,
              std::vector<double> f_values);

  /// Appends the Newton basis column for the new point and updates power,
  /// residual and coefficients. Throws numerical_breakdown if the power at
  /// the new point is at or below power_floor * safety.
  void newton_update(std::size_t new_index, double power_floor = 1e-13);

  std::size_t n_selected() const { return selected_.size(); }
  const std::vector<std::size_t>& selected() const { return selected_; }
  const std::vector<double>& power_sq() const { return power_sq_; }
  const std::vector<double>& power_sq_preclamp() const { return power_sq_preclamp_; }
  const std::vector<double>& residual() const { return residual_; }
  const std::vector<double>& f_values() const { return f_values_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  /// Newton basis values v_{j+1}(x) at all candidates (0-based column j).
  const std::vector<double>& newton_column(std::size_t j) const { return newton_columns_[j]; }
  const CandidateSet& candidates() const { return *candidates_; }
  const KernelModel& model() const { return *model_; }

  /// sum of squared coefficients, the squared native norm of s_n.
  double partial_native_norm() const;
  double max_abs_residual() const;
  double max_power() const;  // sqrt of max power_sq

 private:
  const KernelModel* model_;
  const CandidateSet* candidates_;
  std::vector<double> f_values_;
  std::vector<std::size_t> selected_;
  std::vector<char> is_selected_;
  std::vector<std::vector<double>> newton_columns_;
  std::vector<double> coefficients_;
  std::vector<double> power_sq_;
  std::vector<double> power_sq_preclamp_;  // pre-clamp values of the last update
  std::vector<double> residual_;
};

/// Per-candidate scores; ineligible candidates (selected, below the power
/// floor, or outside `selectable` when given) get -infinity.
std::vector<double> score_candidates(const GreedyState& state, const SelectionRule& rule,
                                     const std::vector<std::size_t>* selectable = nullptr);

/// Index of the maximal score, ties broken by lowest index. nullopt when no
/// candidate is eligible. `rng` is consumed by Variant::Random only.
std::optional<std::size_t> select_next(const GreedyState& state, const SelectionRule& rule,
                                       const std::vector<std::size_t>* selectable = nullptr,
                                       std::mt19937_64* rng = nullptr);

/// Full greedy loop. Stop reasons: "max_points", "power_tol",
/// "residual_tol", "exhausted", "breakdown". `evaluation` restricts the
/// recorded suprema (sigma, max_residual) to a subset of the candidates,
/// e.g. the base discretization when slice candidates are appended.
RunTrace run_greedy(const KernelModel& model, const CandidateSet& candidates,
                    const std::vector<double>& f_values, const SelectionRule& rule,
                    const StopCriteria& stop,
                    const std::vector<std::size_t>* selectable = nullptr,
                    const std::vector<std::size_t>* evaluation = nullptr);

/// P_{X}(query) via a dense Cholesky factorization of the kernel matrix,
/// independent of the incremental path.
double power_oracle(const KernelModel& model, const CandidateSet& selected,
                    std::span<const double> query);

/// s(query) from the directly solved linear system A alpha = f.
double interpolant_oracle(const KernelModel& model, const CandidateSet& selected,
                          const std::vector<double>& f_at_selected,
                          std::span<const double> query);

}  // namespace gkl
