#include "gkl/greedy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "gkl/errors.hpp"

namespace gkl {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string SelectionRule::label() const {
  switch (variant) {
    case Variant::FOverP:
      return "f_over_p";
    case Variant::Random: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "random_%llu", static_cast<unsigned long long>(random_seed));
      return buf;
    }
    case Variant::Beta:
    default: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "beta_%g", beta);
      return buf;
    }
  }
}

double SelectionRule::beta_min1() const {
  if (variant == Variant::FOverP) return 1.0;
  return std::min(1.0, beta);
}

double SelectionRule::inv_beta_max1() const {
  if (variant == Variant::FOverP) return 0.0;
  return 1.0 / std::max(1.0, beta);
}

void StopCriteria::validate() const {
  if (max_points < 1) throw std::invalid_argument("StopCriteria: max_points must be >= 1");
  if (power_tol < 0 || residual_tol < 0) {
    throw std::invalid_argument("StopCriteria: tolerances must be >= 0");
  }
}

GreedyState::GreedyState(const KernelModel& model, const CandidateSet& candidates,
                         std::vector<double> f_values)
    : model_(&model), candidates_(&candidates), f_values_(std::move(f_values)) {
  const std::size_t n = candidates.size();
  if (f_values_.size() != n) {
    throw std::invalid_argument("GreedyState: f_values not aligned with candidates");
  }
  is_selected_.assign(n, 0);
  power_sq_.resize(n);
  for (std::size_t i = 0; i < n; ++i) power_sq_[i] = kernel_diag(model, candidates.point(i));
  power_sq_preclamp_ = power_sq_;
  residual_ = f_values_;
}

void GreedyState::newton_update(std::size_t new_index, double power_floor) {
  const std::size_t n = candidates_->size();
  if (new_index >= n) throw std::invalid_argument("newton_update: index out of range");
  if (power_sq_[new_index] <= power_floor) {
    throw numerical_breakdown("newton_update: power at the new point is below the floor ("
                              + std::to_string(power_sq_[new_index]) + " <= "
                              + std::to_string(power_floor) + ")");
  }
  const double p = std::sqrt(power_sq_[new_index]);
  const auto xp = candidates_->point(new_index);

  std::vector<double> col(n);
  for (std::size_t i = 0; i < n; ++i) {
    col[i] = kernel_eval(*model_, candidates_->point(i), xp);
  }
  for (std::size_t j = 0; j < newton_columns_.size(); ++j) {
    const double w = newton_columns_[j][new_index];
    const double* vj = newton_columns_[j].data();
    for (std::size_t i = 0; i < n; ++i) col[i] -= w * vj[i];
  }
  for (std::size_t i = 0; i < n; ++i) col[i] /= p;

  const double c = residual_[new_index] / p;
  for (std::size_t i = 0; i < n; ++i) {
    const double pre = power_sq_[i] - col[i] * col[i];
    power_sq_preclamp_[i] = pre;
    power_sq_[i] = std::max(pre, 0.0);
    residual_[i] -= c * col[i];
  }
  power_sq_[new_index] = 0.0;
  residual_[new_index] = 0.0;
  coefficients_.push_back(c);
  selected_.push_back(new_index);
  is_selected_[new_index] = 1;
  newton_columns_.push_back(std::move(col));
}

double GreedyState::partial_native_norm() const {
  double s = 0.0;
  for (double c : coefficients_) s += c * c;
  return s;
}

double GreedyState::max_abs_residual() const {
  double m = 0.0;
  for (double r : residual_) m = std::max(m, std::abs(r));
  return m;
}

double GreedyState::max_power() const {
  double m = 0.0;
  for (double p : power_sq_) m = std::max(m, p);
  return std::sqrt(m);
}

std::vector<double> score_candidates(const GreedyState& state, const SelectionRule& rule,
                                     const std::vector<std::size_t>* selectable) {
  const std::size_t n = state.candidates().size();
  std::vector<double> scores(n, -kInf);
  auto score_one = [&](std::size_t i) {
    const double p2 = state.power_sq()[i];
    if (p2 <= rule.power_floor) return;
    const double p = std::sqrt(p2);
    const double r = std::abs(state.residual()[i]);
    switch (rule.variant) {
      case SelectionRule::Variant::FOverP:
        scores[i] = r / p;
        break;
      case SelectionRule::Variant::Random:
        scores[i] = 0.0;  // eligibility marker only
        break;
      case SelectionRule::Variant::Beta:
      default:
        scores[i] = std::pow(r, rule.beta) * std::pow(p, 1.0 - rule.beta);
        break;
    }
  };
  if (selectable) {
    for (std::size_t i : *selectable) score_one(i);
  } else {
    for (std::size_t i = 0; i < n; ++i) score_one(i);
  }
  return scores;
}

std::optional<std::size_t> select_next(const GreedyState& state, const SelectionRule& rule,
                                       const std::vector<std::size_t>* selectable,
                                       std::mt19937_64* rng) {
  const auto scores = score_candidates(state, rule, selectable);
  if (rule.variant == SelectionRule::Variant::Random) {
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] > -kInf) eligible.push_back(i);
    }
    if (eligible.empty()) return std::nullopt;
    if (!rng) throw std::invalid_argument("select_next: Random rule needs a generator");
    std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
    return eligible[pick(*rng)];
  }
  std::size_t best = 0;
  double best_score = -kInf;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > best_score) {
      best_score = scores[i];
      best = i;
    }
  }
  if (best_score == -kInf) return std::nullopt;
  return best;
}

RunTrace run_greedy(const KernelModel& model, const CandidateSet& candidates,
                    const std::vector<double>& f_values, const SelectionRule& rule,
                    const StopCriteria& stop, const std::vector<std::size_t>* selectable,
                    const std::vector<std::size_t>* evaluation) {
  stop.validate();
  GreedyState state(model, candidates, f_values);
  std::mt19937_64 rng(rule.random_seed);

  auto eval_max_residual = [&] {
    if (!evaluation) return state.max_abs_residual();
    double m = 0.0;
    for (std::size_t i : *evaluation) m = std::max(m, std::abs(state.residual()[i]));
    return m;
  };
  auto eval_sigma = [&] {
    if (!evaluation) return state.max_power();
    double m = 0.0;
    for (std::size_t i : *evaluation) m = std::max(m, state.power_sq()[i]);
    return std::sqrt(m);
  };

  RunTrace trace;
  trace.kernel = model.name;
  trace.rule = rule.label();
  trace.seed = candidates.provenance.seed;
  trace.dim = candidates.dim;

  while (true) {
    if (eval_max_residual() < stop.residual_tol) {
      trace.stop_reason = "residual_tol";
      break;
    }
    if (state.n_selected() >= stop.max_points) {
      trace.stop_reason = "max_points";
      break;
    }
    if (eval_sigma() < stop.power_tol) {
      trace.stop_reason = "power_tol";
      break;
    }
    const auto scores = score_candidates(state, rule, selectable);
    const auto pick = select_next(state, rule, selectable, &rng);
    if (!pick) {
      trace.stop_reason = "exhausted";
      break;
    }
    const std::size_t sel = *pick;
    const double nu = std::sqrt(state.power_sq()[sel]);

    TraceRow row;
    row.n = state.n_selected();
    row.selected_index = sel;
    const auto xp = candidates.point(sel);
    row.x.assign(xp.begin(), xp.end());
    row.nu = nu;
    row.sigma = eval_sigma();
    row.residual_at_selected = std::abs(state.residual()[sel]);
    row.max_residual = eval_max_residual();
    row.criterion_value = scores[sel];

    try {
      state.newton_update(sel, rule.power_floor);
    } catch (const numerical_breakdown&) {
      trace.stop_reason = "breakdown";
      break;
    }
    row.coefficient = state.coefficients().back();
    row.partial_native_norm = state.partial_native_norm();
    trace.rows.push_back(std::move(row));
  }

  trace.final_max_residual = eval_max_residual();
  trace.final_sigma = eval_sigma();
  return trace;
}

namespace {

// The oracles work in extended precision: computing k(q,q) - k^T A^{-1} k in
// double leaves ~1e-16 cancellation noise in the radicand, which the final
// square root amplifies to ~1e-8 exactly where the power function vanishes.
using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

Eigen::LLT<LongMatrix> factor_kernel_matrix(const KernelModel& model,
                                            const CandidateSet& selected) {
  const std::size_t n = selected.size();
  LongMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const long double v = kernel_eval(model, selected.point(i), selected.point(j));
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  Eigen::LLT<LongMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw singular_matrix("kernel matrix is numerically singular");
  }
  return llt;
}

}  // namespace

double power_oracle(const KernelModel& model, const CandidateSet& selected,
                    std::span<const double> query) {
  const std::size_t n = selected.size();
  const double kqq = kernel_diag(model, query);
  if (n == 0) return std::sqrt(std::max(kqq, 0.0));
  auto llt = factor_kernel_matrix(model, selected);
  LongVector kvec(n);
  for (std::size_t i = 0; i < n; ++i) kvec(i) = kernel_eval(model, selected.point(i), query);
  const long double quad = kvec.dot(llt.solve(kvec));
  return static_cast<double>(std::sqrt(std::max<long double>(kqq - quad, 0.0L)));
}

double interpolant_oracle(const KernelModel& model, const CandidateSet& selected,
                          const std::vector<double>& f_at_selected,
                          std::span<const double> query) {
  const std::size_t n = selected.size();
  if (f_at_selected.size() != n) {
    throw std::invalid_argument("interpolant_oracle: f_at_selected not aligned");
  }
  if (n == 0) return 0.0;
  auto llt = factor_kernel_matrix(model, selected);
  LongVector f(n);
  for (std::size_t i = 0; i < n; ++i) f(i) = f_at_selected[i];
  LongVector alpha = llt.solve(f);
  long double s = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    s += alpha(i) * static_cast<long double>(kernel_eval(model, selected.point(i), query));
  }
  return static_cast<double>(s);
}

}  // namespace gkl
