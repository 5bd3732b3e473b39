#ifndef EQPROX_PROX_HPP
#define EQPROX_PROX_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "eqprox/constants.hpp"
#include "eqprox/core.hpp"
#include "eqprox/errors.hpp"

namespace eqprox {

enum class ProxMethod { ClosedForm, GridRefine, Oracle };

inline const char* to_string(ProxMethod m) {
  switch (m) {
    case ProxMethod::ClosedForm: return "closed_form";
    case ProxMethod::GridRefine: return "grid_refine";
    case ProxMethod::Oracle: return "oracle";
  }
  return "?";
}

/// argmin_{x in C} f(base, x) + ||base - x||^2 / (2 lambda).
class ProxQuery {
 public:
  ProxQuery(const EquilibriumProblem& problem, Point base, double lambda)
      : problem_(&problem), base_(std::move(base)), lambda_(lambda) {
    problem.check_dim(base_, "ProxQuery");
    if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw ArgumentError("ProxQuery: lambda must be > 0");
    if (std::holds_alternative<AffineSubspace>(problem.set()) &&
        membership_residual(problem.set(), base_) > tol::affine_base) {
      throw ArgumentError("ProxQuery: base point is off the affine set");
    }
  }

  const EquilibriumProblem& problem() const noexcept { return *problem_; }
  const Point& base() const noexcept { return base_; }
  double lambda() const noexcept { return lambda_; }

  /// h(x) = f(w, x) + ||w - x||^2 / (2 lambda).
  double objective(const Point& x) const {
    return (*problem_)(base_, x) + squared_distance(base_, x) / (2.0 * lambda_);
  }
  double objective(double x) const {
    const double d = base_.value() - x;
    return problem_->scalar(base_.value(), x) + d * d / (2.0 * lambda_);
  }

 private:
  const EquilibriumProblem* problem_;
  Point base_;
  double lambda_;
};

struct ProxResult {
  Point minimizer;
  double objective;
  std::int64_t evaluations = 0;
  std::optional<std::pair<double, double>> bracket;
};

struct Minimum1D {
  double x_star;
  double h_star;
  std::int64_t evaluations;
};

struct GridOptions {
  int coarse_n = tol::default_coarse_n;
  double refine_tol = tol::default_refine_tol;
};

namespace detail {

template <class F>
double checked_eval(F& h, double x, std::int64_t& evals) {
  const double v = h(x);
  ++evals;
  if (!std::isfinite(v)) {
    throw EvaluationError("objective is not finite at x = " + std::to_string(x), x);
  }
  return v;
}

inline void require_bracket(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw MissingBracketError("1D search needs a bounded bracket");
  if (!(lo < hi)) throw ArgumentError("1D search: require lo < hi");
}

}  // namespace detail

/// Global 1D minimization for objectives that need not be unimodal.
///
/// Evaluates h on a uniform grid of coarse_n + 1 points, keeps the best one
/// (ties within tol::tie go to the smallest abscissa), then runs golden-section
/// search on the window spanning the best cell and its two neighbours. The
/// returned value is never worse than the best grid value.
template <class F>
Minimum1D grid_refine_minimize_1d(F&& h, double lo, double hi, int coarse_n = tol::default_coarse_n,
                                  double refine_tol = tol::default_refine_tol) {
  detail::require_bracket(lo, hi);
  if (coarse_n < tol::min_coarse_n) throw ArgumentError("grid_refine_minimize_1d: coarse_n must be >= 64");
  if (!(refine_tol > 0.0)) throw ArgumentError("grid_refine_minimize_1d: refine_tol must be > 0");

  std::int64_t evals = 0;
  const double step = (hi - lo) / coarse_n;
  auto grid = [&](int i) { return i == coarse_n ? hi : lo + i * step; };

  int best_i = 0;
  double best_h = detail::checked_eval(h, lo, evals);
  for (int i = 1; i <= coarse_n; ++i) {
    const double v = detail::checked_eval(h, grid(i), evals);
    if (v < best_h - tol::tie) {
      best_h = v;
      best_i = i;
    }
  }
  double best_x = grid(best_i);

  double a = grid(std::max(best_i - 1, 0));
  double b = grid(std::min(best_i + 1, coarse_n));
  constexpr double inv_phi = 0.6180339887498948482;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double hc = detail::checked_eval(h, c, evals);
  double hd = detail::checked_eval(h, d, evals);
  for (int iter = 0; iter < 300 && (b - a) > refine_tol; ++iter) {
    if (hc <= hd) {
      b = d;
      d = c;
      hd = hc;
      c = b - inv_phi * (b - a);
      if (!(c > a && c < d)) break;
      hc = detail::checked_eval(h, c, evals);
    } else {
      a = c;
      c = d;
      hc = hd;
      d = a + inv_phi * (b - a);
      if (!(d > c && d < b)) break;
      hd = detail::checked_eval(h, d, evals);
    }
  }
  const double x_ref = hc <= hd ? c : d;
  const double h_ref = std::min(hc, hd);
  if (h_ref < best_h) {
    best_h = h_ref;
    best_x = x_ref;
  }
  return {best_x, best_h, evals};
}

/// Dense uniform scan over an Interval at spacing <= resolution, no
/// refinement. Test oracle; cost is (hi - lo) / resolution evaluations.
inline ProxResult brute_force_prox_oracle(const ProxQuery& query, double resolution) {
  const auto* iv = as_interval(query.problem().set());
  if (iv == nullptr) throw UnsupportedMethodError("brute_force_prox_oracle: feasible set must be an Interval");
  if (!(resolution > 0.0)) throw ArgumentError("brute_force_prox_oracle: resolution must be > 0");
  detail::require_bracket(iv->lo(), iv->hi());

  const double lo = iv->lo();
  const double hi = iv->hi();
  const auto n = static_cast<std::int64_t>(std::ceil((hi - lo) / resolution));
  const double step = (hi - lo) / static_cast<double>(n);
  std::int64_t evals = 0;
  auto h = [&](double x) { return query.objective(x); };

  double best_x = lo;
  double best_h = detail::checked_eval(h, lo, evals);
  for (std::int64_t i = 1; i <= n; ++i) {
    const double x = i == n ? hi : lo + static_cast<double>(i) * step;
    const double v = detail::checked_eval(h, x, evals);
    if (v < best_h - tol::tie) {
      best_h = v;
      best_x = x;
    }
  }
  return {Point::scalar(best_x), best_h, evals, std::make_pair(lo, hi)};
}

/// Step 2 of the method: one inner prox solve.
inline ProxResult prox_step(const ProxQuery& query, ProxMethod method, const GridOptions& options = {},
                            double oracle_resolution = 1e-6) {
  const EquilibriumProblem& problem = query.problem();
  switch (method) {
    case ProxMethod::ClosedForm: {
      if (!problem.closed_form()) {
        throw UnsupportedMethodError("prox_step: no closed-form prox registered for family '" +
                                     problem.family() + "'");
      }
      Point z = (*problem.closed_form())(query.base(), query.lambda(), problem.set());
      problem.check_dim(z, "closed-form prox");
      const double hz = query.objective(z);
      return {std::move(z), hz, 1, std::nullopt};
    }
    case ProxMethod::GridRefine: {
      if (problem.dim() != 1) {
        throw UnsupportedMethodError("prox_step: built-in global search is one-dimensional");
      }
      const auto* iv = as_interval(problem.set());
      if (iv == nullptr || !iv->bounded()) {
        throw MissingBracketError("prox_step: GridRefine needs a bounded Interval feasible set");
      }
      const Minimum1D m = grid_refine_minimize_1d([&](double x) { return query.objective(x); }, iv->lo(),
                                                  iv->hi(), options.coarse_n, options.refine_tol);
      return {Point::scalar(m.x_star), m.h_star, m.evaluations, std::make_pair(iv->lo(), iv->hi())};
    }
    case ProxMethod::Oracle:
      return brute_force_prox_oracle(query, oracle_resolution);
  }
  throw UnsupportedMethodError("prox_step: unknown method");
}

struct Lemma1Sides {
  double lhs;
  double rhs;
  bool holds() const { return lhs <= rhs + tol::lemma1; }
};

/// Prox inequality for a strongly quasiconvex g = f(w, .) with modulus gamma:
///   g(z) - max{g(y), g(z)} <= (mu/lambda)<z - w, y - z> + (mu/2)(mu/lambda - gamma + mu gamma)||y - z||^2.
inline Lemma1Sides lemma1_check(const ProxQuery& query, const Point& z, const Point& y, double mu, double gamma) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw ArgumentError("lemma1_check: mu must lie in [0, 1]");
  const auto& problem = query.problem();
  const Point& w = query.base();
  const double lam = query.lambda();
  const double gz = problem(w, z);
  const double gy = problem(w, y);
  const double lhs = gz - std::max(gy, gz);
  const double rhs = (mu / lam) * dot(z - w, y - z) +
                     0.5 * mu * (mu / lam - gamma + mu * gamma) * squared_distance(y, z);
  return {lhs, rhs};
}

}  // namespace eqprox

#endif  // EQPROX_PROX_HPP
