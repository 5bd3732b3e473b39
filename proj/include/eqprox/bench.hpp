#ifndef EQPROX_BENCH_HPP
#define EQPROX_BENCH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqprox/core.hpp"
#include "eqprox/errors.hpp"
#include "eqprox/params.hpp"
#include "eqprox/prox.hpp"
#include "eqprox/solver.hpp"

namespace eqprox {

// ---------------------------------------------------------------------------
// Max-type benchmark: f(x, y) = p g(y) - p g(x), g(t) = max{sqrt|t|, (t - q)^2 - q}

inline double max_type_g(double q, double t) {
  const double d = t - q;
  return std::max(std::sqrt(std::abs(t)), d * d - q);
}

struct DeltaRoot {
  double value;
  int steps;
};

/// Positive root of r(y) = p (y - q)^2 - sqrt(y) - p q by bisection.
inline DeltaRoot solve_delta(int p, int q) {
  if (p <= 1 || q <= 1) throw ArgumentError("solve_delta: require p > 1 and q > 1");
  const double pd = p;
  const double qd = q;
  auto r = [&](double y) { return pd * (y - qd) * (y - qd) - std::sqrt(y) - pd * qd; };
  double lo = qd;
  double hi = qd + 2.0 * std::sqrt(qd + std::sqrt(qd) / pd) + 10.0;
  if (!(r(lo) < 0.0) || !(r(hi) > 0.0)) throw RootBracketError("solve_delta: bracket has no sign change");
  int steps = 0;
  while (hi - lo > 1e-10 && steps < 200) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (r(mid) < 0.0 ? lo : hi) = mid;
    ++steps;
  }
  return {0.5 * (lo + hi), steps};
}

/// Which text of the example's g is used. Only the symmetric max is well formed.
enum class MaxTypeReading { SymmetricMax, LiteralProduct };

struct MaxTypeProblem {
  int p;
  int q;
  double delta0;  // positive root from solve_delta
  double delta;   // delta0 (1 + 1e-6): strictly greater than the root
  double gamma;   // 1 / (2 delta^{3/2})
  double eta = 0.5;
  double lo;
  double hi;
};

inline MaxTypeProblem describe_max_type(int p, int q, double lo = 0.0, double hi = 10000.0) {
  const DeltaRoot root = solve_delta(p, q);
  const double delta = root.value * (1.0 + 1e-6);
  if (!(lo <= 0.0) || !(hi >= delta) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ArgumentError("build_max_type: bracket must contain [0, delta]");
  }
  return {p, q, root.value, delta, 1.0 / (2.0 * std::pow(delta, 1.5)), 0.5, lo, hi};
}

namespace detail {

/// Real roots of the depressed cubic t^3 + a t + b = 0, Newton-polished.
inline std::vector<double> depressed_cubic_roots(double a, double b) {
  std::vector<double> roots;
  const double disc = 4.0 * a * a * a + 27.0 * b * b;
  if (a < 0.0 && disc < 0.0) {
    const double m = 2.0 * std::sqrt(-a / 3.0);
    const double arg = std::clamp(3.0 * b / (a * m), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int j = 0; j < 3; ++j) roots.push_back(m * std::cos(phi - 2.0 * std::numbers::pi * j / 3.0));
  } else {
    const double s = std::sqrt(std::max(0.0, b * b / 4.0 + a * a * a / 27.0));
    roots.push_back(std::cbrt(-b / 2.0 + s) + std::cbrt(-b / 2.0 - s));
  }
  for (double& t : roots) {
    for (int i = 0; i < 4; ++i) {
      const double d = 3.0 * t * t + a;
      if (d == 0.0) break;
      const double next = t - (t * t * t + a * t + b) / d;
      if (!std::isfinite(next)) break;
      t = next;
    }
  }
  return roots;
}

/// Crossings of sqrt|t| and (t - q)^2 - q, i.e. the kinks of g. Both are positive.
inline std::array<double, 2> max_type_kinks(double q) {
  auto k = [q](double t) { return (t - q) * (t - q) - q - std::sqrt(std::abs(t)); };
  auto bisect = [&](double lo, double hi) {
    // k(lo) > 0 > k(hi) or the reverse; run to exhaustion of the bracket.
    const bool lo_pos = k(lo) > 0.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      ((k(mid) > 0.0) == lo_pos ? lo : hi) = mid;
    }
    return std::abs(k(lo)) <= std::abs(k(hi)) ? lo : hi;
  };
  return {bisect(0.0, q), bisect(q, 3.0 * q)};
}

}  // namespace detail

/// Exact prox of p g over [lo, hi]: the minimizer is a kink, a stationary point
/// of one branch, or an endpoint. All candidates are scored with the true objective.
inline double max_type_prox(double p, double q, double w, double lambda, double lo, double hi,
                            const std::array<double, 2>& kinks) {
  auto h = [&](double x) { return p * max_type_g(q, x) + (x - w) * (x - w) / (2.0 * lambda); };
  std::vector<double> cand{kinks[0], kinks[1], lo, hi};
  cand.push_back((2.0 * p * lambda * q + w) / (2.0 * p * lambda + 1.0));
  // sqrt branch, x = s^2 > 0:  s^3 - w s + p lambda / 2 = 0
  for (double s : detail::depressed_cubic_roots(-w, 0.5 * p * lambda)) {
    if (s > 0.0) cand.push_back(s * s);
  }
  // sqrt branch, x = -s^2 < 0: s^3 + w s + p lambda / 2 = 0
  for (double s : detail::depressed_cubic_roots(w, 0.5 * p * lambda)) {
    if (s > 0.0) cand.push_back(-s * s);
  }
  double best_x = 0.0;
  double best_h = HUGE_VAL;
  bool found = false;
  for (double x : cand) {
    if (!std::isfinite(x)) continue;
    x = std::clamp(x, lo, hi);
    const double v = h(x);
    if (!found || v < best_h || (v == best_h && x < best_x)) {
      best_x = x;
      best_h = v;
      found = true;
    }
  }
  if (!found) throw NumericalError("max_type_prox: no finite candidate");
  return best_x;
}

inline EquilibriumProblem build_max_type(int p, int q, std::pair<double, double> bracket = {0.0, 10000.0},
                                         MaxTypeReading reading = MaxTypeReading::SymmetricMax) {
  if (reading != MaxTypeReading::SymmetricMax) {
    throw UnsupportedMethodError(
        "build_max_type: the literal reading 'max{sqrt|x| (x-q)^2 - q}' is not a well-formed max");
  }
  const MaxTypeProblem m = describe_max_type(p, q, bracket.first, bracket.second);
  const double pd = p;
  const double qd = q;
  const auto kinks = detail::max_type_kinks(qd);
  ProblemSpec s;
  s.family = "max_type";
  s.dim = 1;
  s.scalar_f = [pd, qd](double x, double y) { return pd * max_type_g(qd, y) - pd * max_type_g(qd, x); };
  s.f = [f = s.scalar_f](const Point& x, const Point& y) { return f(x[0], y[0]); };
  s.set = Interval(m.lo, m.hi);
  s.eta = m.eta;
  s.gamma = m.gamma;
  s.closed_form = [pd, qd, kinks](const Point& w, double lambda, const FeasibleSet& set) {
    const auto* iv = as_interval(set);
    if (iv == nullptr || !iv->bounded()) throw MissingBracketError("max-type prox needs a bounded Interval");
    return Point::scalar(max_type_prox(pd, qd, w.value(), lambda, iv->lo(), iv->hi(), kinks));
  };
  return EquilibriumProblem(std::move(s));
}

struct ReferenceMinimum {
  double x_star;
  double g_star;
};

/// Dense grid + golden-section argmin of g over the bracket. For
/// f(x, y) = p (g(y) - g(x)) the equilibrium set is argmin g.
inline ReferenceMinimum reference_minimizer(int p, int q, std::pair<double, double> bracket, double resolution = 1e-3) {
  if (p <= 1 || q <= 1) throw ArgumentError("reference_minimizer: require p > 1 and q > 1");
  if (!(resolution > 0.0)) throw ArgumentError("reference_minimizer: resolution must be > 0");
  const double width = bracket.second - bracket.first;
  const double n = std::max(static_cast<double>(tol::min_coarse_n), std::ceil(width / resolution));
  if (n > 2e9) throw ArgumentError("reference_minimizer: resolution too fine for the bracket");
  const double qd = q;
  const Minimum1D m = grid_refine_minimize_1d([qd](double t) { return max_type_g(qd, t); }, bracket.first,
                                              bracket.second, static_cast<int>(n), 1e-13);
  return {m.x_star, m.h_star};
}

/// Oracle prox by exhaustive scanning in two stages: the whole Interval at
/// `coarse_resolution`, then +-2 coarse cells around the winner at `fine_resolution`.
inline ProxResult two_stage_oracle_prox(const EquilibriumProblem& problem, const Point& base, double lambda,
                                        double coarse_resolution, double fine_resolution) {
  const auto* iv = as_interval(problem.set());
  if (iv == nullptr) throw UnsupportedMethodError("two_stage_oracle_prox: feasible set must be an Interval");
  const ProxResult coarse = brute_force_prox_oracle(ProxQuery(problem, base, lambda), coarse_resolution);
  const double c = coarse.minimizer.value();
  const double lo = std::max(iv->lo(), c - 2.0 * coarse_resolution);
  const double hi = std::min(iv->hi(), c + 2.0 * coarse_resolution);
  const EquilibriumProblem local = problem.with_set(Interval(lo, hi));
  ProxResult fine = brute_force_prox_oracle(ProxQuery(local, base, lambda), fine_resolution);
  fine.evaluations += coarse.evaluations;
  if (coarse.objective < fine.objective) return coarse;
  return fine;
}

// ---------------------------------------------------------------------------
// Convex control benchmarks

/// f(x, y) = <x, y - x>: monotone, since f(x, y) + f(y, x) = -||x - y||^2.
/// Solution proj_C(0); prox z = proj_C((1 - lambda) w).
inline EquilibriumProblem build_linear_monotone(std::size_t dim = 1, FeasibleSet set = WholeSpace{}) {
  ProblemSpec s;
  s.family = "linear_monotone";
  s.dim = dim;
  s.f = [](const Point& x, const Point& y) { return dot(x, y - x); };
  if (dim == 1) s.scalar_f = [](double x, double y) { return x * (y - x); };
  s.set = std::move(set);
  s.eta = 0.5;
  s.gamma = 1.0;  // nominal; f(x, .) is linear
  s.known_solution = project(s.set, Point::zeros(dim));
  s.closed_form = [](const Point& w, double lambda, const FeasibleSet& c) { return project(c, (1.0 - lambda) * w); };
  return EquilibriumProblem(std::move(s));
}

/// f(x, y) = ||y||^2 / 2 - ||x||^2 / 2, strongly convex in y (gamma = 1).
/// Solution proj_C(0); prox z = proj_C(w / (1 + lambda)).
inline EquilibriumProblem build_quadratic(std::size_t dim = 1, FeasibleSet set = WholeSpace{}) {
  ProblemSpec s;
  s.family = "quadratic";
  s.dim = dim;
  s.f = [](const Point& x, const Point& y) { return 0.5 * squared_norm(y) - 0.5 * squared_norm(x); };
  if (dim == 1) s.scalar_f = [](double x, double y) { return 0.5 * y * y - 0.5 * x * x; };
  s.set = std::move(set);
  s.eta = 0.5;
  s.gamma = 1.0;
  s.known_solution = project(s.set, Point::zeros(dim));
  s.closed_form = [](const Point& w, double lambda, const FeasibleSet& c) {
    return project(c, (1.0 / (1.0 + lambda)) * w);
  };
  return EquilibriumProblem(std::move(s));
}

/// f == 0. Every point of C solves the problem; the prox is the projection.
inline EquilibriumProblem build_zero(std::size_t dim = 1, FeasibleSet set = WholeSpace{}) {
  ProblemSpec s;
  s.family = "zero";
  s.dim = dim;
  s.f = [](const Point&, const Point&) { return 0.0; };
  if (dim == 1) s.scalar_f = [](double, double) { return 0.0; };
  s.set = std::move(set);
  s.closed_form = [](const Point& w, double, const FeasibleSet& c) { return project(c, w); };
  return EquilibriumProblem(std::move(s));
}

// ---------------------------------------------------------------------------
// Method comparison

struct NamedConfig {
  std::string name;
  SolverConfig config;
};

enum class RowKind { Method, Reference, Published };

inline const char* to_string(RowKind k) {
  switch (k) {
    case RowKind::Method: return "method";
    case RowKind::Reference: return "reference";
    case RowKind::Published: return "published";
  }
  return "?";
}

struct ComparisonRow {
  std::string method;
  RowKind kind = RowKind::Method;
  std::optional<Point> final;
  std::optional<int> iterations;
  std::optional<double> wall_time;
  std::optional<StopReason> stop_reason;
};

/// Runs every configuration on the same problem and start; rows sorted by name.
/// Runs are independent, so up to `jobs` of them execute concurrently.
inline std::vector<ComparisonRow> compare_methods(const EquilibriumProblem& problem,
                                                  const std::vector<NamedConfig>& configs,
                                                  const InitialPoints& init, const RunOptions& options = {},
                                                  int jobs = 1) {
  std::vector<ComparisonRow> rows(configs.size());
  RunOptions quiet = options;
  quiet.keep_trace = false;
  quiet.on_iteration = nullptr;
  auto one = [&](std::size_t i) {
    const RunResult r = run(problem, configs[i].config, init, quiet);
    return ComparisonRow{configs[i].name, RowKind::Method, r.final, r.iterations, r.wall_time, r.stop_reason};
  };
  const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
  for (std::size_t start = 0; start < configs.size(); start += width) {
    std::vector<std::future<ComparisonRow>> pending;
    for (std::size_t i = start; i < std::min(configs.size(), start + width); ++i) {
      pending.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, one, i));
    }
    for (std::size_t i = 0; i < pending.size(); ++i) rows[start + i] = pending[i].get();
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ComparisonRow& a, const ComparisonRow& b) { return a.method < b.method; });
  return rows;
}

/// Results previously reported for the max-type benchmark with p = 2, q = 99
/// (theta = 0.25, rho_k = 1.4, lambda_k = 0.2, tolerance 1e-13). Shown next to
/// ours in comparison reports; not reproduced by this implementation.
inline std::vector<ComparisonRow> published_max_type_rows() {
  return {
      {"published_one_step", RowKind::Published, Point::scalar(79.199999999986), 313, 0.04530167579650879,
       StopReason::ResidualBelowTolerance},
      {"published_two_step", RowKind::Published, Point::scalar(79.1999999999766), 152, 0.029584646224975586,
       StopReason::ResidualBelowTolerance},
  };
}

}  // namespace eqprox

#endif  // EQPROX_BENCH_HPP
