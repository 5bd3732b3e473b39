#ifndef EQPROX_SOLVER_HPP
#define EQPROX_SOLVER_HPP

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqprox/constants.hpp"
#include "eqprox/core.hpp"
#include "eqprox/errors.hpp"
#include "eqprox/params.hpp"
#include "eqprox/prox.hpp"

namespace eqprox {

/// y_k = x_k + theta (x_k - x_{k-1}) + beta (x_{k-1} - x_{k-2}).
inline Point extrapolate(const Point& x_k, const Point& x_km1, const Point& x_km2, double theta, double beta) {
  require_same_dim(x_k, x_km1, "extrapolate");
  require_same_dim(x_k, x_km2, "extrapolate");
  std::vector<double> y(x_k.dim());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = x_k[i] + theta * (x_k[i] - x_km1[i]) + beta * (x_km1[i] - x_km2[i]);
  }
  return Point(std::move(y));
}

/// x_{k+1} = (1 - rho_k) y_k + rho_k z_k, so that x_{k+1} - y_k = rho_k (z_k - y_k).
inline Point relax(const Point& y, const Point& z, double rho_k) {
  require_same_dim(y, z, "relax");
  if (rho_k == 1.0) return z;
  std::vector<double> x(y.dim());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = y[i] + rho_k * (z[i] - y[i]);
  return Point(std::move(x));
}

struct InitialPoints {
  Point x_m1;  // x_{-1}
  Point x_0;
  Point x_1;
};

struct SolverState {
  Point x_km2;
  Point x_km1;
  Point x_k;
  int k = 1;
};

struct DiagnosticSample {
  double fejer_lhs;     // ||x_{k+1} - x_hat||^2
  double fejer_rhs_35;  // ||y_k - x_hat||^2 - alpha_max ||x_{k+1} - y_k||^2
  double fejer_rhs_36;  // same with alpha_min
  double gamma_k;
  double gamma_bar_k;
  double c1;
  double c2;

  double slack_35() const { return fejer_rhs_35 - fejer_lhs; }
  double slack_36() const { return fejer_rhs_36 - fejer_lhs; }
};

struct IterationRecord {
  int k;
  Point y;
  Point z;
  Point x_next;
  double residual;  // ||z - y||
  double rho_k;
  double lambda_k;
  std::optional<DiagnosticSample> diagnostics;
};

enum class StopReason { ResidualBelowTolerance, MaxIterations, ProxFailure };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::ResidualBelowTolerance: return "residual_below_tolerance";
    case StopReason::MaxIterations: return "max_iterations";
    case StopReason::ProxFailure: return "prox_failure";
  }
  return "?";
}

struct RunResult {
  Point final;
  int iterations = 0;
  StopReason stop_reason = StopReason::MaxIterations;
  std::vector<IterationRecord> trace;
  double wall_time = 0.0;  // seconds
  InitialPoints init;
  std::string failure;  // set when stop_reason == ProxFailure
};

struct RunOptions {
  ProxMethod method = ProxMethod::ClosedForm;
  GridOptions grid;
  double oracle_resolution = 1e-6;
  bool keep_trace = true;
  /// Called after every iteration, e.g. to stream the trace to disk.
  std::function<void(const IterationRecord&)> on_iteration;
};

struct FejerCheck {
  bool holds_35;
  bool holds_36;
  double slack_35;
  double slack_36;
};

namespace detail {

inline DiagnosticSample fejer_terms(const Point& y, const Point& x_next, double rho_k, double lambda_k,
                                    const Point& x_hat, double eta) {
  const AlphaBounds b = alpha_bounds(rho_k, lambda_k, eta);
  const double dy = squared_distance(y, x_hat);
  const double step = squared_distance(x_next, y);
  DiagnosticSample s{};
  s.fejer_lhs = squared_distance(x_next, x_hat);
  s.fejer_rhs_35 = dy - b.alpha_max * step;
  s.fejer_rhs_36 = dy - b.alpha_min * step;
  return s;
}

}  // namespace detail

/// Truncated Fejer inequalities
///   ||x_{k+1} - x_hat||^2 <= ||y_k - x_hat||^2 - alpha ||x_{k+1} - y_k||^2
/// with alpha = alpha_max (3.5) and alpha = alpha_min (3.6). Slack is rhs - lhs.
inline FejerCheck fejer_check(const IterationRecord& record, const std::optional<Point>& x_hat, double eta) {
  if (!x_hat) throw PreconditionError("fejer_check: no known solution");
  const DiagnosticSample s = detail::fejer_terms(record.y, record.x_next, record.rho_k, record.lambda_k, *x_hat, eta);
  return {s.slack_35() >= -tol::fejer, s.slack_36() >= -tol::fejer, s.slack_35(), s.slack_36()};
}

struct LyapunovCoefficients {
  double c1;
  double c2;
};

inline LyapunovCoefficients lyapunov_coefficients(double theta, double beta, double alpha) {
  const double base = (theta - beta) * (1.0 + theta) - alpha * (theta * theta - 2.0 * theta + beta * theta + beta + 1.0);
  const double c1 = -base;
  const double c2 = -(base - beta * (theta - beta) - alpha * (beta * beta + beta + beta * theta));
  return {c1, c2};
}

struct LyapunovTerm {
  int k;
  double gamma_k;
  double gamma_bar_k;
  double c1;
  double c2;
};

/// Gamma_k = ||x_k - x^||^2 - theta ||x_{k-1} - x^||^2 - beta ||x_{k-2} - x^||^2 + alpha_k (1 + beta - theta) ||x_k - x_{k-1}||^2
/// Gamma_bar_k = Gamma_k + c1 ||x_{k-1} - x_{k-2}||^2
inline LyapunovTerm lyapunov_term(int k, const Point& x_k, const Point& x_km1, const Point& x_km2, const Point& x_hat,
                                  double theta, double beta, double alpha) {
  const auto [c1, c2] = lyapunov_coefficients(theta, beta, alpha);
  const double gk = squared_distance(x_k, x_hat) - theta * squared_distance(x_km1, x_hat) -
                    beta * squared_distance(x_km2, x_hat) +
                    alpha * (1.0 + beta - theta) * squared_distance(x_k, x_km1);
  return {k, gk, gk + c1 * squared_distance(x_km1, x_km2), c1, c2};
}

/// Lyapunov energies for every iterate x_k, k = 1..iterations, of a finished run.
inline std::vector<LyapunovTerm> lyapunov_sequence(const RunResult& run, const Point& x_hat, double theta,
                                                   double beta, const Schedule& alpha_k) {
  if (run.trace.empty()) throw PreconditionError("lyapunov_sequence: empty trace");
  std::vector<const Point*> xs{&run.init.x_m1, &run.init.x_0, &run.init.x_1};
  for (const auto& rec : run.trace) xs.push_back(&rec.x_next);
  std::vector<LyapunovTerm> out;
  // xs[j] holds x_{j-1}.
  for (std::size_t j = 2; j < xs.size(); ++j) {
    const int k = static_cast<int>(j) - 1;
    out.push_back(lyapunov_term(k, *xs[j], *xs[j - 1], *xs[j - 2], x_hat, theta, beta, alpha_k(k)));
  }
  return out;
}

/// Relaxed proximal point method with two-step inertial extrapolation.
///
/// Iterates y_k = extrapolate(...), z_k = prox(y_k), x_{k+1} = relax(y_k, z_k)
/// until ||z_k - y_k|| < epsilon_stop or k reaches max_iter. On convergence the
/// final point is y_k. A failing inner solve ends the run with ProxFailure.
inline RunResult run(const EquilibriumProblem& problem, const SolverConfig& config, const InitialPoints& init,
                     const RunOptions& options = {}) {
  problem.check_dim(init.x_m1, "run(x_-1)");
  problem.check_dim(init.x_0, "run(x_0)");
  problem.check_dim(init.x_1, "run(x_1)");
  const double theta = config.effective_theta();
  const double beta = config.effective_beta();
  if (!(theta >= 0.0 && theta < 0.5)) throw ArgumentError("run: theta must lie in [0, 1/2)");
  if (!(beta <= 0.0)) throw ArgumentError("run: beta must be <= 0");
  if (!(config.rho >= 0.0 && config.rho < 1.0)) throw ArgumentError("run: rho must lie in [0, 1)");
  if (!(config.epsilon_stop > 0.0)) throw ArgumentError("run: epsilon_stop must be > 0");
  if (config.max_iter < 1) throw ArgumentError("run: max_iter must be >= 1");

  const auto t0 = std::chrono::steady_clock::now();
  RunResult result{init.x_1, 0, StopReason::MaxIterations, {}, 0.0, init, {}};
  SolverState state{init.x_m1, init.x_0, init.x_1, 1};
  const auto& x_hat = problem.known_solution();

  for (;;) {
    const int k = state.k;
    const double rk = config.rho_k(k);
    const double lk = config.lambda_k(k);
    std::optional<IterationRecord> rec;
    try {
      if (!(rk > 0.0) || !(lk > 0.0)) throw ArgumentError("schedule value must be > 0 at k = " + std::to_string(k));
      Point y = [&] {
        switch (config.variant) {
          case Variant::PlainRelaxedPPA: return state.x_k;
          case Variant::OneStepInertial: {
            std::vector<double> v(state.x_k.dim());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = state.x_k[i] + theta * (state.x_k[i] - state.x_km1[i]);
            return Point(std::move(v));
          }
          case Variant::TwoStepInertial: break;
        }
        return extrapolate(state.x_k, state.x_km1, state.x_km2, theta, beta);
      }();
      ProxResult pr = prox_step(ProxQuery(problem, y, lk), options.method, options.grid, options.oracle_resolution);
      const double residual = distance(pr.minimizer, y);
      Point x_next = relax(y, pr.minimizer, rk);
      rec.emplace(IterationRecord{k, std::move(y), std::move(pr.minimizer), std::move(x_next), residual, rk, lk, {}});
    } catch (const NumericalError& e) {
      result.failure = e.what();
    } catch (const std::logic_error& e) {
      result.failure = e.what();
    }
    if (!rec) {
      result.stop_reason = StopReason::ProxFailure;
      result.final = state.x_k;
      result.iterations = k;
      break;
    }

    if (x_hat) {
      DiagnosticSample s = detail::fejer_terms(rec->y, rec->x_next, rk, lk, *x_hat, problem.eta());
      const LyapunovTerm lt =
          lyapunov_term(k, state.x_k, state.x_km1, state.x_km2, *x_hat, theta, beta, (2.0 - rk) / rk);
      s.gamma_k = lt.gamma_k;
      s.gamma_bar_k = lt.gamma_bar_k;
      s.c1 = lt.c1;
      s.c2 = lt.c2;
      rec->diagnostics = s;
    }
    if (options.on_iteration) options.on_iteration(*rec);

    const bool converged = rec->residual < config.epsilon_stop;
    result.iterations = k;
    if (converged) {
      result.stop_reason = StopReason::ResidualBelowTolerance;
      result.final = rec->y;
    } else {
      result.final = rec->x_next;
    }
    Point x_next = rec->x_next;
    if (options.keep_trace) result.trace.push_back(std::move(*rec));
    if (converged) break;
    if (k >= config.max_iter) {
      result.stop_reason = StopReason::MaxIterations;
      break;
    }
    state = SolverState{std::move(state.x_km1), std::move(state.x_k), std::move(x_next), k + 1};
  }

  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace eqprox

#endif  // EQPROX_SOLVER_HPP
