#ifndef EQPROX_PARAMS_HPP
#define EQPROX_PARAMS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eqprox/constants.hpp"
#include "eqprox/core.hpp"
#include "eqprox/errors.hpp"

namespace eqprox {

/// A parameter sequence k -> value for k >= 1.
class Schedule {
 public:
  static Schedule constant(double v) {
    Schedule s([v](int) { return v; });
    s.constant_ = v;
    return s;
  }
  explicit Schedule(std::function<double(int)> fn) : fn_(std::move(fn)) {
    if (!fn_) throw ArgumentError("Schedule: empty function");
  }

  double operator()(int k) const { return fn_(k); }
  bool is_constant() const noexcept { return constant_.has_value(); }
  std::optional<double> constant_value() const noexcept { return constant_; }

 private:
  std::function<double(int)> fn_;
  std::optional<double> constant_;
};

enum class Variant { TwoStepInertial, OneStepInertial, PlainRelaxedPPA };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::TwoStepInertial: return "two_step";
    case Variant::OneStepInertial: return "one_step";
    case Variant::PlainRelaxedPPA: return "plain";
  }
  return "?";
}

struct SolverConfig {
  double theta = 0.0;  // first inertia weight, in [0, 1/2)
  double beta = 0.0;   // second inertia weight, <= 0
  double rho = 0.0;    // relaxation radius, in [0, 1)
  Schedule rho_k = Schedule::constant(1.0);
  Schedule lambda_k = Schedule::constant(0.2);
  double epsilon_step = 0.25;  // upper bound on the prox steps
  double epsilon_stop = 1e-8;  // stop when ||z_k - y_k|| < epsilon_stop
  int max_iter = tol::default_max_iter;
  Variant variant = Variant::TwoStepInertial;

  // The variant overrides the stored weights.
  double effective_theta() const { return variant == Variant::PlainRelaxedPPA ? 0.0 : theta; }
  double effective_beta() const { return variant == Variant::TwoStepInertial ? beta : 0.0; }
};

struct AlphaBounds {
  double alpha_max;
  double alpha_min;
};

/// alpha_max = (2 - rho_k) / rho_k, alpha_min = (2 - 4 eta lambda_k - rho_k) / rho_k.
inline AlphaBounds alpha_bounds(double rho_k, double lambda_k, double eta) {
  if (!(rho_k > 0.0)) throw ArgumentError("alpha_bounds: rho_k must be > 0");
  if (!(lambda_k > 0.0)) throw ArgumentError("alpha_bounds: lambda_k must be > 0");
  if (!(eta > 0.0)) throw ArgumentError("alpha_bounds: eta must be > 0");
  return {(2.0 - rho_k) / rho_k, (2.0 - 4.0 * eta * lambda_k - rho_k) / rho_k};
}

// ---------------------------------------------------------------------------
// Validation report

enum class Status { Pass, Fail, Vacuous, Degenerate };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Vacuous: return "VACUOUS";
    case Status::Degenerate: return "DEGENERATE";
  }
  return "?";
}

/// One evaluated inequality `lhs relation rhs`.
struct Check {
  std::string name;
  double lhs;
  std::string relation;
  double rhs;
  Status status;
};

struct ReportEntry {
  std::string condition;       // "C1".."C4" or "structure"
  int k_first = 0;             // 0 for k-independent entries
  std::optional<int> k_last;   // empty: holds for every k (constant schedules)
  Status status = Status::Pass;
  std::vector<Check> checks;
  std::optional<AlphaBounds> bounds;  // C3/C4 only
  std::string message;
};

struct ValidationReport {
  std::vector<ReportEntry> entries;

  /// True when nothing failed and nothing was degenerate.
  bool all_ok() const {
    return std::none_of(entries.begin(), entries.end(), [](const ReportEntry& e) {
      return e.status == Status::Fail || e.status == Status::Degenerate;
    });
  }
  std::vector<const ReportEntry*> find(const std::string& condition) const {
    std::vector<const ReportEntry*> out;
    for (const auto& e : entries) {
      if (e.condition == condition) out.push_back(&e);
    }
    return out;
  }
  /// Worst status over every entry of `condition`; nullopt when absent.
  std::optional<Status> status_of(const std::string& condition) const {
    std::optional<Status> worst;
    for (const auto* e : find(condition)) {
      if (!worst || rank(e->status) > rank(*worst)) worst = e->status;
    }
    return worst;
  }

 private:
  static int rank(Status s) {
    switch (s) {
      case Status::Vacuous: return 0;
      case Status::Pass: return 1;
      case Status::Degenerate: return 2;
      case Status::Fail: return 3;
    }
    return 3;
  }
};

namespace detail {

inline Check check_lt(std::string name, double lhs, double rhs) {
  return {std::move(name), lhs, "<", rhs, lhs < rhs ? Status::Pass : Status::Fail};
}
inline Check check_le(std::string name, double lhs, double rhs) {
  return {std::move(name), lhs, "<=", rhs, lhs <= rhs ? Status::Pass : Status::Fail};
}

inline Status aggregate(const std::vector<Check>& checks) {
  bool degenerate = false;
  for (const auto& c : checks) {
    if (c.status == Status::Fail) return Status::Fail;
    if (c.status == Status::Degenerate) degenerate = true;
  }
  return degenerate ? Status::Degenerate : Status::Pass;
}

inline ReportEntry make_entry(std::string condition, std::vector<Check> checks, std::string message = {}) {
  ReportEntry e;
  e.condition = std::move(condition);
  e.status = aggregate(checks);
  e.checks = std::move(checks);
  e.message = std::move(message);
  return e;
}

// k values to check: {1} for constant schedules, 1..horizon otherwise.
inline std::vector<int> checked_ks(bool constant, int horizon) {
  std::vector<int> ks;
  if (horizon < 1) return ks;
  if (constant) {
    ks.push_back(1);
  } else {
    for (int k = 1; k <= horizon; ++k) ks.push_back(k);
  }
  return ks;
}

inline void stamp_k(ReportEntry& e, int k, bool constant) {
  e.k_first = k;
  if (constant) {
    e.k_last.reset();
  } else {
    e.k_last = k;
  }
}

}  // namespace detail

/// Step-size window: 1/(gamma - 8 eta) < lambda_k < epsilon_step <= 1/(4 eta).
inline std::vector<ReportEntry> validate_c1(const SolverConfig& config, double gamma, double eta, int horizon) {
  std::vector<ReportEntry> out;
  const bool constant = config.lambda_k.is_constant();
  for (int k : detail::checked_ks(constant, horizon)) {
    const double lambda = config.lambda_k(k);
    std::vector<Check> checks;
    std::string message;
    const double gap = gamma - 8.0 * eta;
    if (gap <= 0.0) {
      // The lower bound is negative (or undefined), so any positive step clears it.
      checks.push_back({"1/(gamma-8eta) < lambda_k", gap == 0.0 ? -HUGE_VAL : 1.0 / gap, "<", lambda,
                        lambda > 0.0 ? Status::Vacuous : Status::Fail});
      message = "lower bound vacuous: gamma <= 8 eta";
    } else {
      checks.push_back(detail::check_lt("1/(gamma-8eta) < lambda_k", 1.0 / gap, lambda));
    }
    checks.push_back(detail::check_lt("lambda_k < epsilon_step", lambda, config.epsilon_step));
    checks.push_back(detail::check_le("epsilon_step <= 1/(4eta)", config.epsilon_step, 1.0 / (4.0 * eta)));
    auto e = detail::make_entry("C1", std::move(checks), std::move(message));
    detail::stamp_k(e, k, constant);
    out.push_back(std::move(e));
  }
  return out;
}

/// Relaxation window: 0 < 1 - rho <= rho_k <= 1 + rho with 0 <= rho <= 1 - 4 eta epsilon_step.
inline std::vector<ReportEntry> validate_c2(const SolverConfig& config, double eta, int horizon) {
  std::vector<ReportEntry> out;
  const bool constant = config.rho_k.is_constant();
  for (int k : detail::checked_ks(constant, horizon)) {
    const double rk = config.rho_k(k);
    std::vector<Check> checks{
        detail::check_lt("0 < 1-rho", 0.0, 1.0 - config.rho),
        detail::check_le("1-rho <= rho_k", 1.0 - config.rho, rk),
        detail::check_le("rho_k <= 1+rho", rk, 1.0 + config.rho),
        detail::check_le("0 <= rho", 0.0, config.rho),
        detail::check_le("rho <= 1-4eta*epsilon_step", config.rho, 1.0 - 4.0 * eta * config.epsilon_step),
    };
    auto e = detail::make_entry("C2", std::move(checks));
    detail::stamp_k(e, k, constant);
    out.push_back(std::move(e));
  }
  return out;
}

/// max{m1, m2} < beta <= 0 with
///   m1 = 2 theta / alpha_min - (1 - theta),
///   m2 = theta / (1 + alpha_max) - alpha_min (theta - 1)^2 / ((1 + theta)(1 + alpha_max)).
inline ReportEntry validate_c3(double theta, double beta, const AlphaBounds& bounds) {
  std::vector<Check> checks;
  if (!(bounds.alpha_min > 0.0)) {
    checks.push_back({"alpha_min > 0", bounds.alpha_min, ">", 0.0, Status::Degenerate});
    return detail::make_entry("C3", std::move(checks), "alpha_min <= 0: first term undefined");
  }
  const double m1 = 2.0 * theta / bounds.alpha_min - (1.0 - theta);
  const double m2 = theta / (1.0 + bounds.alpha_max) -
                    bounds.alpha_min * (theta - 1.0) * (theta - 1.0) /
                        ((1.0 + theta) * (1.0 + bounds.alpha_max));
  const double m = std::max(m1, m2);
  checks.push_back({"m1", m1, "=", m1, Status::Pass});
  checks.push_back({"m2", m2, "=", m2, Status::Pass});
  checks.push_back(detail::check_lt("max{m1,m2} < beta", m, beta));
  checks.push_back(detail::check_le("beta <= 0", beta, 0.0));
  return detail::make_entry("C3", std::move(checks));
}

/// Value of the (C4) polynomial in (theta, beta); the condition is value < 0.
inline double c4_value(double theta, double beta, const AlphaBounds& b) {
  return theta * theta * (1.0 - b.alpha_min) +
         theta * (1.0 - 2.0 * beta + 2.0 * b.alpha_max - 2.0 * b.alpha_min) -
         beta * (1.0 - 2.0 * b.alpha_min) + beta * beta * (1.0 - b.alpha_min) - b.alpha_min;
}

inline ReportEntry validate_c4(double theta, double beta, const AlphaBounds& bounds) {
  std::vector<Check> checks{detail::check_lt("c4 polynomial < 0", c4_value(theta, beta, bounds), 0.0)};
  return detail::make_entry("C4", std::move(checks));
}

/// Structural checks plus C1..C4 for k = 1..horizon. Never throws on a failed condition.
inline ValidationReport validate_all(const EquilibriumProblem& problem, const SolverConfig& config, int horizon) {
  ValidationReport report;
  const double theta = config.effective_theta();
  const double beta = config.effective_beta();

  {
    std::vector<Check> checks{
        detail::check_le("0 <= theta", 0.0, theta),
        detail::check_lt("theta < 1/2", theta, 0.5),
        detail::check_le("beta <= 0", beta, 0.0),
        detail::check_le("0 <= rho", 0.0, config.rho),
        detail::check_lt("rho < 1", config.rho, 1.0),
        detail::check_lt("0 < epsilon_step", 0.0, config.epsilon_step),
        detail::check_lt("0 < epsilon_stop", 0.0, config.epsilon_stop),
        detail::check_le("1 <= max_iter", 1.0, static_cast<double>(config.max_iter)),
    };
    report.entries.push_back(detail::make_entry("structure", std::move(checks)));
  }
  if (horizon < 1) return report;

  for (auto& e : validate_c1(config, problem.gamma(), problem.eta(), horizon)) report.entries.push_back(std::move(e));
  for (auto& e : validate_c2(config, problem.eta(), horizon)) report.entries.push_back(std::move(e));

  const bool constant = config.rho_k.is_constant() && config.lambda_k.is_constant();
  for (int k : detail::checked_ks(constant, horizon)) {
    const double rk = config.rho_k(k);
    const double lk = config.lambda_k(k);
    if (!(rk > 0.0) || !(lk > 0.0)) {
      for (const char* cond : {"C3", "C4"}) {
        ReportEntry e = detail::make_entry(
            cond, {{"rho_k > 0 and lambda_k > 0", std::min(rk, lk), ">", 0.0, Status::Degenerate}},
            "alpha bounds undefined");
        detail::stamp_k(e, k, constant);
        report.entries.push_back(std::move(e));
      }
      continue;
    }
    const AlphaBounds b = alpha_bounds(rk, lk, problem.eta());
    ReportEntry c3 = validate_c3(theta, beta, b);
    ReportEntry c4 = validate_c4(theta, beta, b);
    std::ostringstream note;
    note.precision(17);
    note << "alpha_max=" << b.alpha_max << " alpha_min=" << b.alpha_min;
    for (ReportEntry* e : {&c3, &c4}) {
      e->message = e->message.empty() ? note.str() : e->message + "; " + note.str();
      e->bounds = b;
      detail::stamp_k(*e, k, constant);
      report.entries.push_back(std::move(*e));
    }
  }
  return report;
}

}  // namespace eqprox

#endif  // EQPROX_PARAMS_HPP
