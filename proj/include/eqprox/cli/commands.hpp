#ifndef EQPROX_CLI_COMMANDS_HPP
#define EQPROX_CLI_COMMANDS_HPP

// validate | run | sweep | compare | oracle. Every command returns its exit code:
//   0 ok, 2 bad input or I/O, 3 parameters not certified,
//   4 iteration budget exhausted, 5 inner prox failure.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "eqprox/bench.hpp"
#include "eqprox/cli/format.hpp"
#include "eqprox/cli/run_spec.hpp"
#include "eqprox/errors.hpp"
#include "eqprox/params.hpp"
#include "eqprox/prox.hpp"
#include "eqprox/solver.hpp"

namespace eqprox::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int bad_input = 2;
inline constexpr int not_certified = 3;
inline constexpr int max_iterations = 4;
inline constexpr int prox_failure = 5;
}  // namespace exit_code

inline int exit_code_for(StopReason r) {
  switch (r) {
    case StopReason::ResidualBelowTolerance: return exit_code::ok;
    case StopReason::MaxIterations: return exit_code::max_iterations;
    case StopReason::ProxFailure: return exit_code::prox_failure;
  }
  return exit_code::prox_failure;
}

struct RunFlags {
  bool force = false;
  bool json = false;
  std::optional<std::string> trace;
};

struct SweepFlags {
  std::optional<std::string> out;
  int jobs = 1;
};

struct CompareFlags {
  std::optional<std::string> out;
  bool json = false;
  int jobs = 1;
};

struct OracleFlags {
  std::optional<double> base;
  std::optional<double> lambda;
  double resolution = 1e-3;
  int queries = 0;
  std::optional<std::uint64_t> seed;
  bool json = false;
};

/// --seed if given, else $EQPROX_SEED, else 0.
inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("EQPROX_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end == '\0') return v;
    throw ArgumentError("EQPROX_SEED is not an unsigned integer");
  }
  return 0;
}

namespace detail {

struct Loaded {
  RunSpec spec;
  std::optional<EquilibriumProblem> problem;
};

// Spec and problem, or an error message on `err`.
inline std::optional<Loaded> load(const std::string& path, std::ostream& err) {
  try {
    Loaded l{load_run_spec(path), std::nullopt};
    l.problem = build_problem(l.spec.problem);
    initial_points(l.spec);
    return l;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << path << ": " << e.what() << "\n";
  }
  return std::nullopt;
}

inline std::string with_suffix(const std::string& path, const std::string& tag) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + "." + tag;
  return path.substr(0, dot) + "." + tag + path.substr(dot);
}

// Reference rows: the family's reference solution and, for the p = 2, q = 99
// max-type problem, the previously published results.
inline std::vector<ComparisonRow> reference_rows(const RunSpec& spec, const EquilibriumProblem& problem) {
  std::vector<ComparisonRow> rows;
  if (spec.problem.family == "max_type") {
    const auto ref = reference_minimizer(spec.problem.p, spec.problem.q,
                                         {spec.problem.lo.value_or(0.0), spec.problem.hi.value_or(10000.0)});
    rows.push_back({"oracle_reference", RowKind::Reference, Point::scalar(ref.x_star), std::nullopt, std::nullopt,
                    std::nullopt});
    if (spec.problem.p == 2 && spec.problem.q == 99) {
      for (auto& r : published_max_type_rows()) rows.push_back(std::move(r));
    }
  } else if (problem.known_solution()) {
    rows.push_back({"known_solution", RowKind::Reference, *problem.known_solution(), std::nullopt, std::nullopt,
                    std::nullopt});
  }
  return rows;
}

// Runs one configuration, streaming its trace to `trace_path` when given.
// Returns nullopt (and reports on `err`) when the trace cannot be written.
inline std::optional<RunResult> traced_run(const EquilibriumProblem& problem, const SolverConfig& config,
                                           const RunSpec& spec, const std::optional<std::string>& trace_path,
                                           std::ostream& err) {
  RunOptions options = run_options(spec);
  options.keep_trace = false;
  std::ofstream trace;
  if (trace_path) {
    trace.open(*trace_path, std::ios::binary | std::ios::trunc);
    if (!trace) {
      err << "error: cannot write trace '" << *trace_path << "'\n";
      return std::nullopt;
    }
    trace << trace_header(problem.dim()) << "\n";
    options.on_iteration = [&trace](const IterationRecord& r) { trace << trace_row(r) << "\n"; };
  }
  RunResult r = run(problem, config, initial_points(spec), options);
  if (trace_path) {
    trace.close();
    if (!trace) {
      err << "error: failed writing trace '" << *trace_path << "'\n";
      return std::nullopt;
    }
  }
  return r;
}

inline bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  f.close();
  if (!f) {
    err << "error: cannot write '" << path << "'\n";
    return false;
  }
  return true;
}

}  // namespace detail

inline int cmd_validate(const std::string& spec_path, bool json, std::ostream& out, std::ostream& err) {
  auto loaded = detail::load(spec_path, err);
  if (!loaded) return exit_code::bad_input;
  const ValidationReport report = validate_all(*loaded->problem, loaded->spec.config, loaded->spec.horizon);
  if (json) {
    out << report_json(report).dump(2) << "\n";
  } else {
    print_report(out, report);
  }
  return report.all_ok() ? exit_code::ok : exit_code::not_certified;
}

inline int cmd_run(const std::string& spec_path, const RunFlags& flags, std::ostream& out, std::ostream& err) {
  auto loaded = detail::load(spec_path, err);
  if (!loaded) return exit_code::bad_input;
  const RunSpec& spec = loaded->spec;
  const EquilibriumProblem& problem = *loaded->problem;

  const ValidationReport report = validate_all(problem, spec.config, spec.horizon);
  if (!report.all_ok() && !flags.force) {
    err << "parameters are not certified (use --force to run anyway):\n";
    print_report(err, report);
    return exit_code::not_certified;
  }

  const std::optional<std::string> trace_path = flags.trace ? flags.trace : spec.trace_path;
  try {
    if (!spec.compare_variant) {
      const auto r = detail::traced_run(problem, spec.config, spec, trace_path, err);
      if (!r) return exit_code::bad_input;
      if (flags.json) {
        out << summary_json(*r).dump(2) << "\n";
      } else {
        print_summary(out, *r);
      }
      return exit_code_for(r->stop_reason);
    }

    std::vector<ComparisonRow> rows;
    int code = exit_code::ok;
    for (Variant v : {Variant::OneStepInertial, Variant::TwoStepInertial}) {
      SolverConfig c = spec.config;
      c.variant = v;
      const std::string name = to_string(v);
      const auto r = detail::traced_run(problem, c, spec,
                                        trace_path ? std::optional(detail::with_suffix(*trace_path, name)) : std::nullopt,
                                        err);
      if (!r) return exit_code::bad_input;
      rows.push_back({name, RowKind::Method, r->final, r->iterations, r->wall_time, r->stop_reason});
      code = std::max(code, exit_code_for(r->stop_reason));
    }
    for (auto& row : detail::reference_rows(spec, problem)) rows.push_back(std::move(row));
    if (flags.json) {
      out << comparison_json(rows).dump(2) << "\n";
    } else {
      print_comparison(out, rows);
    }
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::bad_input;
  }
}

inline constexpr std::size_t max_sweep_points = 100000;

inline std::string sweep_header(std::size_t dim) {
  std::string h = "theta,beta,rho_k,lambda_k,iterations,stop_reason";
  for (std::size_t i = 0; i < dim; ++i) h += ",final_" + std::to_string(i);
  return h + ",structure,c1,c2,c3,c4";
}

inline int cmd_sweep(const std::string& spec_path, const SweepFlags& flags, std::ostream& out, std::ostream& err) {
  auto loaded = detail::load(spec_path, err);
  if (!loaded) return exit_code::bad_input;
  const RunSpec& spec = loaded->spec;
  const EquilibriumProblem& problem = *loaded->problem;
  if (!spec.sweep) {
    err << "error: empty grid: the run spec has no [sweep] section\n";
    return exit_code::bad_input;
  }

  auto axis = [](const std::vector<double>& listed, double fallback) {
    return listed.empty() ? std::vector<double>{fallback} : listed;
  };
  const SolverConfig& base = spec.config;
  if (!base.rho_k.constant_value() || !base.lambda_k.constant_value()) {
    err << "error: sweep needs constant rho_k and lambda_k\n";
    return exit_code::bad_input;
  }
  const auto& g = *spec.sweep;
  if (g.theta.empty() && g.beta.empty() && g.rho_k.empty() && g.lambda_k.empty()) {
    err << "error: empty grid\n";
    return exit_code::bad_input;
  }
  const auto thetas = axis(g.theta, base.theta);
  const auto betas = axis(g.beta, base.beta);
  const auto rhos = axis(g.rho_k, *base.rho_k.constant_value());
  const auto lambdas = axis(g.lambda_k, *base.lambda_k.constant_value());
  const double cardinality = static_cast<double>(thetas.size()) * static_cast<double>(betas.size()) *
                             static_cast<double>(rhos.size()) * static_cast<double>(lambdas.size());
  if (cardinality > static_cast<double>(max_sweep_points)) {
    err << "error: grid has " << fmt(cardinality) << " points; the limit is " << max_sweep_points << "\n";
    return exit_code::bad_input;
  }
  const std::size_t n = static_cast<std::size_t>(cardinality);

  SolverConfig templ = base;
  if (spec.compare_variant) templ.variant = Variant::TwoStepInertial;
  const RunOptions options = [&] {
    RunOptions o = run_options(spec);
    o.keep_trace = false;
    return o;
  }();
  const InitialPoints init = initial_points(spec);

  // Index i enumerates (theta, beta, rho_k, lambda_k) with lambda_k varying fastest.
  auto row = [&](std::size_t i) {
    std::size_t r = i;
    const double lk = lambdas[r % lambdas.size()];
    r /= lambdas.size();
    const double rk = rhos[r % rhos.size()];
    r /= rhos.size();
    const double beta = betas[r % betas.size()];
    r /= betas.size();
    const double theta = thetas[r];

    SolverConfig c = templ;
    c.theta = theta;
    c.beta = beta;
    c.rho_k = Schedule::constant(rk);
    c.lambda_k = Schedule::constant(lk);
    std::string s = fmt(theta) + "," + fmt(beta) + "," + fmt(rk) + "," + fmt(lk) + ",";
    try {
      const RunResult res = run(problem, c, init, options);
      s += std::to_string(res.iterations) + "," + to_string(res.stop_reason) + "," + fmt_point(res.final);
    } catch (const std::exception&) {
      s += ",invalid_parameters";
      for (std::size_t d = 0; d < problem.dim(); ++d) s += ",";
    }
    std::string flags_part;
    try {
      const ValidationReport rep = validate_all(problem, c, spec.horizon);
      for (const char* cond : {"structure", "C1", "C2", "C3", "C4"}) {
        const auto st = rep.status_of(cond);
        flags_part += std::string(",") + (st ? to_string(*st) : "");
      }
    } catch (const std::exception&) {
      flags_part = ",DEGENERATE,,,,";
    }
    return s + flags_part;
  };

  std::vector<std::string> rows(n);
  const int jobs = std::max(1, std::min<int>(flags.jobs, static_cast<int>(n)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) rows[i] = row(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) rows[i] = row(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::string csv = sweep_header(problem.dim()) + "\n";
  for (const auto& r : rows) csv += r + "\n";
  if (flags.out) return detail::write_file(*flags.out, csv, err) ? exit_code::ok : exit_code::bad_input;
  out << csv;
  return exit_code::ok;
}

inline int cmd_compare(const std::string& spec_path, const CompareFlags& flags, std::ostream& out,
                       std::ostream& err) {
  auto loaded = detail::load(spec_path, err);
  if (!loaded) return exit_code::bad_input;
  const RunSpec& spec = loaded->spec;
  if (spec.methods.size() < 2) {
    err << "error: compare needs at least two [method.NAME] sections, found " << spec.methods.size() << "\n";
    return exit_code::bad_input;
  }
  std::vector<ComparisonRow> rows;
  try {
    rows = compare_methods(*loaded->problem, spec.methods, initial_points(spec), run_options(spec), flags.jobs);
    for (auto& r : detail::reference_rows(spec, *loaded->problem)) rows.push_back(std::move(r));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::bad_input;
  }
  if (flags.json) {
    out << comparison_json(rows).dump(2) << "\n";
  } else {
    print_comparison(out, rows);
  }
  if (flags.out) return detail::write_file(*flags.out, comparison_csv(rows), err) ? exit_code::ok : exit_code::bad_input;
  if (!flags.json) out << "\n" << comparison_csv(rows);
  return exit_code::ok;
}

inline int cmd_oracle(const std::string& spec_path, const OracleFlags& flags, std::ostream& out, std::ostream& err) {
  auto loaded = detail::load(spec_path, err);
  if (!loaded) return exit_code::bad_input;
  const RunSpec& spec = loaded->spec;
  const EquilibriumProblem& problem = *loaded->problem;
  if (flags.base.has_value() != flags.lambda.has_value()) {
    err << "error: --base and --lambda go together\n";
    return exit_code::bad_input;
  }
  const ProxMethod fast = problem.closed_form() ? ProxMethod::ClosedForm : ProxMethod::GridRefine;

  try {
    nlohmann::json j;
    if (spec.problem.family == "max_type") {
      const auto ref = reference_minimizer(spec.problem.p, spec.problem.q,
                                           {spec.problem.lo.value_or(0.0), spec.problem.hi.value_or(10000.0)});
      j["reference_minimizer"] = {{"x", ref.x_star}, {"g", ref.g_star}};
      if (!flags.json) out << "reference_minimizer: x=" << fmt(ref.x_star) << " g=" << fmt(ref.g_star) << "\n";
    } else if (problem.known_solution()) {
      j["known_solution"] = point_json(*problem.known_solution());
      if (!flags.json) out << "known_solution: " << fmt_point(*problem.known_solution(), " ") << "\n";
    }

    auto query = [&](double w, double lambda) {
      const ProxQuery q(problem, Point::scalar(w), lambda);
      const ProxResult bf = brute_force_prox_oracle(q, flags.resolution);
      const ProxResult fr = prox_step(q, fast, spec.problem.grid);
      return nlohmann::json{{"base", w},
                            {"lambda", lambda},
                            {"oracle_x", bf.minimizer.value()},
                            {"oracle_h", bf.objective},
                            {"fast_x", fr.minimizer.value()},
                            {"fast_h", fr.objective},
                            {"h_gap", bf.objective - fr.objective}};
    };
    auto print_query = [&](const nlohmann::json& q) {
      auto v = [&](const char* key) { return fmt(q.at(key).get<double>()); };
      out << "prox w=" << v("base") << " lambda=" << v("lambda") << ": oracle x=" << v("oracle_x")
          << " h=" << v("oracle_h") << "; " << to_string(fast) << " x=" << v("fast_x") << " h=" << v("fast_h")
          << "; gap=" << v("h_gap") << "\n";
    };

    if (flags.base) {
      j["query"] = query(*flags.base, *flags.lambda);
      if (!flags.json) print_query(j["query"]);
    }
    if (flags.queries > 0) {
      const auto* iv = as_interval(problem.set());
      if (iv == nullptr || !iv->bounded()) throw UnsupportedMethodError("oracle queries need a bounded Interval");
      const std::uint64_t seed = resolve_seed(flags.seed);
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> wdist(iv->lo(), iv->hi());
      std::uniform_real_distribution<double> ldist(0.05, 1.0);
      j["seed"] = seed;
      j["queries"] = nlohmann::json::array();
      double worst = 0.0;
      for (int i = 0; i < flags.queries; ++i) {
        const double w = wdist(rng);
        const double lambda = ldist(rng);
        auto qj = query(w, lambda);
        worst = std::max(worst, std::abs(qj["h_gap"].get<double>()));
        if (!flags.json) print_query(qj);
        j["queries"].push_back(std::move(qj));
      }
      j["max_abs_h_gap"] = worst;
      if (!flags.json) out << "seed: " << seed << "  max |h gap|: " << fmt(worst) << "\n";
    }
    if (flags.json) out << j.dump(2) << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::bad_input;
  }
  return exit_code::ok;
}

}  // namespace eqprox::cli

#endif  // EQPROX_CLI_COMMANDS_HPP
