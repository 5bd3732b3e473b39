#ifndef EQPROX_CLI_FORMAT_HPP
#define EQPROX_CLI_FORMAT_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eqprox/bench.hpp"
#include "eqprox/params.hpp"
#include "eqprox/solver.hpp"

namespace eqprox::cli {

/// 17 significant digits: round-trips every double.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Shortest text that reads back as the same double.
inline std::string fmt_short(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string fmt_point(const Point& p, const char* sep = ",", std::string (*f)(double) = fmt) {
  std::string s;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) s += sep;
    s += f(p[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Trace CSV

inline std::string trace_header(std::size_t dim) {
  std::string h = "k";
  for (const char* name : {"x", "y", "z"}) {
    for (std::size_t i = 0; i < dim; ++i) h += "," + std::string(name) + "_" + std::to_string(i);
  }
  return h + ",residual,rho_k,lambda_k,fejer_slack_35,fejer_slack_36,gamma_k,gamma_bar_k";
}

/// One row per iteration; x columns hold x_{k+1}.
inline std::string trace_row(const IterationRecord& r) {
  std::string s = std::to_string(r.k);
  for (const Point* p : {&r.x_next, &r.y, &r.z}) s += "," + fmt_point(*p);
  s += "," + fmt(r.residual) + "," + fmt(r.rho_k) + "," + fmt(r.lambda_k);
  if (r.diagnostics) {
    const auto& d = *r.diagnostics;
    s += "," + fmt(d.slack_35()) + "," + fmt(d.slack_36()) + "," + fmt(d.gamma_k) + "," + fmt(d.gamma_bar_k);
  } else {
    s += ",,,,";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Validation report

inline void print_report(std::ostream& out, const ValidationReport& report) {
  for (const auto& e : report.entries) {
    out << e.condition;
    if (e.k_first > 0) {
      out << " k=" << e.k_first;
      if (e.k_last) {
        if (*e.k_last != e.k_first) out << ".." << *e.k_last;
      } else {
        out << "..";
      }
    }
    out << ": " << to_string(e.status) << "\n";
    for (const auto& c : e.checks) {
      out << "    " << c.name << ": " << fmt(c.lhs) << " " << c.relation << " " << fmt(c.rhs) << "  "
          << to_string(c.status) << "\n";
    }
    if (!e.message.empty()) out << "    note: " << e.message << "\n";
  }
  out << "overall: " << (report.all_ok() ? "ok" : "not certified") << "\n";
}

inline nlohmann::json number_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline nlohmann::json report_json(const ValidationReport& report) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : report.entries) {
    nlohmann::json j;
    j["condition"] = e.condition;
    j["k_first"] = e.k_first;
    j["k_last"] = e.k_last ? nlohmann::json(*e.k_last) : nlohmann::json(nullptr);
    j["status"] = to_string(e.status);
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : e.checks) {
      checks.push_back({{"name", c.name},
                        {"lhs", number_json(c.lhs)},
                        {"relation", c.relation},
                        {"rhs", number_json(c.rhs)},
                        {"status", to_string(c.status)}});
    }
    j["checks"] = std::move(checks);
    if (e.bounds) {
      j["alpha_max"] = number_json(e.bounds->alpha_max);
      j["alpha_min"] = number_json(e.bounds->alpha_min);
    }
    if (!e.message.empty()) j["message"] = e.message;
    entries.push_back(std::move(j));
  }
  return {{"entries", std::move(entries)}, {"ok", report.all_ok()}};
}

// ---------------------------------------------------------------------------
// Run summaries and comparison tables

inline void print_summary(std::ostream& out, const RunResult& r) {
  out << "final: " << fmt_point(r.final, " ") << "\n";
  out << "iterations: " << r.iterations << "\n";
  out << "stop_reason: " << to_string(r.stop_reason) << "\n";
  out << "wall_time_s: " << fmt(r.wall_time) << "\n";
  if (!r.failure.empty()) out << "failure: " << r.failure << "\n";
}

inline nlohmann::json point_json(const Point& p) {
  nlohmann::json a = nlohmann::json::array();
  for (double v : p.components()) a.push_back(v);
  return a;
}

inline nlohmann::json summary_json(const RunResult& r) {
  nlohmann::json j{{"final", point_json(r.final)},
                   {"iterations", r.iterations},
                   {"stop_reason", to_string(r.stop_reason)},
                   {"wall_time", r.wall_time}};
  if (!r.failure.empty()) j["failure"] = r.failure;
  return j;
}

inline std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string s = "method,kind,final,iterations,stop_reason,wall_time\n";
  for (const auto& r : rows) {
    s += r.method + "," + to_string(r.kind) + ",";
    if (r.final) s += fmt_point(*r.final, " ", fmt_short);
    s += ",";
    if (r.iterations) s += std::to_string(*r.iterations);
    s += ",";
    if (r.stop_reason) s += to_string(*r.stop_reason);
    s += ",";
    if (r.wall_time) s += fmt_short(*r.wall_time);
    s += "\n";
  }
  return s;
}

inline void print_comparison(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  char line[256];
  std::snprintf(line, sizeof line, "%-22s %-10s %-24s %10s %-26s %s\n", "method", "kind", "final", "iterations",
                "stop_reason", "wall_time_s");
  out << line;
  for (const auto& r : rows) {
    const std::string final = r.final ? fmt_point(*r.final, " ", fmt_short) : "-";
    const std::string iters = r.iterations ? std::to_string(*r.iterations) : "-";
    const std::string stop = r.stop_reason ? to_string(*r.stop_reason) : "-";
    const std::string wall = r.wall_time ? fmt_short(*r.wall_time) : "-";
    std::snprintf(line, sizeof line, "%-22s %-10s %-24s %10s %-26s %s\n", r.method.c_str(), to_string(r.kind),
                  final.c_str(), iters.c_str(), stop.c_str(), wall.c_str());
    out << line;
  }
}

inline nlohmann::json comparison_json(const std::vector<ComparisonRow>& rows) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : rows) {
    a.push_back({{"method", r.method},
                 {"kind", to_string(r.kind)},
                 {"final", r.final ? point_json(*r.final) : nlohmann::json(nullptr)},
                 {"iterations", r.iterations ? nlohmann::json(*r.iterations) : nlohmann::json(nullptr)},
                 {"stop_reason", r.stop_reason ? nlohmann::json(to_string(*r.stop_reason)) : nlohmann::json(nullptr)},
                 {"wall_time", r.wall_time ? nlohmann::json(*r.wall_time) : nlohmann::json(nullptr)}});
  }
  return a;
}

}  // namespace eqprox::cli

#endif  // EQPROX_CLI_FORMAT_HPP
