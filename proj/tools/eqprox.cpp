// eqprox: validate, run, sweep and compare solver configurations from spec files.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eqprox/cli/commands.hpp"

namespace cli = eqprox::cli;

int main(int argc, char** argv) {
  CLI::App app{"Relaxed inertial proximal point solver for equilibrium problems"};
  app.require_subcommand(1);
  int code = 0;

  std::string spec;
  auto add_spec = [&spec](CLI::App* sub) { sub->add_option("spec", spec, "run specification file")->required(); };

  auto* validate = app.add_subcommand("validate", "check the parameter conditions of a spec");
  add_spec(validate);
  bool validate_json = false;
  validate->add_flag("--json", validate_json, "print the report as JSON");
  validate->callback([&] { code = cli::cmd_validate(spec, validate_json, std::cout, std::cerr); });

  auto* run = app.add_subcommand("run", "solve the problem of a spec");
  add_spec(run);
  cli::RunFlags run_flags;
  std::string run_trace;
  run->add_flag("--force", run_flags.force, "run even when the parameters are not certified");
  run->add_flag("--json", run_flags.json, "print the summary as JSON");
  run->add_option("--trace", run_trace, "write the iteration trace CSV here");
  run->callback([&] {
    if (!run_trace.empty()) run_flags.trace = run_trace;
    code = cli::cmd_run(spec, run_flags, std::cout, std::cerr);
  });

  auto* sweep = app.add_subcommand("sweep", "run every point of the spec's [sweep] grid");
  add_spec(sweep);
  cli::SweepFlags sweep_flags;
  std::string sweep_out;
  sweep->add_option("--out", sweep_out, "write the CSV here instead of stdout");
  sweep->add_option("--jobs", sweep_flags.jobs, "concurrent runs")->check(CLI::Range(1, 256));
  sweep->callback([&] {
    if (!sweep_out.empty()) sweep_flags.out = sweep_out;
    code = cli::cmd_sweep(spec, sweep_flags, std::cout, std::cerr);
  });

  auto* compare = app.add_subcommand("compare", "run the spec's [method.NAME] configurations side by side");
  add_spec(compare);
  cli::CompareFlags compare_flags;
  std::string compare_out;
  compare->add_flag("--json", compare_flags.json, "print the table as JSON");
  compare->add_option("--out", compare_out, "write the table CSV here");
  compare->add_option("--jobs", compare_flags.jobs, "concurrent runs")->check(CLI::Range(1, 256));
  compare->callback([&] {
    if (!compare_out.empty()) compare_flags.out = compare_out;
    code = cli::cmd_compare(spec, compare_flags, std::cout, std::cerr);
  });

  auto* oracle = app.add_subcommand("oracle", "brute-force prox and reference minimizer checks");
  add_spec(oracle);
  cli::OracleFlags oracle_flags;
  double base = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  auto* base_opt = oracle->add_option("--base", base, "prox base point w");
  auto* lambda_opt = oracle->add_option("--lambda", lambda, "prox parameter")->check(CLI::PositiveNumber);
  oracle->add_option("--resolution", oracle_flags.resolution, "brute-force grid spacing")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--queries", oracle_flags.queries, "number of random (w, lambda) queries")
      ->check(CLI::NonNegativeNumber);
  auto* seed_opt = oracle->add_option("--seed", seed, "query seed (default $EQPROX_SEED, else 0)");
  oracle->add_flag("--json", oracle_flags.json, "print results as JSON");
  oracle->callback([&] {
    if (base_opt->count()) oracle_flags.base = base;
    if (lambda_opt->count()) oracle_flags.lambda = lambda;
    if (seed_opt->count()) oracle_flags.seed = seed;
    code = cli::cmd_oracle(spec, oracle_flags, std::cout, std::cerr);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::exit_code::bad_input;
  }
  return code;
}
