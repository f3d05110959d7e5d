// Copyright 2026 The infdual Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "infdual/cli.h"

#include <chrono>
#include <cmath>
#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "infdual/bench.h"
#include "infdual/core.h"
#include "infdual/io.h"
#include "infdual/separable.h"

namespace infdual {
namespace {

struct RunConfig {
  std::string model;
  int m = 100;
  std::string method = "dual";
  std::vector<std::string> methods{"dual", "pnorm"};
  std::string space = "joint";
  std::string step_rule = "polyak";
  std::uint64_t seed = 0;
  std::uint64_t seed_base = 100;
  int runs = 10;
  std::string in;
  std::string out;
  bool parallel = false;
  bool verbose = false;
  AltOptions options;
};

// Solver hyperparameters shared by `solve` and `bench`.
void add_solver_flags(CLI::App& cmd, RunConfig& cfg) {
  AltOptions& o = cfg.options;
  cmd.add_option("--tol", o.stop_tol, "Outer stop tolerance on the objective change")
      ->capture_default_str();
  cmd.add_option("--max-iter", o.max_outer, "Maximum outer iterations")
      ->capture_default_str();
  cmd.add_option("--space", cfg.space, "Subproblem space: joint or reduced")
      ->check(CLI::IsMember({"joint", "reduced"}))
      ->capture_default_str();
  cmd.add_option("--ls-lo", o.line_search.lo, "Line-search interval start")
      ->capture_default_str();
  cmd.add_option("--ls-hi", o.line_search.hi, "Line-search interval end")
      ->capture_default_str();
  cmd.add_option("--ls-grid", o.line_search.grid_points, "Line-search grid points")
      ->capture_default_str();
  cmd.add_option("--ls-refine-tol", o.line_search.refine_tol,
                 "Golden-section refinement tolerance")
      ->capture_default_str();
  cmd.add_option("--dual-max-iter", o.dual.max_outer_iters,
                 "Maximum supergradient iterations")
      ->capture_default_str();
  cmd.add_option("--dual-tol", o.dual.stop_tol,
                 "Dual stop tolerance on the best primal value")
      ->capture_default_str();
  cmd.add_option("--dual-window", o.dual.stall_window,
                 "Consecutive small changes before the dual stops")
      ->capture_default_str();
  cmd.add_option("--dual-gap-tol", o.dual.gap_tol,
                 "Stop the dual once the relative duality gap is below this (0: off)")
      ->capture_default_str();
  cmd.add_option("--step-rule", cfg.step_rule, "Dual step rule: polyak or diminishing")
      ->check(CLI::IsMember({"polyak", "diminishing"}))
      ->capture_default_str();
  cmd.add_option("--lm-max-iter", o.dual.inner.max_iters,
                 "Levenberg-Marquardt iteration limit")
      ->capture_default_str();
  cmd.add_option("--lm-grad-tol", o.dual.inner.grad_tol, "LM gradient tolerance")
      ->capture_default_str();
  cmd.add_option("--lm-step-tol", o.dual.inner.step_tol, "LM step tolerance")
      ->capture_default_str();
  cmd.add_option("--lm-damping", o.dual.inner.initial_damping,
                 "LM initial damping, relative to max diag(J^T W J)")
      ->capture_default_str();
  cmd.add_option("--lm-up", o.dual.inner.damping_up, "LM damping increase factor")
      ->capture_default_str();
  cmd.add_option("--lm-down", o.dual.inner.damping_down, "LM damping decrease factor")
      ->capture_default_str();
  cmd.add_option("--p-sequence", o.pnorm.p_sequence, "2p-norm exponents p")
      ->delimiter(',')
      ->capture_default_str();
  cmd.add_option("--pnorm-stage-iters", o.pnorm.stage_max_iters,
                 "BFGS iterations per 2p-norm stage")
      ->capture_default_str();
  cmd.add_option("--pnorm-tol", o.pnorm.stop_tol,
                 "2p-norm stop tolerance between stages")
      ->capture_default_str();
  cmd.add_option("--pnorm-grad-tol", o.pnorm.grad_tol, "BFGS gradient tolerance")
      ->capture_default_str();
  cmd.add_option("--pivot-tol", o.lp.pivot_tol, "Simplex pivot tolerance")
      ->capture_default_str();
  cmd.add_option("--max-pivots", o.lp.max_pivots, "Simplex pivot limit")
      ->capture_default_str();
}

void finalize_options(RunConfig& cfg) {
  cfg.options.space = *parse_subproblem_space(cfg.space);
  cfg.options.dual.step_rule = *parse_step_rule(cfg.step_rule);
  cfg.options.method = *parse_subproblem_method(cfg.method);
  cfg.options.validate();
  cfg.options.dual.validate(1);
  cfg.options.dual.inner.validate();
  cfg.options.pnorm.validate();
}

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
  const ModelSpec& spec = model_spec(*parse_model_id(cfg.model));
  if (cfg.m < spec.n1 + spec.n2 + 1) {
    throw InvalidInput(fmt::format("--m must be at least {} for {}",
                                   spec.n1 + spec.n2 + 1, cfg.model));
  }
  const Instance inst = generate_instance(spec, cfg.m, cfg.seed);
  write_text_file(cfg.out, instance_to_json(inst));
  const double residual = truth_residual(inst);
  const bool verified = residual <= 1e-12;
  fmt::print(out, "wrote {}\n", cfg.out);
  fmt::print(out, "zero optimum {} (residual at truth {:.3g})\n",
             verified ? "verified" : "NOT verified", residual);
  return verified ? kExitOk : kExitSolver;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = instance_from_json(read_text_file(cfg.in));
  const SeparableProblem problem = make_problem(inst);
  const Vector y0 = perturbed_start(inst);

  AltOptions options = cfg.options;
  if (cfg.verbose) {
    options.on_iteration = [&out](int k, const AltIterate& it) {
      fmt::print(out,
                 "iter {:3d}  lp {:.6e}  sub {:.6e}  obj {:.6e}  beta {:.4f}  "
                 "inner {}\n",
                 k, it.after_lp, it.after_subproblem, it.objective, it.beta,
                 it.sub_iterations);
    };
  }
  const auto start = std::chrono::steady_clock::now();
  const AltResult res = solve_separable(problem, std::nullopt, y0, options);
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;

  SolveReport rep;
  rep.model = std::string(to_string(inst.model));
  rep.instance = cfg.in;
  rep.seed = inst.seed;
  rep.options = cfg.options;
  rep.initial_objective = res.initial_objective;
  rep.objective = res.objective;
  rep.outer_iterations = res.outer_iterations;
  rep.sub_iterations = res.sub_iterations;
  rep.seconds = std::round(elapsed.count() * 1000.0) / 1000.0;
  rep.status = std::string(to_string(res.status));
  rep.x = res.x;
  rep.y = res.y;
  rep.trace = res.trace;
  if (!cfg.out.empty()) write_text_file(cfg.out, solve_report_to_json(rep));

  fmt::print(out, "model      {}\n", rep.model);
  fmt::print(out, "method     {} ({})\n", cfg.method, cfg.space);
  fmt::print(out, "objective  {:.6e} (start {:.6e})\n", rep.objective,
             rep.initial_objective);
  fmt::print(out, "iterations {} outer, {} inner\n", rep.outer_iterations,
             rep.sub_iterations);
  fmt::print(out, "seconds    {:.3f}\n", rep.seconds);
  fmt::print(out, "status     {}\n", rep.status);
  return is_success_status(rep.status) ? kExitOk : kExitSolver;
}

void print_table(std::ostream& out, const std::string& model,
                 const BenchConfig& bc, const std::vector<BenchSummary>& summary) {
  fmt::print(out, "{}  m={}  runs={}  seeds {}..{}{}\n", model, bc.m, bc.runs,
             bc.seed_base, bc.seed_base + static_cast<std::uint64_t>(bc.runs) - 1,
             bc.parallel ? "  (parallel runs: timings not comparable)" : "");
  fmt::print(out, "{:<20}", "");
  for (const BenchSummary& s : summary) fmt::print(out, "{:>14}", s.method);
  fmt::print(out, "\n{:<20}", "Average objective");
  for (const BenchSummary& s : summary) fmt::print(out, "{:>14.4g}", s.avg_objective);
  fmt::print(out, "\n{:<20}", "Average seconds");
  for (const BenchSummary& s : summary) fmt::print(out, "{:>14.3f}", s.avg_seconds);
  fmt::print(out, "\n{:<20}", "Average iterations");
  for (const BenchSummary& s : summary) fmt::print(out, "{:>14.1f}", s.avg_iterations);
  fmt::print(out, "\n{:<20}", "Successful runs");
  for (const BenchSummary& s : summary) {
    fmt::print(out, "{:>14}", fmt::format("{}/{}", s.successes, s.successes + s.failures));
  }
  fmt::print(out, "\n");
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  const ModelSpec& spec = model_spec(*parse_model_id(cfg.model));
  BenchConfig bc;
  bc.runs = cfg.runs;
  bc.m = cfg.m;
  bc.seed_base = cfg.seed_base;
  bc.parallel = cfg.parallel;
  bc.options = cfg.options;
  bc.methods.clear();
  for (const std::string& name : cfg.methods) {
    bc.methods.push_back(*parse_subproblem_method(name));
  }
  if (bc.m < spec.n1 + spec.n2 + 1) {
    throw InvalidInput(fmt::format("--m must be at least {} for {}",
                                   spec.n1 + spec.n2 + 1, cfg.model));
  }
  const BenchReport report = run_benchmark(spec, bc);
  if (cfg.verbose) {
    for (const BenchRecord& r : report.records) {
      fmt::print(out, "run {:2d} seed {} {:<6} objective {:.6e} seconds {:.3f} "
                      "iterations {} {}\n",
                 r.run, r.seed, r.method, r.objective, r.seconds, r.iterations,
                 r.status);
    }
  }
  if (!cfg.out.empty()) {
    write_text_file(cfg.out, bench_to_csv(cfg.model, {report.records, report.summary}));
  }
  print_table(out, cfg.model, bc, report.summary);
  for (const BenchSummary& s : report.summary) {
    if (s.successes == 0) return kExitSolver;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app("Minimax fitting via Lagrangian duality", "infdual");
  app.require_subcommand(1);
  RunConfig cfg;
  const auto models = CLI::IsMember({"exp3", "gauss4", "lorentz6"});
  const auto methods = CLI::IsMember({"dual", "pnorm"});

  CLI::App* gen = app.add_subcommand("gen", "Generate a zero-residual instance");
  gen->add_option("--model", cfg.model, "exp3, gauss4 or lorentz6")->required()->check(models);
  gen->add_option("--m", cfg.m, "Number of samples")->capture_default_str();
  gen->add_option("--seed", cfg.seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", cfg.out, "Instance file to write")->required();

  CLI::App* solve = app.add_subcommand("solve", "Solve one instance file");
  solve->add_option("--in", cfg.in, "Instance file")->required();
  solve->add_option("--method", cfg.method, "dual or pnorm")->check(methods)->capture_default_str();
  solve->add_option("--out", cfg.out, "Result file to write");
  solve->add_flag("--verbose", cfg.verbose, "Log every outer iteration");
  add_solver_flags(*solve, cfg);

  CLI::App* bench = app.add_subcommand("bench", "Repeated seeded runs on one model");
  bench->add_option("--model", cfg.model, "exp3, gauss4 or lorentz6")->required()->check(models);
  bench->add_option("--m", cfg.m, "Number of samples")->capture_default_str();
  bench->add_option("--runs", cfg.runs, "Runs per method")->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench->add_option("--methods,--method", cfg.methods, "Comma-separated methods")
      ->delimiter(',')->check(methods)->capture_default_str();
  bench->add_option("--seed-base", cfg.seed_base, "Seed of run 0")->capture_default_str();
  bench->add_option("--out", cfg.out, "CSV file to write");
  bench->add_flag("--parallel", cfg.parallel, "Run seeds concurrently");
  bench->add_flag("--verbose", cfg.verbose, "Print every run");
  add_solver_flags(*bench, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    finalize_options(cfg);
  } catch (const InvalidInput& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(cfg, out);
    if (*solve) return cmd_solve(cfg, out);
    return cmd_bench(cfg, out);
  } catch (const ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitIo;
  } catch (const IoError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitIo;
  } catch (const InvalidInput& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(err, "solver error: {}\n", e.what());
    return kExitSolver;
  }
}

}  // namespace infdual
