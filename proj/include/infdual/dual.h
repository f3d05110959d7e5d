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

// Lagrangian dual of min_y ||F(y)||_inf.
//
// Squaring the objective and the constraints gives the equivalent problem
//
//   min t  s.t.  t >= F_i(y)^2,  i = 1..m,
//
// whose Lagrangian dual is
//
//   max_{lambda in simplex} q(lambda),  q(lambda) = min_y sum_i lambda_i F_i(y)^2.
//
// For fixed lambda the inner problem is a weighted nonlinear least-squares
// problem, solved here with Levenberg-Marquardt. The outer problem is solved
// by projected supergradient ascent: with y(lambda) the inner minimizer, the
// vector g_i = F_i(y(lambda))^2 is a supergradient of q at lambda. Every
// inner solution is also a primal candidate, and the best inf-norm seen is
// kept as the primal answer.
//
// Any q(lambda) is at most the squared primal optimum (weak duality); the two
// coincide when every F_i is affine, or convex and nonnegative, or concave
// and nonpositive. When the inner solve is only local, q values are upper
// estimates of the true dual function and the reported lower bound is
// heuristic.

#ifndef INFDUAL_DUAL_H_
#define INFDUAL_DUAL_H_

#include <optional>
#include <string_view>
#include <vector>

#include "infdual/core.h"
#include "infdual/nlls.h"

namespace infdual {

enum class StepRule {
  kDiminishing,  // s_k = 1 / ((k + 1) max(1, ||g_k||))
  kPolyak,       // s_k = (primal_best^2 - q_k) / ||g_k||^2, diminishing if <= 0
};

struct DualOptions {
  int max_outer_iters = 200;
  // Stop once the best primal value changes by less than stop_tol for
  // stall_window consecutive iterations.
  double stop_tol = 1e-4;
  int stall_window = 30;
  // When positive, also stop once primal_best^2 - dual_best is at most
  // gap_tol * (1 + primal_best^2). Off by default.
  double gap_tol = 0.0;
  StepRule step_rule = StepRule::kPolyak;
  std::optional<Vector> lambda0;  // uniform 1/m when empty
  NllsOptions inner;

  void validate(int m) const;
};

struct DualIterate {
  double dual_value;    // q_k = sum_i lambda_k,i F_i(y_k)^2
  double primal_value;  // ||F(y_k)||_inf
  double primal_best;   // running minimum after iteration k
  double step;
  NllsStatus inner_status;
};

enum class DualStatus { kConverged, kMaxIters, kEvaluationError };

std::string_view to_string(DualStatus status);
std::string_view to_string(StepRule rule);
std::optional<StepRule> parse_step_rule(std::string_view name);

struct DualResult {
  Vector lambda;
  Vector y_best;
  double primal_best = 0.0;  // ||F(y_best)||_inf
  double dual_best = 0.0;    // max_k q_k, squared scale
  double gap = 0.0;          // primal_best^2 - dual_best
  std::vector<DualIterate> trace;
  DualStatus status = DualStatus::kMaxIters;
  bool all_inner_converged = true;
  int inner_iterations = 0;
};

// Projected supergradient ascent on the dual with primal recovery.
//
// Iteration k solves the inner problem warm-started from y_{k-1}. If that
// local solve lands above sum_i lambda_i F_i(y_best)^2 (possible when the
// warm start sits in a worse basin than y_best), the inner problem is solved
// again from y_best and the better of the two is kept, so q_k never exceeds
// primal_best^2.
//
// Throws EvaluationError if F is non-finite at y0. Later evaluation errors
// end the run with kEvaluationError and the partial trace.
DualResult solve_dual(const ResidualMap& f, const Vector& y0,
                      const DualOptions& options = {});

struct DualityReport {
  double lower_bound;   // sqrt(max(dual_best, 0)), inf-norm scale
  double upper_bound;   // primal_best
  double relative_gap;  // (upper^2 - dual_best) / (1 + upper^2)
  bool heuristic;       // some inner solve did not converge
};

DualityReport duality_report(const DualResult& result);

}  // namespace infdual

#endif  // INFDUAL_DUAL_H_
