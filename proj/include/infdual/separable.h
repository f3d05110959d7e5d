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

// Alternating minimization for separable minimax problems
//
//   min_{x, y} ||A(y) x - b(y)||_inf.
//
// Each outer iteration (1) solves the Chebyshev LP in x at the current y,
// (2) runs a general inf-norm solver (the dual method or the 2p-norm
// sequence) to obtain new nonlinear parameters y1, and (3) line-searches the
// joint segment from (x0, y0) to (x1, y1). The segment's beta = 0 end is
// always on the search grid, so the outer objective never increases.
//
// Step (2) works in one of two spaces:
//   kReduced  the map y -> A(y) x1 - b(y) with x1 held fixed;
//   kJoint    the full map (x, y) -> A(y) x - b(y) started at (x1, y0); its
//             x part replaces x1 as the segment end point.
// With x1 fixed at a Chebyshev solution for y0, the n1 + 1 equioscillating
// residuals usually pin y in place, so kReduced tends to stop at a blockwise
// minimax point after the first iteration. kJoint is the default.

#ifndef INFDUAL_SEPARABLE_H_
#define INFDUAL_SEPARABLE_H_

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "infdual/core.h"
#include "infdual/dual.h"
#include "infdual/lp.h"
#include "infdual/smoothmin.h"

namespace infdual {

enum class SubproblemMethod { kDual, kPnorm };
enum class SubproblemSpace { kJoint, kReduced };

std::string_view to_string(SubproblemMethod method);
std::optional<SubproblemMethod> parse_subproblem_method(std::string_view name);
std::string_view to_string(SubproblemSpace space);
std::optional<SubproblemSpace> parse_subproblem_space(std::string_view name);

// The interval must contain 0 and 1; both are always grid points.
struct LineSearchOptions {
  double lo = 0.0;
  double hi = 1.5;
  int grid_points = 76;
  double refine_tol = 1e-6;
};

struct AltIterate {
  double after_lp;          // objective at (x1, y0) after the LP
  double after_subproblem;  // objective at the segment end point (x1, y1)
  double objective;         // objective after the line search
  double beta;
  int sub_iterations;       // dual outer iterations or BFGS iterations

  bool operator==(const AltIterate&) const = default;
};

struct AltOptions {
  int max_outer = 50;
  double stop_tol = 1e-4;
  SubproblemMethod method = SubproblemMethod::kDual;
  SubproblemSpace space = SubproblemSpace::kJoint;
  LineSearchOptions line_search;
  DualOptions dual;
  PnormSchedule pnorm;
  SimplexOptions lp;
  // Called after every outer iteration with its index.
  std::function<void(int, const AltIterate&)> on_iteration;

  void validate() const;
};

enum class AltStatus { kConverged, kMaxIters, kLpFailure, kEvaluationError };

std::string_view to_string(AltStatus status);
std::optional<AltStatus> parse_alt_status(std::string_view name);

struct AltResult {
  Vector x;
  Vector y;
  double objective = 0.0;  // ||A(y) x - b(y)||_inf
  double initial_objective = 0.0;
  int outer_iterations = 0;
  int sub_iterations = 0;
  std::vector<AltIterate> trace;
  AltStatus status = AltStatus::kMaxIters;
};

// The n2-input, m-output map y -> A(y) x_fixed - b(y). Uses the problem's
// analytic derivatives for the Jacobian when available.
ResidualMap reduced_map(const SeparableProblem& problem, const Vector& x_fixed);

// The (n1 + n2)-input map (x, y) -> A(y) x - b(y), x first.
ResidualMap joint_map(const SeparableProblem& problem);

// Runs the alternating method from (x0, y0). Without x0 the start is the
// Chebyshev LP solution at y0. Stops when the outer objective changes by
// less than stop_tol or after max_outer iterations. LP failures and
// evaluation errors end the run early with the best iterate so far.
AltResult solve_separable(const SeparableProblem& problem,
                          const std::optional<Vector>& x0, const Vector& y0,
                          const AltOptions& options = {});

}  // namespace infdual

#endif  // INFDUAL_SEPARABLE_H_
