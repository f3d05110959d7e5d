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

// Quasi-Newton minimization and the iterative 2p-norm approximation of
// min_y ||F(y)||_inf, the smooth baseline the dual method is compared with.

#ifndef INFDUAL_SMOOTHMIN_H_
#define INFDUAL_SMOOTHMIN_H_

#include <functional>
#include <string_view>
#include <vector>

#include "infdual/core.h"

namespace infdual {

enum class BfgsStatus { kConverged, kMaxIters, kStalled };

std::string_view to_string(BfgsStatus status);

struct BfgsResult {
  Vector y;
  double value = 0.0;
  int iterations = 0;
  BfgsStatus status = BfgsStatus::kMaxIters;
};

using ObjectiveFn = std::function<double(const Vector&)>;
using GradientFn = std::function<Vector(const Vector&)>;

// BFGS on the inverse Hessian with Armijo backtracking (c1 = 1e-4, factor
// 0.5, at most 60 halvings). Stops when ||grad|| <= tol * (1 + |f|).
// Non-finite trial values count as failed Armijo tests. A line search that
// runs out of halvings ends with kStalled and the best point so far.
BfgsResult bfgs_min(const ObjectiveFn& f, const GradientFn& grad,
                    const Vector& y0, double tol, int max_iters);

struct PnormSchedule {
  std::vector<int> p_sequence{1, 2, 3, 4, 6, 8, 12, 16};
  int stage_max_iters = 200;
  double stop_tol = 1e-4;
  double grad_tol = 1e-8;

  void validate() const;
};

struct PnormStage {
  int p = 0;
  double inf_norm = 0.0;  // ||F(y_stage)||_inf
  int iterations = 0;
  BfgsStatus status = BfgsStatus::kMaxIters;
};

struct PnormResult {
  Vector y;
  double inf_norm = 0.0;
  std::vector<PnormStage> trace;
  int total_iterations = 0;
  bool aborted = false;  // a stage produced non-finite values
};

// sum_i (F_i(y)/scale)^(2p) and its gradient (2p/scale) J^T (F/scale)^(2p-1).
struct ScaledPnorm {
  double value;
  Vector gradient;
};
ScaledPnorm pnorm_objective_and_gradient(const ResidualMap& f, const Vector& y,
                                         int p, double scale);

// For each p of the schedule minimizes sum_i F_i(y)^(2p) with bfgs_min, warm
// started from the previous stage. Residuals are divided by the stage-start
// max |F_i| before exponentiation. Stops once two consecutive stages report
// inf-norms closer than stop_tol. Returns the best stage point (the start
// point included).
PnormResult solve_pnorm_sequence(const ResidualMap& f, const Vector& y0,
                                 const PnormSchedule& schedule = {});

}  // namespace infdual

#endif  // INFDUAL_SMOOTHMIN_H_
