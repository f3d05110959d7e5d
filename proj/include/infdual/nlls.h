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

// Levenberg-Marquardt for weighted nonlinear least squares,
//   min_y sum_i w_i F_i(y)^2,  w_i >= 0.

#ifndef INFDUAL_NLLS_H_
#define INFDUAL_NLLS_H_

#include <string_view>

#include "infdual/core.h"

namespace infdual {

struct NllsOptions {
  int max_iters = 200;
  double grad_tol = 1e-8;
  double step_tol = 1e-10;
  // Relative to the largest diagonal entry of J^T W J at the start point.
  double initial_damping = 1e-3;
  double damping_up = 2.0;
  double damping_down = 1.0 / 3.0;

  void validate() const;
};

enum class NllsStatus { kConverged, kMaxIters, kStalled };

std::string_view to_string(NllsStatus status);

struct NllsResult {
  Vector y;
  double objective = 0.0;  // sum_i w_i F_i(y)^2 at y
  int iterations = 0;      // step attempts, accepted or not
  NllsStatus status = NllsStatus::kMaxIters;
};

// Minimizer s of || [J; sqrt(damping) I] s + [r; 0] ||_2, i.e. the solution
// of (J^T J + damping I) s = -J^T r computed without forming J^T J.
Vector gauss_newton_step(const DenseMatrix& jac, const Vector& r,
                         double damping);

// Rows with zero weight are dropped before every factorization. Uses the
// map's analytic Jacobian when present, central differences otherwise.
//
// Throws EvaluationError if F is non-finite at y0. Non-finite trial points
// are treated as rejected steps.
NllsResult solve_weighted_nlls(const ResidualMap& f, const Vector& weights,
                               const Vector& y0,
                               const NllsOptions& options = {});

}  // namespace infdual

#endif  // INFDUAL_NLLS_H_
