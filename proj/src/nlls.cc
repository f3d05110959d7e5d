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

#include "infdual/nlls.h"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "infdual/numkit.h"

namespace infdual {
namespace {

// Damping beyond this multiple of the initial scale means no step direction
// reduces the objective any more.
constexpr double kMaxDampingRatio = 1e16;

// Weighted residual restricted to the rows with positive weight.
struct ActiveRows {
  std::vector<int> index;
  Vector sqrt_w;

  explicit ActiveRows(const Vector& w) {
    for (int i = 0; i < w.size(); ++i) {
      if (w(i) > 0.0) index.push_back(i);
    }
    sqrt_w.resize(static_cast<int>(index.size()));
    for (int k = 0; k < static_cast<int>(index.size()); ++k) {
      sqrt_w(k) = std::sqrt(w(index[k]));
    }
  }

  Vector residual(const Vector& r) const {
    Vector out(sqrt_w.size());
    for (int k = 0; k < out.size(); ++k) out(k) = sqrt_w(k) * r(index[k]);
    return out;
  }

  DenseMatrix jacobian(const DenseMatrix& jac) const {
    DenseMatrix out(sqrt_w.size(), jac.cols());
    for (int k = 0; k < out.rows(); ++k) {
      out.row(k) = sqrt_w(k) * jac.row(index[k]);
    }
    return out;
  }
};

}  // namespace

void NllsOptions::validate() const {
  if (max_iters < 1 || !(grad_tol > 0) || !(step_tol > 0) ||
      !(initial_damping > 0)) {
    throw InvalidInput("NllsOptions: iterations and tolerances must be > 0");
  }
  if (!(damping_up > 1.0) || !(damping_down > 0.0 && damping_down < 1.0)) {
    throw InvalidInput("NllsOptions: need damping_up > 1 > damping_down > 0");
  }
}

std::string_view to_string(NllsStatus status) {
  switch (status) {
    case NllsStatus::kConverged:
      return "converged";
    case NllsStatus::kMaxIters:
      return "max-iters";
    case NllsStatus::kStalled:
      return "stalled";
  }
  return "unknown";
}

Vector gauss_newton_step(const DenseMatrix& jac, const Vector& r,
                         double damping) {
  if (jac.rows() != r.size()) {
    throw InvalidInput(fmt::format(
        "gauss_newton_step: jacobian has {} rows, residual has {}",
        jac.rows(), r.size()));
  }
  if (!(damping >= 0.0)) {
    throw InvalidInput("gauss_newton_step: damping must be >= 0");
  }
  const auto m = jac.rows();
  const auto n = jac.cols();
  DenseMatrix stacked(m + n, n);
  stacked.topRows(m) = jac;
  stacked.bottomRows(n) =
      std::sqrt(damping) * DenseMatrix::Identity(n, n);
  Vector rhs = Vector::Zero(m + n);
  rhs.head(m) = -r;
  return lstsq(stacked, rhs);
}

NllsResult solve_weighted_nlls(const ResidualMap& f, const Vector& weights,
                               const Vector& y0, const NllsOptions& options) {
  options.validate();
  if (weights.size() != f.m()) {
    throw InvalidInput(fmt::format("solve_weighted_nlls: {} weights for {} "
                                   "residuals",
                                   weights.size(), f.m()));
  }
  if ((weights.array() < 0.0).any() || !weights.allFinite()) {
    throw InvalidInput("solve_weighted_nlls: weights must be finite and >= 0");
  }
  if (!y0.allFinite()) {
    throw InvalidInput("solve_weighted_nlls: non-finite start point");
  }

  const ActiveRows rows(weights);
  NllsResult result;
  result.y = y0;
  Vector rw = rows.residual(f.eval(y0));
  result.objective = rw.squaredNorm();
  if (rows.index.empty() || result.objective == 0.0) {
    result.status = NllsStatus::kConverged;
    return result;
  }

  DenseMatrix jw = rows.jacobian(f.jacobian(result.y));
  const double diag_max = jw.colwise().squaredNorm().maxCoeff();
  const double scale = diag_max > 0.0 ? diag_max : 1.0;
  double damping = options.initial_damping * scale;

  while (result.iterations < options.max_iters) {
    const Vector grad = jw.transpose() * rw;
    if (grad.norm() <= options.grad_tol * (1.0 + result.objective)) {
      result.status = NllsStatus::kConverged;
      return result;
    }

    const Vector step = gauss_newton_step(jw, rw, damping);
    ++result.iterations;
    if (step.norm() <= options.step_tol * (1.0 + result.y.norm())) {
      result.status = NllsStatus::kConverged;
      return result;
    }

    const Vector trial = result.y + step;
    double trial_objective = std::numeric_limits<double>::infinity();
    Vector trial_rw;
    try {
      trial_rw = rows.residual(f.eval(trial));
      trial_objective = trial_rw.squaredNorm();
    } catch (const EvaluationError&) {
      // Rejected like any step that fails to decrease the objective.
    }

    if (trial_objective < result.objective) {
      result.y = trial;
      result.objective = trial_objective;
      rw = std::move(trial_rw);
      damping *= options.damping_down;
      if (result.objective == 0.0) {
        result.status = NllsStatus::kConverged;
        return result;
      }
      jw = rows.jacobian(f.jacobian(result.y));
    } else {
      damping *= options.damping_up;
      if (damping > kMaxDampingRatio * scale) {
        result.status = NllsStatus::kStalled;
        return result;
      }
    }
  }
  result.status = NllsStatus::kMaxIters;
  return result;
}

}  // namespace infdual
