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

#include "infdual/smoothmin.h"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace infdual {
namespace {

constexpr double kArmijo = 1e-4;
constexpr double kBacktrack = 0.5;
constexpr int kMaxBacktracks = 60;

}  // namespace

std::string_view to_string(BfgsStatus status) {
  switch (status) {
    case BfgsStatus::kConverged:
      return "converged";
    case BfgsStatus::kMaxIters:
      return "max-iters";
    case BfgsStatus::kStalled:
      return "stalled";
  }
  return "unknown";
}

BfgsResult bfgs_min(const ObjectiveFn& f, const GradientFn& grad,
                    const Vector& y0, double tol, int max_iters) {
  if (!(tol > 0.0) || max_iters < 0) {
    throw InvalidInput("bfgs_min: need tol > 0 and max_iters >= 0");
  }
  BfgsResult result;
  result.y = y0;
  result.value = f(y0);
  Vector g = grad(y0);
  if (!std::isfinite(result.value) || !g.allFinite() ||
      g.size() != y0.size()) {
    throw EvaluationError("bfgs_min: non-finite start", y0);
  }

  const auto n = y0.size();
  DenseMatrix h = DenseMatrix::Identity(n, n);
  bool scaled = false;

  while (true) {
    if (g.norm() <= tol * (1.0 + std::abs(result.value))) {
      result.status = BfgsStatus::kConverged;
      return result;
    }
    if (result.iterations >= max_iters) {
      result.status = BfgsStatus::kMaxIters;
      return result;
    }
    ++result.iterations;

    Vector d = -h * g;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      h.setIdentity();
      scaled = false;
      d = -g;
      slope = -g.squaredNorm();
    }
    // Before any curvature information the unit step has no scale.
    double t = scaled ? 1.0 : std::min(1.0, 1.0 / g.norm());

    Vector trial;
    double trial_value = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int k = 0; k <= kMaxBacktracks; ++k) {
      trial = result.y + t * d;
      trial_value = f(trial);
      if (std::isfinite(trial_value) &&
          trial_value <= result.value + kArmijo * t * slope) {
        accepted = true;
        break;
      }
      t *= kBacktrack;
    }
    if (!accepted) {
      result.status = BfgsStatus::kStalled;
      return result;
    }
    Vector g_new = grad(trial);
    if (!g_new.allFinite()) {
      result.status = BfgsStatus::kStalled;
      return result;
    }

    const Vector s = trial - result.y;
    const Vector yv = g_new - g;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      if (!scaled) {
        h = (sy / yv.squaredNorm()) * DenseMatrix::Identity(n, n);
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Vector hy = h * yv;
      // H+ = (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      h += (rho * rho * yv.dot(hy) + rho) * (s * s.transpose()) -
           rho * (hy * s.transpose() + s * hy.transpose());
    }
    result.y = std::move(trial);
    result.value = trial_value;
    g = std::move(g_new);
  }
}

void PnormSchedule::validate() const {
  if (p_sequence.empty()) throw InvalidInput("PnormSchedule: empty sequence");
  for (std::size_t k = 0; k < p_sequence.size(); ++k) {
    if (p_sequence[k] < 1 || (k > 0 && p_sequence[k] <= p_sequence[k - 1])) {
      throw InvalidInput(
          "PnormSchedule: p values must be positive and strictly increasing");
    }
  }
  if (stage_max_iters < 1 || !(stop_tol > 0) || !(grad_tol > 0)) {
    throw InvalidInput("PnormSchedule: caps and tolerances must be > 0");
  }
}

ScaledPnorm pnorm_objective_and_gradient(const ResidualMap& f, const Vector& y,
                                         int p, double scale) {
  if (p < 1 || !(scale > 0.0)) {
    throw InvalidInput("pnorm_objective_and_gradient: need p >= 1, scale > 0");
  }
  const Vector u = f.eval(y) / scale;
  const Eigen::ArrayXd odd = u.array().pow(2 * p - 1);
  const double value = (odd * u.array()).sum();
  const Vector weights = (2.0 * p / scale) * odd.matrix();
  return {value, f.jacobian(y).transpose() * weights};
}

PnormResult solve_pnorm_sequence(const ResidualMap& f, const Vector& y0,
                                 const PnormSchedule& schedule) {
  schedule.validate();
  if (!y0.allFinite()) {
    throw InvalidInput("solve_pnorm_sequence: non-finite start point");
  }
  PnormResult result;
  result.y = y0;
  result.inf_norm = inf_norm(f.eval(y0));

  Vector y = y0;
  double stage_norm = result.inf_norm;
  for (std::size_t k = 0; k < schedule.p_sequence.size(); ++k) {
    const int p = schedule.p_sequence[k];
    if (stage_norm == 0.0) break;
    const double scale = stage_norm;

    auto value = [&](const Vector& v) {
      try {
        const Vector u = f.eval(v) / scale;
        return pnorm_pow_objective(u, p);
      } catch (const EvaluationError&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    auto gradient = [&](const Vector& v) -> Vector {
      try {
        return pnorm_objective_and_gradient(f, v, p, scale).gradient;
      } catch (const EvaluationError&) {
        return Vector::Constant(v.size(),
                                std::numeric_limits<double>::quiet_NaN());
      }
    };

    BfgsResult stage;
    try {
      stage = bfgs_min(value, gradient, y, schedule.grad_tol,
                       schedule.stage_max_iters);
    } catch (const EvaluationError&) {
      result.aborted = true;
      break;
    }
    double norm = 0.0;
    try {
      norm = inf_norm(f.eval(stage.y));
    } catch (const EvaluationError&) {
      result.aborted = true;
      break;
    }
    result.total_iterations += stage.iterations;
    result.trace.push_back({p, norm, stage.iterations, stage.status});
    if (norm < result.inf_norm) {
      result.inf_norm = norm;
      result.y = stage.y;
    }
    y = stage.y;
    const double previous = stage_norm;
    stage_norm = norm;
    if (k > 0 && std::abs(norm - previous) < schedule.stop_tol) break;
  }
  return result;
}

}  // namespace infdual
