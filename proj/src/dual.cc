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

#include "infdual/dual.h"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "infdual/numkit.h"

namespace infdual {

void DualOptions::validate(int m) const {
  if (max_outer_iters < 1 || !(stop_tol > 0.0) || stall_window < 1) {
    throw InvalidInput("DualOptions: iteration counts and stop_tol must be > 0");
  }
  if (!(gap_tol >= 0.0)) throw InvalidInput("DualOptions: gap_tol must be >= 0");
  if (lambda0) {
    if (lambda0->size() != m) {
      throw InvalidInput(fmt::format("DualOptions: lambda0 has {} entries, "
                                     "expected {}",
                                     lambda0->size(), m));
    }
    if ((lambda0->array() < 0.0).any() ||
        std::abs(lambda0->sum() - 1.0) > 1e-10) {
      throw InvalidInput("DualOptions: lambda0 is not on the unit simplex");
    }
  }
  inner.validate();
}

std::string_view to_string(StepRule rule) {
  return rule == StepRule::kPolyak ? "polyak" : "diminishing";
}

std::optional<StepRule> parse_step_rule(std::string_view name) {
  if (name == "polyak") return StepRule::kPolyak;
  if (name == "diminishing") return StepRule::kDiminishing;
  return std::nullopt;
}

std::string_view to_string(DualStatus status) {
  switch (status) {
    case DualStatus::kConverged:
      return "converged";
    case DualStatus::kMaxIters:
      return "max-iters";
    case DualStatus::kEvaluationError:
      return "evaluation-error";
  }
  return "unknown";
}

DualResult solve_dual(const ResidualMap& f, const Vector& y0,
                      const DualOptions& options) {
  options.validate(f.m());
  if (!y0.allFinite()) throw InvalidInput("solve_dual: non-finite start point");

  DualResult result;
  result.lambda = options.lambda0.value_or(
      Vector::Constant(f.m(), 1.0 / static_cast<double>(f.m())));
  Vector f_best = f.eval(y0);
  result.y_best = y0;
  result.primal_best = inf_norm(f_best);
  result.dual_best = -std::numeric_limits<double>::infinity();

  Vector y_prev = y0;
  int stalled = 0;
  result.status = DualStatus::kMaxIters;
  for (int k = 0; k < options.max_outer_iters; ++k) {
    if (result.primal_best == 0.0) {
      // Every weighted sum vanishes at y_best, so q = 0 is attained.
      result.dual_best = std::max(result.dual_best, 0.0);
      result.status = DualStatus::kConverged;
      break;
    }

    NllsResult inner;
    Vector fy;
    double q = 0.0;
    int spent = 0;
    try {
      inner = solve_weighted_nlls(f, result.lambda, y_prev, options.inner);
      spent = inner.iterations;
      fy = f.eval(inner.y);
      q = weighted_sq(fy, result.lambda);
      if (y_prev != result.y_best &&
          q > weighted_sq(f_best, result.lambda)) {
        NllsResult retry =
            solve_weighted_nlls(f, result.lambda, result.y_best, options.inner);
        spent += retry.iterations;
        Vector fr = f.eval(retry.y);
        const double qr = weighted_sq(fr, result.lambda);
        if (qr < q) {
          inner = std::move(retry);
          fy = std::move(fr);
          q = qr;
        }
      }
    } catch (const EvaluationError&) {
      result.status = DualStatus::kEvaluationError;
      break;
    }
    result.inner_iterations += spent;
    if (inner.status != NllsStatus::kConverged) {
      result.all_inner_converged = false;
    }

    const double primal = inf_norm(fy);
    const double previous_best = result.primal_best;
    if (primal < result.primal_best) {
      result.primal_best = primal;
      result.y_best = inner.y;
      f_best = fy;
    }
    result.dual_best = std::max(result.dual_best, q);

    const Vector g = fy.array().square().matrix();
    const double g_norm2 = g.squaredNorm();
    double step = 0.0;
    if (g_norm2 > 0.0) {
      const double diminishing =
          1.0 / ((k + 1.0) * std::max(1.0, std::sqrt(g_norm2)));
      step = diminishing;
      if (options.step_rule == StepRule::kPolyak) {
        const double target = result.primal_best * result.primal_best;
        const double polyak = (target - q) / g_norm2;
        if (polyak > 0.0) step = polyak;
      }
      result.lambda = project_simplex(result.lambda + step * g);
    }
    result.trace.push_back(
        {q, primal, result.primal_best, step, inner.status});

    if (std::abs(previous_best - result.primal_best) < options.stop_tol) {
      ++stalled;
    } else {
      stalled = 0;
    }
    const double best2 = result.primal_best * result.primal_best;
    const bool certified =
        options.gap_tol > 0.0 &&
        best2 - result.dual_best <= options.gap_tol * (1.0 + best2);
    if (stalled >= options.stall_window || g_norm2 == 0.0 || certified) {
      result.status = DualStatus::kConverged;
      break;
    }
    y_prev = inner.y;
  }

  if (!std::isfinite(result.dual_best)) result.dual_best = 0.0;
  result.gap =
      result.primal_best * result.primal_best - result.dual_best;
  return result;
}

DualityReport duality_report(const DualResult& result) {
  const double upper = result.primal_best;
  const double upper2 = upper * upper;
  return {std::sqrt(std::max(result.dual_best, 0.0)), upper,
          (upper2 - result.dual_best) / (1.0 + upper2),
          !result.all_inner_converged};
}

}  // namespace infdual
