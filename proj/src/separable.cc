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

#include "infdual/separable.h"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "infdual/numkit.h"

namespace infdual {
namespace {

struct LpStep {
  bool ok;
  Vector x;
};

LpStep chebyshev_at(const SeparableProblem& problem, const Vector& y,
                    const SimplexOptions& options) {
  LpSolution lp = solve_chebyshev(problem.basis(y), problem.rhs(y), options);
  if (lp.status != LpStatus::kOptimal) return {false, Vector()};
  return {true, std::move(lp.x)};
}

}  // namespace

std::string_view to_string(SubproblemMethod method) {
  return method == SubproblemMethod::kDual ? "dual" : "pnorm";
}

std::optional<SubproblemMethod> parse_subproblem_method(std::string_view name) {
  if (name == "dual") return SubproblemMethod::kDual;
  if (name == "pnorm") return SubproblemMethod::kPnorm;
  return std::nullopt;
}

std::string_view to_string(SubproblemSpace space) {
  return space == SubproblemSpace::kJoint ? "joint" : "reduced";
}

std::optional<SubproblemSpace> parse_subproblem_space(std::string_view name) {
  if (name == "joint") return SubproblemSpace::kJoint;
  if (name == "reduced") return SubproblemSpace::kReduced;
  return std::nullopt;
}

std::string_view to_string(AltStatus status) {
  switch (status) {
    case AltStatus::kConverged:
      return "converged";
    case AltStatus::kMaxIters:
      return "max-iters";
    case AltStatus::kLpFailure:
      return "lp-failure";
    case AltStatus::kEvaluationError:
      return "evaluation-error";
  }
  return "unknown";
}

std::optional<AltStatus> parse_alt_status(std::string_view name) {
  for (AltStatus s : {AltStatus::kConverged, AltStatus::kMaxIters,
                      AltStatus::kLpFailure, AltStatus::kEvaluationError}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

void AltOptions::validate() const {
  if (max_outer < 1 || !(stop_tol > 0.0)) {
    throw InvalidInput("AltOptions: max_outer and stop_tol must be > 0");
  }
  if (!(line_search.lo <= 0.0) || !(line_search.hi >= 1.0) ||
      line_search.grid_points < 2 || !(line_search.refine_tol > 0.0)) {
    throw InvalidInput(
        "AltOptions: line search needs lo <= 0, hi >= 1, >= 2 grid points "
        "and refine_tol > 0");
  }
  pnorm.validate();
  dual.inner.validate();
}

ResidualMap reduced_map(const SeparableProblem& problem,
                        const Vector& x_fixed) {
  if (x_fixed.size() != problem.n1()) {
    throw InvalidInput(fmt::format("reduced_map: x has length {}, expected {}",
                                   x_fixed.size(), problem.n1()));
  }
  auto eval = [problem, x_fixed](const Vector& y) {
    return problem.residual(x_fixed, y);
  };
  ResidualMap::JacobianFn jacobian;
  if (problem.has_derivatives()) {
    jacobian = [problem, x_fixed](const Vector& y) {
      return problem.residual_jacobian_y(x_fixed, y);
    };
  }
  return ResidualMap(problem.n2(), problem.m(), std::move(eval),
                     std::move(jacobian));
}

ResidualMap joint_map(const SeparableProblem& problem) {
  const int n1 = problem.n1();
  const int n2 = problem.n2();
  auto eval = [problem, n1, n2](const Vector& v) {
    return problem.residual(v.head(n1), v.tail(n2));
  };
  ResidualMap::JacobianFn jacobian;
  if (problem.has_derivatives()) {
    jacobian = [problem, n1, n2](const Vector& v) {
      DenseMatrix jac(problem.m(), n1 + n2);
      jac.leftCols(n1) = problem.basis(v.tail(n2));
      jac.rightCols(n2) = problem.residual_jacobian_y(v.head(n1), v.tail(n2));
      return jac;
    };
  }
  return ResidualMap(n1 + n2, problem.m(), std::move(eval), std::move(jacobian));
}

namespace {

struct SubproblemOutcome {
  bool ok;
  Vector point;
  int iterations;
};

// General inf-norm solve of `map` from `start` with the configured method.
SubproblemOutcome minimize_inf_norm(const ResidualMap& map, const Vector& start,
                                    const AltOptions& options) {
  if (options.method == SubproblemMethod::kDual) {
    DualResult dual = solve_dual(map, start, options.dual);
    return {dual.status != DualStatus::kEvaluationError,
            std::move(dual.y_best), static_cast<int>(dual.trace.size())};
  }
  PnormResult pnorm = solve_pnorm_sequence(map, start, options.pnorm);
  return {true, std::move(pnorm.y), pnorm.total_iterations};
}

}  // namespace

AltResult solve_separable(const SeparableProblem& problem,
                          const std::optional<Vector>& x0, const Vector& y0,
                          const AltOptions& options) {
  options.validate();
  if (y0.size() != problem.n2() || (x0 && x0->size() != problem.n1())) {
    throw InvalidInput("solve_separable: start point has the wrong dimension");
  }
  if (!y0.allFinite() || (x0 && !x0->allFinite())) {
    throw InvalidInput("solve_separable: non-finite start point");
  }

  AltResult result;
  result.y = y0;
  std::optional<Vector> pending_lp;
  if (x0) {
    result.x = *x0;
  } else {
    LpStep start = chebyshev_at(problem, y0, options.lp);
    if (!start.ok) {
      result.x = Vector::Zero(problem.n1());
      result.objective = result.initial_objective =
          problem.objective(result.x, result.y);
      result.status = AltStatus::kLpFailure;
      return result;
    }
    result.x = start.x;
    pending_lp = std::move(start.x);
  }
  result.objective = problem.objective(result.x, result.y);
  result.initial_objective = result.objective;

  ScalarSearchOptions search;
  search.grid_points = options.line_search.grid_points;
  search.refine_tol = options.line_search.refine_tol;
  search.parallel_grid = true;

  result.status = AltStatus::kMaxIters;
  for (int k = 0; k < options.max_outer; ++k) {
    AltIterate it{};

    // Linear parameters at fixed y.
    Vector x1;
    if (pending_lp) {
      x1 = std::move(*pending_lp);
      pending_lp.reset();
    } else {
      LpStep lp = chebyshev_at(problem, result.y, options.lp);
      if (!lp.ok) {
        result.status = AltStatus::kLpFailure;
        break;
      }
      x1 = std::move(lp.x);
    }

    // Nonlinear parameters.
    Vector y1;
    try {
      it.after_lp = problem.objective(x1, result.y);
      SubproblemOutcome sub;
      if (options.space == SubproblemSpace::kReduced) {
        sub = minimize_inf_norm(reduced_map(problem, x1), result.y, options);
        y1 = sub.point;
      } else {
        Vector start(problem.n1() + problem.n2());
        start << x1, result.y;
        sub = minimize_inf_norm(joint_map(problem), start, options);
        x1 = sub.point.head(problem.n1());
        y1 = sub.point.tail(problem.n2());
      }
      if (!sub.ok) {
        result.status = AltStatus::kEvaluationError;
        break;
      }
      it.sub_iterations = sub.iterations;
      it.after_subproblem = problem.objective(x1, y1);
    } catch (const EvaluationError&) {
      result.status = AltStatus::kEvaluationError;
      break;
    }

    // Joint line search on the segment (x0, y0) -> (x1, y1).
    const Vector dx = x1 - result.x;
    const Vector dy = y1 - result.y;
    auto phi = [&](double beta) {
      try {
        return problem.objective(result.x + beta * dx, result.y + beta * dy);
      } catch (const EvaluationError&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    const ScalarMin best = min_scalar(phi, options.line_search.lo,
                                      options.line_search.hi, search);
    result.x += best.beta * dx;
    result.y += best.beta * dy;
    const double previous = result.objective;
    result.objective = problem.objective(result.x, result.y);

    it.objective = result.objective;
    it.beta = best.beta;
    result.trace.push_back(it);
    result.sub_iterations += it.sub_iterations;
    result.outer_iterations = k + 1;
    if (options.on_iteration) options.on_iteration(k, it);

    if (std::abs(previous - result.objective) < options.stop_tol) {
      result.status = AltStatus::kConverged;
      break;
    }
  }
  return result;
}

}  // namespace infdual
