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

#include <doctest.h>

#include <cmath>

#include "infdual/bench.h"
#include "infdual/dual.h"
#include "infdual/lp.h"
#include "oracles.h"

using namespace infdual;

namespace {

ResidualMap affine_map(const DenseMatrix& a, const Vector& b) {
  return ResidualMap(static_cast<int>(a.cols()), static_cast<int>(a.rows()),
                     [a, b](const Vector& y) { Vector r = a * y - b; return r; },
                     [a](const Vector&) { return a; });
}

void check_trace_invariants(const DualResult& r) {
  double prev_best = HUGE_VAL;
  for (const DualIterate& it : r.trace) {
    CHECK(it.primal_best <= prev_best);
    prev_best = it.primal_best;
    if (it.inner_status == NllsStatus::kConverged) {
      CHECK(it.dual_value <= r.primal_best * r.primal_best + 1e-8);
    }
  }
  CHECK(std::abs(r.lambda.sum() - 1.0) <= 1e-10);
  CHECK(r.lambda.minCoeff() >= 0.0);
}

}  // namespace

TEST_SUITE("dual") {

TEST_CASE("single residual") {
  const ResidualMap f(1, 1, [](const Vector& y) { return Vector(y); });
  const DualResult r = solve_dual(f, Vector{{2.0}});
  CHECK(r.lambda[0] == 1.0);
  CHECK(r.primal_best < 1e-6);
  CHECK(r.dual_best < 1e-10);
  check_trace_invariants(r);
}

TEST_CASE("two affine residuals y and 1 - y") {
  const ResidualMap f(1, 2, [](const Vector& y) { return Vector{{y[0], 1.0 - y[0]}}; });
  DualOptions opts;
  opts.stop_tol = 1e-9;
  const DualResult r = solve_dual(f, Vector{{0.0}}, opts);
  CHECK(r.primal_best == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(r.dual_best == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(r.lambda[0] == doctest::Approx(0.5).epsilon(1e-2));
  check_trace_invariants(r);
}

TEST_CASE("convex nonnegative residuals and their negation") {
  auto make = [](double sign) {
    return ResidualMap(1, 2, [sign](const Vector& y) {
      return Vector{{sign * y[0] * y[0], sign * (y[0] - 1.0) * (y[0] - 1.0)}};
    });
  };
  const DualResult r = solve_dual(make(1.0), Vector{{0.0}});
  CHECK(std::abs(r.dual_best - 1.0 / 16.0) <= 1e-3);
  CHECK(std::abs(r.primal_best - 0.25) <= 1e-3);
  check_trace_invariants(r);

  const DualResult n = solve_dual(make(-1.0), Vector{{0.0}});
  CHECK(n.dual_best == r.dual_best);
  CHECK(n.primal_best == r.primal_best);
  CHECK(n.lambda == r.lambda);
  CHECK(n.trace.size() == r.trace.size());
}

TEST_CASE("linear maps: dual value approaches the squared LP optimum") {
  oracle::Rng rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    const DenseMatrix a = rng.mat(10, 3);
    const Vector b = rng.vec(10);
    const double z = solve_chebyshev(a, b).objective;
    DualOptions opts;
    opts.max_outer_iters = 5000;
    opts.stall_window = 5000;
    opts.gap_tol = 1e-4;
    const DualResult r = solve_dual(affine_map(a, b), Vector::Zero(3), opts);
    check_trace_invariants(r);
    CHECK(r.dual_best <= z * z + 1e-8);
    if (r.status == DualStatus::kConverged) {
      CHECK(duality_report(r).relative_gap <= 1e-4);
    }
    CHECK(std::abs(r.dual_best - z * z) <= 1e-3 * (1.0 + z * z));

    // The default stall rule ends early but never breaks weak duality.
    const DualResult quick = solve_dual(affine_map(a, b), Vector::Zero(3));
    CHECK(quick.dual_best <= z * z + 1e-8);
    CHECK(quick.primal_best >= z - 1e-12);
  }
}

TEST_CASE("weak duality on a nonlinear model") {
  const Instance inst = generate_instance(model_spec(ModelId::kExp3), 100, 4);
  const SeparableProblem p = make_problem(inst);
  const ResidualMap f = reduced_map(p, inst.true_linear + Vector::Constant(3, 0.1));
  const DualResult r = solve_dual(f, inst.true_nonlinear);
  check_trace_invariants(r);
}

TEST_CASE("duality_report") {
  DualResult r;
  r.dual_best = 0.25;
  r.primal_best = 0.5;
  DualityReport d = duality_report(r);
  CHECK(d.lower_bound == 0.5);
  CHECK(d.upper_bound == 0.5);
  CHECK(d.relative_gap == 0.0);
  CHECK_FALSE(d.heuristic);
  r.dual_best = 0.0;
  r.primal_best = 1.0;
  r.all_inner_converged = false;
  d = duality_report(r);
  CHECK(d.lower_bound == 0.0);
  CHECK(d.upper_bound == 1.0);
  CHECK(d.relative_gap == 0.5);
  CHECK(d.heuristic);
}

TEST_CASE("step rules and options") {
  const ResidualMap f(1, 2, [](const Vector& y) { return Vector{{y[0], 1.0 - y[0]}}; });
  DualOptions opts;
  opts.step_rule = StepRule::kDiminishing;
  const DualResult r = solve_dual(f, Vector{{3.0}}, opts);
  check_trace_invariants(r);
  CHECK(r.primal_best <= 0.5 + 1e-2);

  opts.lambda0 = Vector{{0.7, 0.2}};
  CHECK_THROWS_AS(solve_dual(f, Vector{{0.0}}, opts), InvalidInput);
  opts.lambda0 = Vector{{0.7, 0.3, 0.0}};
  CHECK_THROWS_AS(solve_dual(f, Vector{{0.0}}, opts), InvalidInput);
  CHECK(parse_step_rule("polyak") == StepRule::kPolyak);
  CHECK_FALSE(parse_step_rule("fast").has_value());
}

}  // TEST_SUITE
