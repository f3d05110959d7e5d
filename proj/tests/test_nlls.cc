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
#include "infdual/nlls.h"
#include "infdual/separable.h"
#include "oracles.h"

using namespace infdual;

namespace {

double weighted_gradient_norm(const ResidualMap& f, const Vector& w, const Vector& y) {
  const Vector r = f.eval(y);
  return (f.jacobian(y).transpose() * w.cwiseProduct(r)).norm();
}

}  // namespace

TEST_SUITE("nlls") {

TEST_CASE("gauss_newton_step examples") {
  const Vector s = gauss_newton_step(DenseMatrix::Identity(2, 2), Vector{{1.0, 2.0}}, 0.0);
  CHECK(s[0] == doctest::Approx(-1.0));
  CHECK(s[1] == doctest::Approx(-2.0));
  const Vector s1 = gauss_newton_step(DenseMatrix::Identity(1, 1), Vector{{1.0}}, 1.0);
  CHECK(s1[0] == doctest::Approx(-0.5));
}

TEST_CASE("gauss_newton_step solves the damped normal equations") {
  oracle::Rng rng(41);
  for (int k = 0; k < 30; ++k) {
    const int n = rng.integer(1, 5);
    const int m = rng.integer(1, 10);
    const DenseMatrix j = rng.mat(m, n);
    const Vector r = rng.vec(m);
    const double mu = rng.uniform(1e-3, 2.0);
    const DenseMatrix lhs = j.transpose() * j + mu * DenseMatrix::Identity(n, n);
    const Vector want = lhs.ldlt().solve(-j.transpose() * r);
    CHECK((gauss_newton_step(j, r, mu) - want).norm() < 1e-10 * (1.0 + want.norm()));
  }
}

TEST_CASE("affine residual converges to its root in a few steps") {
  const Vector c{{1.0, -2.0, 3.0}};
  const ResidualMap f(3, 3, [c](const Vector& y) { Vector r = y - c; return r; },
                      [](const Vector&) { DenseMatrix i = DenseMatrix::Identity(3, 3); return i; });
  for (double start : {0.0, 10.0, 1e4}) {
    const NllsResult r = solve_weighted_nlls(f, Vector::Ones(3), Vector::Constant(3, start));
    CHECK(r.status == NllsStatus::kConverged);
    CHECK(r.iterations <= 4);
    CHECK(r.objective <= 1e-18);
    CHECK((r.y - c).norm() < 1e-8);
  }
}

TEST_CASE("Rosenbrock residuals vanish at (1, 1)") {
  const ResidualMap f(2, 2, [](const Vector& y) {
    return Vector{{10.0 * (y[1] - y[0] * y[0]), 1.0 - y[0]}};
  });
  const NllsResult r = solve_weighted_nlls(f, Vector::Ones(2), Vector{{-1.2, 1.0}});
  CHECK(r.status == NllsStatus::kConverged);
  CHECK(r.objective < 1e-12);
  CHECK(std::abs(r.y[0] - 1.0) < 1e-6);
  CHECK(std::abs(r.y[1] - 1.0) < 1e-6);
}

TEST_CASE("zero weights remove residuals") {
  const ResidualMap f(1, 2, [](const Vector& y) { return Vector{{y[0] - 1.0, y[0] - 5.0}}; });
  const NllsResult r = solve_weighted_nlls(f, Vector{{1.0, 0.0}}, Vector{{0.0}});
  CHECK(std::abs(r.y[0] - 1.0) < 1e-8);
  CHECK(r.objective < 1e-16);
}

TEST_CASE("weighted linear least squares matches the normal equations") {
  oracle::Rng rng(42);
  for (int k = 0; k < 20; ++k) {
    const DenseMatrix a = rng.mat(8, 3);
    const Vector b = rng.vec(8);
    const Vector w = rng.vec(8, 0.1, 1.0);
    const ResidualMap f(3, 8, [a, b](const Vector& y) { Vector r = a * y - b; return r; });
    const NllsResult r = solve_weighted_nlls(f, w, Vector::Zero(3));
    const Vector sw = w.cwiseSqrt();
    const Vector want = oracle::normal_equations(sw.asDiagonal() * a, sw.cwiseProduct(b));
    CHECK((r.y - want).norm() < 1e-6);
  }
}

TEST_CASE("converged status implies a small weighted gradient") {
  oracle::Rng rng(43);
  const NllsOptions opts;
  for (int k = 0; k < 20; ++k) {
    const Vector c = rng.vec(4, 0.5, 2.0);
    const ResidualMap f(2, 4, [c](const Vector& y) {
      Vector r(4);
      for (int i = 0; i < 4; ++i) r[i] = std::exp(-y[0] * (i + 1)) * y[1] - c[i] * 0.3;
      return r;
    });
    const Vector w = rng.vec(4, 0.0, 1.0);
    const NllsResult r = solve_weighted_nlls(f, w, Vector{{0.5, 1.0}}, opts);
    const double obj0 = weighted_sq(f.eval(Vector{{0.5, 1.0}}), w);
    CHECK(r.objective <= obj0);
    if (r.status == NllsStatus::kConverged) {
      CHECK(weighted_gradient_norm(f, w, r.y) <= 1e-6 * (1.0 + r.objective));
    }
  }
}

TEST_CASE("zero-residual models from a nearby start") {
  for (ModelId id : all_models()) {
    const ModelSpec& spec = model_spec(id);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const Instance inst = generate_instance(spec, 100, seed);
      const ResidualMap f = joint_map(make_problem(inst));
      Vector start(spec.n1 + spec.n2);
      start << inst.true_linear, inst.true_nonlinear;
      oracle::Rng rng(seed);
      start += 1e-3 * rng.vec(static_cast<int>(start.size()));
      const NllsResult r = solve_weighted_nlls(f, Vector::Ones(100), start);
      CAPTURE(to_string(id));
      CHECK(r.objective <= 1e-10);
    }
  }
}

TEST_CASE("errors and options") {
  const ResidualMap bad(1, 1, [](const Vector&) { return Vector{{std::nan("")}}; });
  CHECK_THROWS_AS(solve_weighted_nlls(bad, Vector::Ones(1), Vector::Zero(1)), EvaluationError);
  const ResidualMap f(1, 1, [](const Vector& y) { return Vector(y); });
  CHECK_THROWS_AS(solve_weighted_nlls(f, Vector{{-1.0}}, Vector::Zero(1)), InvalidInput);
  NllsOptions o;
  o.damping_up = 0.5;
  CHECK_THROWS_AS(o.validate(), InvalidInput);
  CHECK(to_string(NllsStatus::kStalled) == "stalled");
}

}  // TEST_SUITE
