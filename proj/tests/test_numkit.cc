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
#include <limits>

#include "infdual/bench.h"
#include "infdual/numkit.h"
#include "oracles.h"

using namespace infdual;

TEST_SUITE("numkit") {

TEST_CASE("lstsq examples") {
  const Vector x = lstsq(DenseMatrix::Identity(2, 2), Vector{{1.0, 2.0}});
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(2.0));
  DenseMatrix ones(2, 1);
  ones << 1.0, 1.0;
  CHECK(lstsq(ones, Vector{{0.0, 2.0}})[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(lstsq(DenseMatrix::Ones(1, 2), Vector{{1.0}}), InvalidInput);
}

TEST_CASE("lstsq matches the normal equations") {
  oracle::Rng rng(31);
  for (int k = 0; k < 50; ++k) {
    const int n = rng.integer(1, 5);
    const int m = rng.integer(n, 12);
    const DenseMatrix a = rng.mat(m, n);
    const Vector b = rng.vec(m);
    const Vector got = lstsq(a, b);
    const Vector want = oracle::normal_equations(a, b);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-8 * (1.0 + want.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("project_simplex examples") {
  CHECK(project_simplex(Vector{{1.0, 0.0, 0.0}}).isApprox(Vector{{1.0, 0.0, 0.0}}));
  CHECK(project_simplex(Vector{{0.5, 0.5}}).isApprox(Vector{{0.5, 0.5}}));
  const Vector p = project_simplex(Vector{{2.0, 0.0}});
  CHECK(p.isApprox(oracle::simplex_active_set(Vector{{2.0, 0.0}})));
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 0.0);
}

TEST_CASE("project_simplex is idempotent and beats random simplex points") {
  oracle::Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = rng.integer(2, 6);
    const Vector v = rng.vec(m, -2.0, 2.0);
    const Vector p = project_simplex(v);
    CHECK((project_simplex(p) - p).cwiseAbs().maxCoeff() <= 1e-12);
    const double d = (p - v).squaredNorm();
    std::exponential_distribution<double> expo(1.0);
    for (int s = 0; s < 10000 / 20; ++s) {
      Vector q(m);
      for (int i = 0; i < m; ++i) q[i] = expo(rng.engine());
      q /= q.sum();
      CHECK((q - v).squaredNorm() >= d - 1e-14);
    }
  }
}

TEST_CASE("min_scalar examples") {
  ScalarSearchOptions opts;
  opts.grid_points = 101;
  const ScalarMin q = min_scalar([](double b) { return (b - 0.3) * (b - 0.3); }, 0.0, 1.0, opts);
  CHECK(std::abs(q.beta - 0.3) < 1e-4);
  const ScalarMin a = min_scalar([](double b) { return std::abs(b - 1.0); }, 0.0, 2.0);
  CHECK(a.beta == 1.0);
  CHECK(a.value == 0.0);
}

TEST_CASE("min_scalar fails only when every grid value is non-finite") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(min_scalar([nan](double) { return nan; }, 0.0, 1.0), SolverFailure);
  const ScalarMin r = min_scalar([nan](double b) { return b < 0.5 ? nan : b; }, 0.0, 1.0);
  CHECK(r.beta >= 0.5);
}

TEST_CASE("min_scalar is no worse than phi(0) or phi(1) on separable segments") {
  const ModelSpec& spec = model_spec(ModelId::kGauss4);
  const Instance inst = generate_instance(spec, 60, 5);
  const SeparableProblem p = make_problem(inst);
  oracle::Rng rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector x0 = inst.true_linear + rng.vec(spec.n1, -0.5, 0.5);
    const Vector y0 = inst.true_nonlinear + rng.vec(spec.n2, -0.3, 0.3);
    const Vector x1 = inst.true_linear + rng.vec(spec.n1, -0.5, 0.5);
    const Vector y1 = inst.true_nonlinear + rng.vec(spec.n2, -0.3, 0.3);
    auto phi = [&](double b) {
      return p.objective(x0 + b * (x1 - x0), y0 + b * (y1 - y0));
    };
    const ScalarMin r = min_scalar(phi, 0.0, 1.5);
    CHECK(r.value <= phi(0.0));
    CHECK(r.value <= phi(1.0));
    CHECK(r.value == phi(r.beta));
  }
}

TEST_CASE("min_scalar matches a dense grid oracle on unimodal functions") {
  oracle::Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const double c = rng.uniform(0.0, 1.5);
    const double w = rng.uniform(0.5, 3.0);
    auto phi = [c, w](double b) { return std::cosh(w * (b - c)); };
    double best = HUGE_VAL;
    for (int k = 0; k <= 150000; ++k) best = std::min(best, phi(1.5 * k / 150000.0));
    CHECK(min_scalar(phi, 0.0, 1.5).value <= best + 1e-9);
  }
}

}  // TEST_SUITE
