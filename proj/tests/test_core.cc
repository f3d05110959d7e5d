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

#include "infdual/core.h"
#include "oracles.h"

using namespace infdual;

TEST_SUITE("core") {

TEST_CASE("inf_norm examples and scan oracle") {
  CHECK(inf_norm(Vector{{-3.0, 2.0}}) == 3.0);
  CHECK(inf_norm(Vector::Zero(3)) == 0.0);
  oracle::Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    const Vector r = rng.vec(7, -10.0, 10.0);
    CHECK(inf_norm(r) == oracle::max_abs_scan(r));
  }
}

TEST_CASE("inf_norm rejects empty and non-finite input") {
  CHECK_THROWS_AS(inf_norm(Vector()), InvalidInput);
  CHECK_THROWS_AS(inf_norm(Vector{{1.0, std::nan("")}}), InvalidInput);
  CHECK_THROWS_AS(inf_norm(Vector{{HUGE_VAL}}), InvalidInput);
}

TEST_CASE("inf_norm is absolutely homogeneous") {
  oracle::Rng rng(12);
  for (int k = 0; k < 50; ++k) {
    const Vector r = rng.vec(9);
    const double c = rng.uniform(-5.0, 5.0);
    CHECK(inf_norm(c * r) == doctest::Approx(std::abs(c) * inf_norm(r)).epsilon(1e-15));
  }
}

TEST_CASE("weighted_sq") {
  const Vector r{{1.0, -2.0}};
  CHECK(weighted_sq(r, Vector{{1.0, 0.0}}) == 1.0);
  CHECK(weighted_sq(r, Vector{{0.5, 0.5}}) == 2.5);
  CHECK_THROWS_AS(weighted_sq(r, Vector{{1.0}}), InvalidInput);
  CHECK_THROWS_AS(weighted_sq(r, Vector{{1.5, -0.5}}), InvalidInput);
}

TEST_CASE("weighted_sq on the simplex never exceeds the squared inf-norm") {
  oracle::Rng rng(13);
  for (int k = 0; k < 200; ++k) {
    const int m = rng.integer(1, 12);
    const Vector r = rng.vec(m, -3.0, 3.0);
    Vector lambda = rng.vec(m, 0.0, 1.0);
    lambda /= lambda.sum();
    const double z = inf_norm(r);
    CHECK(weighted_sq(r, lambda) <= z * z * (1.0 + 1e-14));
  }
}

TEST_CASE("pnorm_pow_objective") {
  CHECK(pnorm_pow_objective(Vector{{2.0}}, 1) == 4.0);
  CHECK(pnorm_pow_objective(Vector{{1.0, 1.0}}, 3) == 2.0);
  CHECK_THROWS_AS(pnorm_pow_objective(Vector{{1.0}}, 0), InvalidInput);

  // The 2p-th root decreases toward the inf-norm.
  const Vector r{{1.0, 2.0, 3.0}};
  double prev = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= 8; ++p) {
    const double root = std::pow(pnorm_pow_objective(r, p), 1.0 / (2 * p));
    CHECK(root < prev);
    CHECK(root >= 3.0);
    prev = root;
  }
  CHECK(prev - 3.0 < 0.1);
}

TEST_CASE("argmin over a finite set is unchanged by squaring") {
  oracle::Rng rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector c = rng.vec(3, -1.0, 1.0);
    // f(y) = max_i |c_i - y| on a grid of 10^4 points.
    int arg_f = -1, arg_f2 = -1;
    double best_f = HUGE_VAL, best_f2 = HUGE_VAL;
    for (int k = 0; k < 10000; ++k) {
      const double y = -1.0 + 2.0 * k / 9999.0;
      const double f = (c.array() - y).abs().maxCoeff();
      if (f < best_f) { best_f = f; arg_f = k; }
      if (f * f < best_f2) { best_f2 = f * f; arg_f2 = k; }
    }
    CHECK(arg_f == arg_f2);
  }
}

TEST_CASE("fd_jacobian") {
  const ResidualMap id(2, 2, [](const Vector& y) { return y; });
  const DenseMatrix j = fd_jacobian(id, Vector{{0.3, -7.0}});
  CHECK((j - DenseMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);

  const ResidualMap sq(1, 1, [](const Vector& y) { return Vector{{y[0] * y[0]}}; });
  CHECK(fd_jacobian(sq, Vector{{3.0}})(0, 0) == doctest::Approx(6.0).epsilon(1e-6));

  oracle::Rng rng(15);
  for (int k = 0; k < 20; ++k) {
    const DenseMatrix a = rng.mat(5, 3, -10.0, 10.0);
    const Vector b = rng.vec(5);
    const ResidualMap affine(3, 5, [a, b](const Vector& y) { Vector r = a * y - b; return r; });
    const DenseMatrix j2 = fd_jacobian(affine, rng.vec(3, -100.0, 100.0));
    CHECK((j2 - a).cwiseAbs().maxCoeff() < 1e-8 * (1.0 + a.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("fd_jacobian reports the failing probe point") {
  const ResidualMap f(1, 1, [](const Vector& y) {
    return Vector{{y[0] > 1.0 ? std::nan("") : y[0]}};
  });
  try {
    fd_jacobian(f, Vector{{1.0}});
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(e.point()[0] > 1.0);
  }
}

TEST_CASE("ResidualMap validates shapes and finiteness") {
  const ResidualMap f(2, 3, [](const Vector& y) { return Vector(y); });
  CHECK_THROWS_AS(f.eval(Vector::Zero(3)), InvalidInput);
  CHECK_THROWS_AS(f.eval(Vector::Zero(2)), EvaluationError);
  const ResidualMap g(1, 1, [](const Vector&) { return Vector{{HUGE_VAL}}; });
  CHECK_THROWS_AS(g.eval(Vector::Zero(1)), EvaluationError);
}

TEST_CASE("SeparableProblem residual and y-Jacobian") {
  // A(y) = [[1, y0], [y0, 1], [1, 1]], b(y) = [y0^2, 0, 1].
  auto basis = [](const Vector& y) {
    DenseMatrix a(3, 2);
    a << 1.0, y[0], y[0], 1.0, 1.0, 1.0;
    return a;
  };
  auto rhs = [](const Vector& y) { return Vector{{y[0] * y[0], 0.0, 1.0}}; };
  auto dbasis = [](const Vector&) {
    DenseMatrix d(3, 2);
    d << 0.0, 1.0, 1.0, 0.0, 0.0, 0.0;
    return std::vector<DenseMatrix>{d};
  };
  auto drhs = [](const Vector& y) {
    DenseMatrix d(3, 1);
    d << 2.0 * y[0], 0.0, 0.0;
    return d;
  };
  const SeparableProblem p(2, 1, 3, basis, rhs, dbasis, drhs);
  const Vector x{{0.5, -2.0}};
  const Vector y{{1.5}};
  const Vector r = p.residual(x, y);
  CHECK(r[0] == doctest::Approx(0.5 - 3.0 - 2.25));
  CHECK(p.objective(x, y) == doctest::Approx(inf_norm(r)));

  const ResidualMap in_y(1, 3, [&](const Vector& v) { return p.residual(x, v); });
  const DenseMatrix fd = fd_jacobian(in_y, y);
  CHECK((fd - p.residual_jacobian_y(x, y)).cwiseAbs().maxCoeff() < 1e-7);

  CHECK_THROWS_AS(SeparableProblem(2, 1, 3, basis, rhs, dbasis, {}), InvalidInput);
  CHECK_THROWS_AS(p.residual(x, Vector::Zero(2)), InvalidInput);
  const SeparableProblem plain(2, 1, 3, basis, rhs);
  CHECK_FALSE(plain.has_derivatives());
  CHECK_THROWS_AS(plain.residual_jacobian_y(x, y), InvalidInput);
}

}  // TEST_SUITE
