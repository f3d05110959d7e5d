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

// Problem representations shared by every solver: residual maps F: R^n -> R^m,
// separable residuals A(y)x - b(y), norm/objective helpers and a central
// finite-difference Jacobian.

#ifndef INFDUAL_CORE_H_
#define INFDUAL_CORE_H_

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace infdual {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

// Bad arguments: shape mismatches, empty vectors, non-finite inputs,
// out-of-domain parameters.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A residual map, basis or objective produced a non-finite value. Carries the
// point at which the evaluation was attempted.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, Vector point)
      : std::runtime_error(what), point_(std::move(point)) {}
  const Vector& point() const { return point_; }

 private:
  Vector point_;
};

// A solver could not produce any usable answer.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool all_finite(const Vector& v);
bool all_finite(const DenseMatrix& a);

// Evaluatable map F: R^n -> R^m with an optional analytic Jacobian. Both
// callbacks must be pure; they may be invoked concurrently.
class ResidualMap {
 public:
  using EvalFn = std::function<Vector(const Vector&)>;
  using JacobianFn = std::function<DenseMatrix(const Vector&)>;

  ResidualMap(int n, int m, EvalFn eval, JacobianFn jacobian = {});

  int n() const { return n_; }
  int m() const { return m_; }
  bool has_jacobian() const { return static_cast<bool>(jacobian_); }

  // Throws InvalidInput on a wrong-length point and EvaluationError when the
  // residual has the wrong length or a non-finite entry.
  Vector eval(const Vector& y) const;

  // Analytic Jacobian when one was supplied, fd_jacobian otherwise.
  DenseMatrix jacobian(const Vector& y) const;

 private:
  int n_;
  int m_;
  EvalFn eval_;
  JacobianFn jacobian_;
};

// Residual r(x, y) = A(y) x - b(y) with x in R^n1 (linear parameters) and
// y in R^n2 (nonlinear parameters).
//
// Optional derivatives enable analytic Jacobians of reduced maps: basis_deriv
// returns dA/dy_k for k = 0..n2-1, rhs_deriv returns the m x n2 matrix db/dy.
// They must be supplied together.
class SeparableProblem {
 public:
  using BasisFn = std::function<DenseMatrix(const Vector&)>;
  using RhsFn = std::function<Vector(const Vector&)>;
  using BasisDerivFn = std::function<std::vector<DenseMatrix>(const Vector&)>;
  using RhsDerivFn = std::function<DenseMatrix(const Vector&)>;

  SeparableProblem(int n1, int n2, int m, BasisFn basis, RhsFn rhs,
                   BasisDerivFn basis_deriv = {}, RhsDerivFn rhs_deriv = {});

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int m() const { return m_; }
  bool has_derivatives() const { return static_cast<bool>(basis_deriv_); }

  DenseMatrix basis(const Vector& y) const;
  Vector rhs(const Vector& y) const;
  Vector residual(const Vector& x, const Vector& y) const;
  double objective(const Vector& x, const Vector& y) const;

  // d r(x, y) / dy, m x n2. Requires has_derivatives().
  DenseMatrix residual_jacobian_y(const Vector& x, const Vector& y) const;

 private:
  void check_y(const Vector& y) const;

  int n1_;
  int n2_;
  int m_;
  BasisFn basis_;
  RhsFn rhs_;
  BasisDerivFn basis_deriv_;
  RhsDerivFn rhs_deriv_;
};

// max_i |r_i|. Throws InvalidInput on empty or non-finite input.
double inf_norm(const Vector& r);

// sum_i lambda_i r_i^2 with lambda >= 0.
double weighted_sq(const Vector& r, const Vector& lambda);

// sum_i r_i^(2p), the smooth even-power surrogate whose 2p-th root tends to
// inf_norm(r) as p grows.
double pnorm_pow_objective(const Vector& r, int p);

// Central differences with step h_j = cbrt(eps) * max(1, |y_j|). Columns are
// independent probes and are evaluated in parallel when worthwhile.
DenseMatrix fd_jacobian(const ResidualMap& f, const Vector& y);

}  // namespace infdual

#endif  // INFDUAL_CORE_H_
