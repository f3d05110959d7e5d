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

#include "infdual/core.h"

#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "infdual/kernels.h"

namespace infdual {

bool all_finite(const Vector& v) { return v.allFinite(); }
bool all_finite(const DenseMatrix& a) { return a.allFinite(); }

ResidualMap::ResidualMap(int n, int m, EvalFn eval, JacobianFn jacobian)
    : n_(n), m_(m), eval_(std::move(eval)), jacobian_(std::move(jacobian)) {
  if (n < 1 || m < 1) {
    throw InvalidInput(fmt::format("ResidualMap: need n >= 1 and m >= 1, got "
                                   "n={} m={}",
                                   n, m));
  }
  if (!eval_) throw InvalidInput("ResidualMap: eval callback is empty");
}

Vector ResidualMap::eval(const Vector& y) const {
  if (y.size() != n_) {
    throw InvalidInput(
        fmt::format("ResidualMap::eval: point has length {}, expected {}",
                    y.size(), n_));
  }
  Vector r = eval_(y);
  if (r.size() != m_) {
    throw EvaluationError(fmt::format("residual has length {}, expected {}",
                                      r.size(), m_),
                          y);
  }
  if (!r.allFinite()) throw EvaluationError("non-finite residual", y);
  return r;
}

DenseMatrix ResidualMap::jacobian(const Vector& y) const {
  if (!jacobian_) return fd_jacobian(*this, y);
  if (y.size() != n_) {
    throw InvalidInput("ResidualMap::jacobian: wrong point length");
  }
  DenseMatrix jac = jacobian_(y);
  if (jac.rows() != m_ || jac.cols() != n_) {
    throw EvaluationError("jacobian has the wrong shape", y);
  }
  if (!jac.allFinite()) throw EvaluationError("non-finite jacobian", y);
  return jac;
}

SeparableProblem::SeparableProblem(int n1, int n2, int m, BasisFn basis,
                                   RhsFn rhs, BasisDerivFn basis_deriv,
                                   RhsDerivFn rhs_deriv)
    : n1_(n1),
      n2_(n2),
      m_(m),
      basis_(std::move(basis)),
      rhs_(std::move(rhs)),
      basis_deriv_(std::move(basis_deriv)),
      rhs_deriv_(std::move(rhs_deriv)) {
  if (n1 < 1 || n2 < 1 || m < 1) {
    throw InvalidInput(fmt::format(
        "SeparableProblem: need n1, n2, m >= 1, got n1={} n2={} m={}", n1, n2,
        m));
  }
  if (!basis_ || !rhs_) {
    throw InvalidInput("SeparableProblem: basis and rhs are required");
  }
  if (static_cast<bool>(basis_deriv_) != static_cast<bool>(rhs_deriv_)) {
    throw InvalidInput(
        "SeparableProblem: basis and rhs derivatives must be given together");
  }
}

void SeparableProblem::check_y(const Vector& y) const {
  if (y.size() != n2_) {
    throw InvalidInput(fmt::format(
        "SeparableProblem: y has length {}, expected {}", y.size(), n2_));
  }
}

DenseMatrix SeparableProblem::basis(const Vector& y) const {
  check_y(y);
  DenseMatrix a = basis_(y);
  if (a.rows() != m_ || a.cols() != n1_) {
    throw EvaluationError("basis matrix has the wrong shape", y);
  }
  if (!a.allFinite()) throw EvaluationError("non-finite basis matrix", y);
  return a;
}

Vector SeparableProblem::rhs(const Vector& y) const {
  check_y(y);
  Vector b = rhs_(y);
  if (b.size() != m_) throw EvaluationError("rhs has the wrong length", y);
  if (!b.allFinite()) throw EvaluationError("non-finite rhs", y);
  return b;
}

Vector SeparableProblem::residual(const Vector& x, const Vector& y) const {
  if (x.size() != n1_) {
    throw InvalidInput(fmt::format(
        "SeparableProblem: x has length {}, expected {}", x.size(), n1_));
  }
  return basis(y) * x - rhs(y);
}

double SeparableProblem::objective(const Vector& x, const Vector& y) const {
  return inf_norm(residual(x, y));
}

DenseMatrix SeparableProblem::residual_jacobian_y(const Vector& x,
                                                  const Vector& y) const {
  if (!has_derivatives()) {
    throw InvalidInput("SeparableProblem: no analytic derivatives supplied");
  }
  check_y(y);
  const std::vector<DenseMatrix> da = basis_deriv_(y);
  const DenseMatrix db = rhs_deriv_(y);
  if (static_cast<int>(da.size()) != n2_ || db.rows() != m_ ||
      db.cols() != n2_) {
    throw EvaluationError("basis derivatives have the wrong shape", y);
  }
  DenseMatrix jac(m_, n2_);
  for (int k = 0; k < n2_; ++k) jac.col(k) = da[k] * x - db.col(k);
  if (!jac.allFinite()) throw EvaluationError("non-finite derivative", y);
  return jac;
}

double inf_norm(const Vector& r) {
  if (r.size() == 0) throw InvalidInput("inf_norm: empty vector");
  if (!r.allFinite()) throw InvalidInput("inf_norm: non-finite entry");
  return r.cwiseAbs().maxCoeff();
}

double weighted_sq(const Vector& r, const Vector& lambda) {
  if (r.size() != lambda.size()) {
    throw InvalidInput(fmt::format("weighted_sq: lengths {} and {} differ",
                                   r.size(), lambda.size()));
  }
  if ((lambda.array() < 0.0).any()) {
    throw InvalidInput("weighted_sq: negative weight");
  }
  return (lambda.array() * r.array().square()).sum();
}

double pnorm_pow_objective(const Vector& r, int p) {
  if (p < 1) throw InvalidInput("pnorm_pow_objective: p must be >= 1");
  return r.array().pow(2.0 * p).sum();
}

DenseMatrix fd_jacobian(const ResidualMap& f, const Vector& y) {
  if (y.size() != f.n()) throw InvalidInput("fd_jacobian: wrong point length");
  return kernels::fd_jacobian([&f](const Vector& p) { return f.eval(p); }, y,
                              f.m());
}

}  // namespace infdual
