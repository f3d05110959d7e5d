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

#include "infdual/kernels.h"

#include <cmath>
#include <limits>

#if defined(INFDUAL_HAVE_OPENMP)
#include <omp.h>
#endif

namespace infdual::kernels {
namespace {

double fd_step(double yj) {
  static const double kCbrtEps =
      std::cbrt(std::numeric_limits<double>::epsilon());
  return kCbrtEps * std::max(1.0, std::abs(yj));
}

// One Jacobian column by central differences. The actual step (yp - ym) is
// used in the denominator so the representable perturbation is exact.
void fd_column(const EvalFn& eval, const Vector& y, int j, int m,
               DenseMatrix& jac) {
  const double h = fd_step(y(j));
  Vector yp = y;
  Vector ym = y;
  yp(j) = y(j) + h;
  ym(j) = y(j) - h;
  const Vector fp = eval(yp);
  const Vector fm = eval(ym);
  if (fp.size() != m || fm.size() != m) {
    throw EvaluationError("fd_jacobian: residual length changed", yp);
  }
  jac.col(j) = (fp - fm) / (yp(j) - ym(j));
}

void pivot_row(Tableau& t, int i, int row, int col) {
  if (i == row) return;
  const double factor = t(i, col);
  if (factor == 0.0) return;
  t.row(i) -= factor * t.row(row);
  t(i, col) = 0.0;
}

void normalize_pivot_row(Tableau& t, int row, int col) {
  const double p = t(row, col);
  t.row(row) /= p;
  t(row, col) = 1.0;
}

}  // namespace

int max_threads() {
#if defined(INFDUAL_HAVE_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool use_parallel(long work) {
  return max_threads() > 1 && work >= kParallelWork;
}

namespace serial {

DenseMatrix fd_jacobian(const EvalFn& eval, const Vector& y, int m) {
  DenseMatrix jac(m, y.size());
  for (int j = 0; j < y.size(); ++j) fd_column(eval, y, j, m, jac);
  return jac;
}

void pivot(Tableau& t, int row, int col) {
  normalize_pivot_row(t, row, col);
  for (int i = 0; i < t.rows(); ++i) pivot_row(t, i, row, col);
}

void map_values(const ScalarFn& phi, std::span<const double> points,
                std::span<double> values) {
  for (std::size_t k = 0; k < points.size(); ++k) values[k] = phi(points[k]);
}

}  // namespace serial

namespace omp {

DenseMatrix fd_jacobian(const EvalFn& eval, const Vector& y, int m) {
  DenseMatrix jac(m, y.size());
  ExceptionSlot slot;
  const int n = static_cast<int>(y.size());
#if defined(INFDUAL_HAVE_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < n; ++j) {
    slot.run([&] { fd_column(eval, y, j, m, jac); });
  }
  slot.rethrow();
  return jac;
}

void pivot(Tableau& t, int row, int col) {
  normalize_pivot_row(t, row, col);
  const int rows = static_cast<int>(t.rows());
#if defined(INFDUAL_HAVE_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < rows; ++i) pivot_row(t, i, row, col);
}

void map_values(const ScalarFn& phi, std::span<const double> points,
                std::span<double> values) {
  ExceptionSlot slot;
  const int count = static_cast<int>(points.size());
#if defined(INFDUAL_HAVE_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (int k = 0; k < count; ++k) {
    slot.run([&] { values[k] = phi(points[k]); });
  }
  slot.rethrow();
}

}  // namespace omp

DenseMatrix fd_jacobian(const EvalFn& eval, const Vector& y, int m) {
  // Each column costs two residual evaluations; assume ~20 flops per entry.
  const long work = 40L * m * y.size();
  return use_parallel(work) ? omp::fd_jacobian(eval, y, m)
                            : serial::fd_jacobian(eval, y, m);
}

void pivot(Tableau& t, int row, int col) {
  const long work = 2L * t.rows() * t.cols();
  if (use_parallel(work)) {
    omp::pivot(t, row, col);
  } else {
    serial::pivot(t, row, col);
  }
}

void map_values(const ScalarFn& phi, std::span<const double> points,
                std::span<double> values, bool allow_parallel) {
  if (allow_parallel && max_threads() > 1 && points.size() > 1) {
    omp::map_values(phi, points, values);
  } else {
    serial::map_values(phi, points, values);
  }
}

}  // namespace infdual::kernels
