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

// Data-parallel inner loops. Every kernel has a serial reference version and
// an OpenMP version with the same signature; the OpenMP versions partition
// independent rows/columns/points only (no reductions), so both produce
// bitwise-identical results. The dispatchers at the bottom pick one by
// problem size.

#ifndef INFDUAL_KERNELS_H_
#define INFDUAL_KERNELS_H_

#include <exception>
#include <functional>
#include <mutex>
#include <span>

#include "infdual/core.h"

namespace infdual::kernels {

using Tableau =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EvalFn = std::function<Vector(const Vector&)>;
using ScalarFn = std::function<double(double)>;

// Rough flop count above which the dispatchers use the OpenMP path.
inline constexpr long kParallelWork = 1L << 16;

int max_threads();
bool use_parallel(long work);

// Holds the first exception thrown inside a parallel region so it can be
// rethrown on the calling thread.
class ExceptionSlot {
 public:
  template <class Fn>
  void run(Fn&& fn) noexcept {
    try {
      fn();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr error_;
};

namespace serial {

// Central-difference Jacobian of eval at y; m is the residual length.
DenseMatrix fd_jacobian(const EvalFn& eval, const Vector& y, int m);

// Gauss-Jordan pivot of the tableau on (row, col).
void pivot(Tableau& t, int row, int col);

// values[k] = phi(points[k]).
void map_values(const ScalarFn& phi, std::span<const double> points,
                std::span<double> values);

// Calls fill(i) for every row index i in [0, rows).
template <class RowFn>
void for_rows(int rows, RowFn&& fill) {
  for (int i = 0; i < rows; ++i) fill(i);
}

}  // namespace serial

namespace omp {

DenseMatrix fd_jacobian(const EvalFn& eval, const Vector& y, int m);
void pivot(Tableau& t, int row, int col);
void map_values(const ScalarFn& phi, std::span<const double> points,
                std::span<double> values);

template <class RowFn>
void for_rows(int rows, RowFn&& fill) {
  ExceptionSlot slot;
#if defined(INFDUAL_HAVE_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < rows; ++i) {
    slot.run([&] { fill(i); });
  }
  slot.rethrow();
}

}  // namespace omp

// Dispatchers. `work` is a rough flop count for the whole call.
DenseMatrix fd_jacobian(const EvalFn& eval, const Vector& y, int m);
void pivot(Tableau& t, int row, int col);
void map_values(const ScalarFn& phi, std::span<const double> points,
                std::span<double> values, bool allow_parallel);

template <class RowFn>
void for_rows(int rows, long work, RowFn&& fill) {
  if (use_parallel(work)) {
    omp::for_rows(rows, std::forward<RowFn>(fill));
  } else {
    serial::for_rows(rows, std::forward<RowFn>(fill));
  }
}

}  // namespace infdual::kernels

#endif  // INFDUAL_KERNELS_H_
