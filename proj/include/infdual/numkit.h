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

// Dense linear algebra and scalar optimization utilities.

#ifndef INFDUAL_NUMKIT_H_
#define INFDUAL_NUMKIT_H_

#include <functional>

#include "infdual/core.h"

namespace infdual {

// Minimizer of ||A x - b||_2 by column-pivoted Householder QR. Rank-deficient
// A yields a basic minimizer. Throws InvalidInput if A has fewer rows than
// columns or b has the wrong length.
Vector lstsq(const DenseMatrix& a, const Vector& b);

// Euclidean projection onto {lambda : lambda_i >= 0, sum lambda_i = 1} by
// the sort-and-threshold method.
Vector project_simplex(const Vector& v);

struct ScalarMin {
  double beta;
  double value;
};

struct ScalarSearchOptions {
  int grid_points = 76;
  double refine_tol = 1e-6;
  // Evaluate grid points concurrently; phi must then be thread-safe.
  bool parallel_grid = false;
};

// Grid search on [lo, hi] (the grid always contains lo, hi and, when they lie
// inside the interval, 0 and 1), then golden-section refinement between the
// neighbours of the best grid point. Non-finite phi values are skipped; the
// result is never worse than the best grid value. Throws SolverFailure if
// phi is non-finite everywhere on the grid.
ScalarMin min_scalar(const std::function<double(double)>& phi, double lo,
                     double hi, const ScalarSearchOptions& options = {});

}  // namespace infdual

#endif  // INFDUAL_NUMKIT_H_
