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

// Dense two-phase primal simplex and the Chebyshev (minimax) linear program
//
//   min z  s.t.  z >= (A x - b)_i,  z >= -(A x - b)_i,  i = 1..m,
//
// whose solution minimizes ||A x - b||_inf over x.

#ifndef INFDUAL_LP_H_
#define INFDUAL_LP_H_

#include <string_view>
#include <vector>

#include "infdual/core.h"

namespace infdual {

// min c^T x  s.t.  A x = b, x >= 0. Rows with negative right-hand side are
// negated on construction so that b >= 0 afterwards; row_sign() records the
// flips (+1 or -1 per row).
class StandardLp {
 public:
  StandardLp(DenseMatrix a, Vector b, Vector c);

  const DenseMatrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  const Vector& c() const { return c_; }
  const Vector& row_sign() const { return row_sign_; }
  int rows() const { return static_cast<int>(a_.rows()); }
  int cols() const { return static_cast<int>(a_.cols()); }

 private:
  DenseMatrix a_;
  Vector b_;
  Vector c_;
  Vector row_sign_;
};

enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kInternalError,
};

std::string_view to_string(LpStatus status);

struct LpSolution {
  Vector x;
  double objective = 0.0;
  LpStatus status = LpStatus::kInternalError;
  int pivots = 0;
  // Final basis, one column index per row; -1 marks a row whose artificial
  // variable stayed basic at level zero (a redundant constraint).
  std::vector<int> basis;
  // Simplex multipliers pi = B^-T c_B for the rows as originally given.
  Vector duals;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  int max_pivots = 100000;
};

// Two-phase primal simplex on a dense tableau with Bland's rule. Columns that
// are already unit vectors seed the initial basis; artificials are added for
// the remaining rows only. The final basic solution is recomputed from the
// original data with an LU solve of the basis matrix.
LpSolution simplex_solve(const StandardLp& lp,
                         const SimplexOptions& options = {});

// Minimizes ||A x - b||_inf. objective holds the LP optimum z*, x the
// minimizer.
//
// The simplex runs on the LP dual of the minimax program,
//
//   min sum_i b_i (u_i - v_i)  s.t.  A^T (u - v) = 0,  sum_i (u_i + v_i) = 1,
//                                    u, v >= 0,
//
// which has n + 1 rows instead of 2m and a bounded feasible set. Its simplex
// multipliers are (x, -z*) of the primal program.
LpSolution solve_chebyshev(const DenseMatrix& a, const Vector& b,
                           const SimplexOptions& options = {});

// The same problem solved in primal form: 2m inequality rows with slacks and
// x split into positive and negative parts. Kept as an independent route for
// cross-checks.
LpSolution solve_chebyshev_primal(const DenseMatrix& a, const Vector& b,
                                  const SimplexOptions& options = {});

}  // namespace infdual

#endif  // INFDUAL_LP_H_
