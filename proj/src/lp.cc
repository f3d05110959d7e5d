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

#include "infdual/lp.h"

#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "infdual/kernels.h"
#include "infdual/numkit.h"

namespace infdual {
namespace {

using kernels::Tableau;

// Dense tableau [A | artificials | b] with the reduced-cost row appended.
// The objective row stores reduced costs d_j and, in the last column, -z.
class SimplexTableau {
 public:
  SimplexTableau(const StandardLp& lp, const SimplexOptions& options)
      : lp_(lp), options_(options), m_(lp.rows()), n_(lp.cols()) {
    basis_.assign(m_, -1);
    // Unit columns seed the basis.
    for (int j = 0; j < n_; ++j) {
      int row = -1;
      bool unit = true;
      for (int i = 0; i < m_ && unit; ++i) {
        const double v = lp.a()(i, j);
        if (v == 0.0) continue;
        if (v == 1.0 && row < 0) {
          row = i;
        } else {
          unit = false;
        }
      }
      if (unit && row >= 0 && basis_[row] < 0) basis_[row] = j;
    }
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < 0) artificial_rows_.push_back(i);
    }
    num_art_ = static_cast<int>(artificial_rows_.size());
    rhs_col_ = n_ + num_art_;

    t_ = Tableau::Zero(m_ + 1, rhs_col_ + 1);
    t_.topLeftCorner(m_, n_) = lp.a();
    t_.col(rhs_col_).head(m_) = lp.b();
    for (int k = 0; k < num_art_; ++k) {
      const int row = artificial_rows_[k];
      t_(row, n_ + k) = 1.0;
      basis_[row] = n_ + k;
    }
  }

  // kInfeasible when the artificials cannot be driven to zero.
  LpStatus phase_one() {
    if (num_art_ == 0) return LpStatus::kOptimal;
    t_.row(m_).setZero();
    for (int k = 0; k < num_art_; ++k) t_(m_, n_ + k) = 1.0;
    for (int row : artificial_rows_) t_.row(m_) -= t_.row(row);
    const LpStatus status = iterate(rhs_col_);
    if (status != LpStatus::kOptimal) return status;

    const double infeasibility = -t_(m_, rhs_col_);
    const double tol = 1e-7 * std::max(1.0, lp_.b().cwiseAbs().maxCoeff());
    if (infeasibility > tol) return LpStatus::kInfeasible;

    // Pivot zero-level artificials out of the basis where possible. A row
    // whose original columns are all zero is redundant; its artificial stays
    // basic at level zero and never leaves.
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > options_.pivot_tol) {
          do_pivot(i, j);
          break;
        }
      }
    }
    return LpStatus::kOptimal;
  }

  LpStatus phase_two() {
    t_.row(m_).setZero();
    t_.row(m_).head(n_) = lp_.c().transpose();
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[i];
      if (j < n_ && lp_.c()(j) != 0.0) t_.row(m_) -= lp_.c()(j) * t_.row(i);
    }
    return iterate(n_);
  }

  Vector solution() const {
    Vector x = Vector::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x(basis_[i]) = t_(i, rhs_col_);
    }
    return x;
  }

  // Basis matrix over the original columns plus the unit columns of any
  // artificials still basic.
  DenseMatrix basis_matrix() const {
    DenseMatrix b = DenseMatrix::Zero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) {
        b.col(i) = lp_.a().col(basis_[i]);
      } else {
        b(artificial_rows_[basis_[i] - n_], i) = 1.0;
      }
    }
    return b;
  }

  // Basic solution recomputed from the original data.
  Vector refined_solution(const Eigen::PartialPivLU<DenseMatrix>& lu) const {
    const Vector xb = lu.solve(lp_.b());
    Vector x = Vector::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x(basis_[i]) = xb(i);
    }
    return x;
  }

  // pi = B^-T c_B with zero cost on artificials.
  Vector multipliers(const Eigen::PartialPivLU<DenseMatrix>& lu) const {
    Vector cb = Vector::Zero(m_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) cb(i) = lp_.c()(basis_[i]);
    }
    return lu.transpose().solve(cb);
  }

  std::vector<int> basis() const {
    std::vector<int> out(basis_);
    for (int& j : out) {
      if (j >= n_) j = -1;
    }
    return out;
  }

  int pivots() const { return pivots_; }

 private:
  // Bland's rule over columns [0, allowed_cols).
  LpStatus iterate(int allowed_cols) {
    const double tol = options_.pivot_tol;
    while (true) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (t_(m_, j) < -tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;

      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        const double a = t_(i, enter);
        if (a <= tol) continue;
        const double ratio = t_(i, rhs_col_) / a;
        const double slack = 1e-12 * (1.0 + std::abs(best_ratio));
        if (leave < 0 || ratio < best_ratio - slack) {
          leave = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + slack && basis_[i] < basis_[leave]) {
          leave = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      if (pivots_ >= options_.max_pivots) return LpStatus::kIterationLimit;
      do_pivot(leave, enter);
    }
  }

  void do_pivot(int row, int col) {
    kernels::pivot(t_, row, col);
    basis_[row] = col;
    ++pivots_;
    // Keep the rhs column primal feasible against rounding drift.
    for (int i = 0; i < m_; ++i) {
      if (t_(i, rhs_col_) < 0.0 && t_(i, rhs_col_) > -options_.pivot_tol) {
        t_(i, rhs_col_) = 0.0;
      }
    }
  }

  const StandardLp& lp_;
  SimplexOptions options_;
  int m_;
  int n_;
  int num_art_ = 0;
  int rhs_col_ = 0;
  int pivots_ = 0;
  std::vector<int> basis_;
  std::vector<int> artificial_rows_;
  Tableau t_;
};

// Max violation of A x = b, x >= 0.
double violation(const StandardLp& lp, const Vector& x) {
  const double eq = (lp.a() * x - lp.b()).cwiseAbs().maxCoeff();
  const double neg = x.size() > 0 ? std::max(0.0, -x.minCoeff()) : 0.0;
  return std::max(eq, neg);
}

}  // namespace

StandardLp::StandardLp(DenseMatrix a, Vector b, Vector c)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  if (b_.size() != a_.rows() || c_.size() != a_.cols()) {
    throw InvalidInput(fmt::format(
        "StandardLp: A is {}x{}, b has {} entries, c has {}", a_.rows(),
        a_.cols(), b_.size(), c_.size()));
  }
  if (a_.rows() < 1 || a_.cols() < 1) {
    throw InvalidInput("StandardLp: empty constraint matrix");
  }
  if (!a_.allFinite() || !b_.allFinite() || !c_.allFinite()) {
    throw InvalidInput("StandardLp: non-finite data");
  }
  row_sign_ = Vector::Ones(b_.size());
  for (int i = 0; i < b_.size(); ++i) {
    if (b_(i) < 0.0) {
      row_sign_(i) = -1.0;
      b_(i) = -b_(i);
      a_.row(i) = -a_.row(i);
    }
  }
}

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration-limit";
    case LpStatus::kInternalError:
      return "internal-error";
  }
  return "unknown";
}

LpSolution simplex_solve(const StandardLp& lp, const SimplexOptions& options) {
  SimplexTableau tableau(lp, options);
  LpSolution out;
  out.status = tableau.phase_one();
  if (out.status == LpStatus::kOptimal) out.status = tableau.phase_two();
  out.pivots = tableau.pivots();
  if (out.status != LpStatus::kOptimal) return out;

  const Eigen::PartialPivLU<DenseMatrix> lu(tableau.basis_matrix());
  Vector x = tableau.solution();
  const Vector refined = tableau.refined_solution(lu);
  if (refined.allFinite() && violation(lp, refined) <= violation(lp, x)) {
    x = refined;
  }
  out.objective = lp.c().dot(x);
  out.x = std::move(x);
  out.basis = tableau.basis();
  out.duals = lp.row_sign().cwiseProduct(tableau.multipliers(lu));
  return out;
}

namespace {

void check_chebyshev_shapes(const DenseMatrix& a, const Vector& b) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw InvalidInput("solve_chebyshev: empty system");
  }
  if (b.size() != a.rows()) {
    throw InvalidInput("solve_chebyshev: right-hand side length mismatch");
  }
  if (!a.allFinite() || !b.allFinite()) {
    throw InvalidInput("solve_chebyshev: non-finite data");
  }
}

}  // namespace

LpSolution solve_chebyshev(const DenseMatrix& a, const Vector& b,
                           const SimplexOptions& options) {
  check_chebyshev_shapes(a, b);
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());

  // Columns: u (m), v (m). Rows: A^T (u - v) = 0, then sum (u + v) = 1.
  DenseMatrix lp_a(n + 1, 2 * m);
  lp_a.topLeftCorner(n, m) = a.transpose();
  lp_a.topRightCorner(n, m) = -a.transpose();
  lp_a.row(n).setOnes();
  Vector lp_b = Vector::Zero(n + 1);
  lp_b(n) = 1.0;
  Vector lp_c(2 * m);
  lp_c.head(m) = b;
  lp_c.tail(m) = -b;

  const LpSolution raw = simplex_solve(StandardLp(lp_a, lp_b, lp_c), options);
  LpSolution out;
  out.pivots = raw.pivots;
  out.status = raw.status;
  // The feasible set is a nonempty polytope, so anything but optimal is a
  // numerical failure.
  if (out.status != LpStatus::kOptimal) {
    out.status = LpStatus::kInternalError;
    return out;
  }
  out.x = raw.duals.head(n);
  out.objective = -raw.duals(n);
  out.basis = raw.basis;
  out.duals = raw.x;
  return out;
}

LpSolution solve_chebyshev_primal(const DenseMatrix& a, const Vector& b,
                                  const SimplexOptions& options) {
  check_chebyshev_shapes(a, b);
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());

  // Columns: x+ (n), x- (n), z, slacks (2m).
  const int z_col = 2 * n;
  const int cols = 2 * n + 1 + 2 * m;
  DenseMatrix lp_a = DenseMatrix::Zero(2 * m, cols);
  Vector lp_b(2 * m);
  Vector lp_c = Vector::Zero(cols);
  lp_c(z_col) = 1.0;
  for (int i = 0; i < m; ++i) {
    // (A x - b)_i - z + s_i = 0
    lp_a.row(i).head(n) = a.row(i);
    lp_a.row(i).segment(n, n) = -a.row(i);
    lp_a(i, z_col) = -1.0;
    lp_a(i, z_col + 1 + i) = 1.0;
    lp_b(i) = b(i);
    // -(A x - b)_i - z + s_{m+i} = 0
    lp_a.row(m + i).head(n) = -a.row(i);
    lp_a.row(m + i).segment(n, n) = a.row(i);
    lp_a(m + i, z_col) = -1.0;
    lp_a(m + i, z_col + 1 + m + i) = 1.0;
    lp_b(m + i) = -b(i);
  }

  const LpSolution raw =
      simplex_solve(StandardLp(lp_a, lp_b, lp_c), options);
  LpSolution out;
  out.pivots = raw.pivots;
  out.status = raw.status;
  // z >= 0 is implied by the constraints, so the LP cannot be unbounded.
  if (out.status == LpStatus::kUnbounded) out.status = LpStatus::kInternalError;
  if (out.status != LpStatus::kOptimal) return out;
  out.x = raw.x.head(n) - raw.x.segment(n, n);
  out.objective = raw.x(z_col);
  out.basis = raw.basis;
  out.duals = raw.duals;
  return out;
}

}  // namespace infdual
