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

#include "infdual/numkit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "infdual/kernels.h"

namespace infdual {

Vector lstsq(const DenseMatrix& a, const Vector& b) {
  if (a.rows() < a.cols()) {
    throw InvalidInput(fmt::format("lstsq: need rows >= cols, got {}x{}",
                                   a.rows(), a.cols()));
  }
  if (b.size() != a.rows()) {
    throw InvalidInput("lstsq: right-hand side length mismatch");
  }
  if (a.cols() == 0) return Vector();
  return a.colPivHouseholderQr().solve(b);
}

Vector project_simplex(const Vector& v) {
  if (v.size() == 0) throw InvalidInput("project_simplex: empty vector");
  if (!v.allFinite()) throw InvalidInput("project_simplex: non-finite entry");

  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double candidate = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) theta = candidate;
  }
  Vector out = (v.array() - theta).max(0.0);
  // Entries above the threshold already sum to one up to rounding; fold the
  // residual rounding back in so the output is on the simplex to ~1 ulp.
  const double total = out.sum();
  if (total > 0.0) out /= total;
  return out;
}

ScalarMin min_scalar(const std::function<double(double)>& phi, double lo,
                     double hi, const ScalarSearchOptions& options) {
  if (!(lo < hi)) throw InvalidInput("min_scalar: need lo < hi");
  if (options.grid_points < 2) {
    throw InvalidInput("min_scalar: need at least 2 grid points");
  }
  if (!(options.refine_tol > 0.0)) {
    throw InvalidInput("min_scalar: refine_tol must be positive");
  }

  const int n = options.grid_points;
  std::vector<double> grid;
  grid.reserve(n + 2);
  for (int i = 0; i < n; ++i) {
    grid.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
  }
  grid.back() = hi;
  for (double anchor : {0.0, 1.0}) {
    if (anchor >= lo && anchor <= hi) grid.push_back(anchor);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  auto safe_phi = [&phi](double beta) {
    const double v = phi(beta);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<double> values(grid.size());
  kernels::map_values(safe_phi, grid, values, options.parallel_grid);

  std::size_t best = 0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (values[k] < values[best]) best = k;
  }
  if (!std::isfinite(values[best])) {
    throw SolverFailure("min_scalar: phi is non-finite on the whole grid");
  }

  ScalarMin result{grid[best], values[best]};
  double a = grid[best > 0 ? best - 1 : 0];
  double b = grid[std::min(best + 1, grid.size() - 1)];

  // Golden-section search on [a, b].
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = safe_phi(c);
  double fd = safe_phi(d);
  auto consider = [&result](double beta, double value) {
    if (value < result.value) result = {beta, value};
  };
  consider(c, fc);
  consider(d, fd);
  while (b - a > options.refine_tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = safe_phi(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = safe_phi(d);
      consider(d, fd);
    }
  }
  return result;
}

}  // namespace infdual
