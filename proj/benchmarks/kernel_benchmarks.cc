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

// Serial reference kernels against their OpenMP counterparts. Set
// OMP_NUM_THREADS to vary the thread count.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "infdual/bench.h"
#include "infdual/kernels.h"

namespace {

using infdual::DenseMatrix;
using infdual::Vector;
namespace kernels = infdual::kernels;

kernels::Tableau make_tableau(int rows, int cols) {
  kernels::Tableau t(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) t(i, j) = std::sin(1.0 + i * 0.37 + j * 0.11);
  }
  t(0, 0) = 2.0;
  return t;
}

template <void (*Pivot)(kernels::Tableau&, int, int)>
void BM_Pivot(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const kernels::Tableau base = make_tableau(n, 2 * n);
  for (auto _ : state) {
    state.PauseTiming();
    kernels::Tableau t = base;
    state.ResumeTiming();
    Pivot(t, 0, 0);
    benchmark::DoNotOptimize(t.data());
  }
}
BENCHMARK(BM_Pivot<kernels::serial::pivot>)->Name("pivot/serial")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_Pivot<kernels::omp::pivot>)->Name("pivot/omp")->Arg(64)->Arg(256)->Arg(1024);

kernels::EvalFn lorentz_residual(int m) {
  const infdual::Instance inst = infdual::generate_instance(
      infdual::model_spec(infdual::ModelId::kLorentz6), m, 7);
  const infdual::SeparableProblem problem = infdual::make_problem(inst);
  const Vector x = inst.true_linear;
  return [problem, x](const Vector& y) { return problem.residual(x, y); };
}

template <DenseMatrix (*Jacobian)(const kernels::EvalFn&, const Vector&, int)>
void BM_FdJacobian(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const kernels::EvalFn eval = lorentz_residual(m);
  const Vector y = infdual::generate_instance(
      infdual::model_spec(infdual::ModelId::kLorentz6), m, 7).true_nonlinear;
  for (auto _ : state) benchmark::DoNotOptimize(Jacobian(eval, y, m));
}
BENCHMARK(BM_FdJacobian<kernels::serial::fd_jacobian>)->Name("fd_jacobian/serial")->Arg(100)->Arg(2000);
BENCHMARK(BM_FdJacobian<kernels::omp::fd_jacobian>)->Name("fd_jacobian/omp")->Arg(100)->Arg(2000);

template <void (*Map)(const kernels::ScalarFn&, std::span<const double>, std::span<double>)>
void BM_MapValues(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const kernels::EvalFn eval = lorentz_residual(m);
  const Vector y0 = infdual::generate_instance(
      infdual::model_spec(infdual::ModelId::kLorentz6), m, 7).true_nonlinear;
  const kernels::ScalarFn phi = [&](double beta) {
    return eval(y0 * (1.0 + 0.01 * beta)).lpNorm<Eigen::Infinity>();
  };
  std::vector<double> points(76), values(76);
  for (int k = 0; k < 76; ++k) points[k] = 1.5 * k / 75.0;
  for (auto _ : state) {
    Map(phi, points, values);
    benchmark::DoNotOptimize(values.data());
  }
}
BENCHMARK(BM_MapValues<kernels::serial::map_values>)->Name("map_values/serial")->Arg(100)->Arg(2000);
BENCHMARK(BM_MapValues<kernels::omp::map_values>)->Name("map_values/omp")->Arg(100)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
