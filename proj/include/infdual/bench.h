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

// Curve-fitting benchmark: three separable models, seeded zero-residual
// instances and the repeated-run protocol comparing the dual and 2p-norm
// subproblem solvers inside the same alternating method.
//
//   exp3      a1 + a2 exp(-al1 t) + a3 exp(-al2 t)
//   gauss4    a1 exp(-al1 t) + sum_{k=1..3} a_{k+1} exp(-al_{2k} (t - al_{2k+1})^2)
//   lorentz6  a1 + a2 t + a3 t^2 - a4 [L(al1 + al2/2, al3) + L(al1 - al2/2, al3)]
//                                - a5 [L(al4 + al5/2, al6) + L(al4 - al5/2, al6)]
//                                - a6 L(al7, al8),
//             L(c, w)(t) = 1 / (1 + ((c - t) / w)^2)
//
// The minus signs of lorentz6 live in the basis functions, so every model
// value is exactly basis_row . a.

#ifndef INFDUAL_BENCH_H_
#define INFDUAL_BENCH_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infdual/core.h"
#include "infdual/separable.h"

namespace infdual {

enum class ModelId { kExp3, kGauss4, kLorentz6 };

std::string_view to_string(ModelId id);
std::optional<ModelId> parse_model_id(std::string_view name);
std::vector<ModelId> all_models();

struct ParamRange {
  double lo;
  double hi;
  double width() const { return hi - lo; }
};

struct ModelSpec {
  ModelId id;
  int n1;
  int n2;
  ParamRange t_range;
  std::vector<ParamRange> linear;     // sampling ranges for a
  std::vector<ParamRange> nonlinear;  // sampling ranges for alpha
};

const ModelSpec& model_spec(ModelId id);

// Thrown for parameters outside a model's domain (a zero Lorentzian width).
class InvalidParameter : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Basis functions phi_j(alpha, t), j = 0..n1-1, written to `row`.
void basis_row(const ModelSpec& spec, const Vector& alpha, double t,
               Eigen::Ref<Eigen::RowVectorXd> row);

// d phi_j / d alpha_k as an n2 x n1 matrix.
void basis_row_derivative(const ModelSpec& spec, const Vector& alpha, double t,
                          Eigen::Ref<DenseMatrix> dphi);

double eval_model(const ModelSpec& spec, const Vector& a, const Vector& alpha,
                  double t);

// m x n1 matrix of basis values at the sample points.
DenseMatrix basis_matrix(const ModelSpec& spec, const Vector& alpha,
                         const Vector& t);

// dA/dalpha_k for k = 0..n2-1, each m x n1.
std::vector<DenseMatrix> basis_derivatives(const ModelSpec& spec,
                                           const Vector& alpha,
                                           const Vector& t);

inline constexpr int kInstanceFormatVersion = 1;

struct Instance {
  ModelId model = ModelId::kExp3;
  int m = 0;
  Vector t;
  Vector data;
  Vector true_linear;
  Vector true_nonlinear;
  std::uint64_t seed = 0;
  int format_version = kInstanceFormatVersion;
};

bool operator==(const Instance& lhs, const Instance& rhs);

// Samples truth uniformly from the model's ranges with a generator seeded by
// `seed`; data_i = model(truth, t_i) on m equispaced points of t_range.
Instance generate_instance(const ModelSpec& spec, int m, std::uint64_t seed);

// min_{a, alpha} ||A(alpha) a - data||_inf for the instance's model.
SeparableProblem make_problem(const Instance& instance);

// ||A(true_nonlinear) true_linear - data||_inf.
double truth_residual(const Instance& instance);

// Truth plus U[-d, d] * range width per nonlinear parameter, clamped to the
// sampling range. Deterministic in the seed.
Vector perturbed_start(const Instance& instance, double d);

inline constexpr double kStartPerturbation = 0.05;

inline Vector perturbed_start(const Instance& instance) {
  return perturbed_start(instance, kStartPerturbation);
}

struct BenchRecord {
  std::string model;
  std::string method;
  int run = 0;
  std::uint64_t seed = 0;
  double objective = 0.0;
  double seconds = 0.0;  // wall clock, rounded to milliseconds
  int iterations = 0;
  std::string status;
  bool ok = true;

  bool operator==(const BenchRecord&) const = default;
};

struct BenchSummary {
  std::string method;
  double avg_objective = 0.0;
  double avg_seconds = 0.0;
  double avg_iterations = 0.0;
  int successes = 0;
  int failures = 0;

  bool operator==(const BenchSummary&) const = default;
};

// Averages over the successful records of each method, in the order methods
// first appear.
std::vector<BenchSummary> summarize(const std::vector<BenchRecord>& records);

struct BenchConfig {
  int runs = 10;
  int m = 100;
  std::vector<SubproblemMethod> methods{SubproblemMethod::kDual,
                                        SubproblemMethod::kPnorm};
  std::uint64_t seed_base = 100;
  bool parallel = false;  // runs concurrently; timings are then not comparable
  AltOptions options;
};

struct BenchReport {
  std::vector<BenchRecord> records;  // ordered by run, then method
  std::vector<BenchSummary> summary;
  // Outer-objective traces, parallel to records.
  std::vector<std::vector<double>> objective_traces;
};

BenchReport run_benchmark(const ModelSpec& spec, const BenchConfig& config);

}  // namespace infdual

#endif  // INFDUAL_BENCH_H_
