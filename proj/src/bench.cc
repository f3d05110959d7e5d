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

#include "infdual/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>

#include <fmt/format.h>

#include "infdual/kernels.h"

namespace infdual {
namespace {

constexpr std::uint64_t kStartStream = 0x9E3779B97F4A7C15ULL;

// Uniform in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, const ParamRange& r) {
  return r.lo + r.width() * unit_uniform(rng);
}

ModelSpec make_exp3() {
  return {ModelId::kExp3, 3, 2, {0.0, 4.0},
          {{-5, 5}, {-5, 5}, {-5, 5}},
          {{0.5, 5}, {0.5, 5}}};
}

ModelSpec make_gauss4() {
  const ParamRange decay{0.2, 2.0};
  const ParamRange width{1.0, 10.0};
  const ParamRange center{0.5, 3.5};
  return {ModelId::kGauss4, 4, 7, {0.0, 4.0},
          {{1, 5}, {1, 5}, {1, 5}, {1, 5}},
          {decay, width, center, width, center, width, center}};
}

ModelSpec make_lorentz6() {
  const ParamRange center{2.0, 8.0};
  const ParamRange split{0.5, 2.0};
  const ParamRange width{0.3, 1.5};
  return {ModelId::kLorentz6, 6, 8, {0.0, 10.0},
          {{-1, 1}, {-1, 1}, {-1, 1}, {1, 5}, {1, 5}, {1, 5}},
          {center, split, width, center, split, width, center, width}};
}

// Lorentzian 1 / (1 + u^2), u = (c - t) / w, and its partials in c and w.
struct Lorentz {
  double value;
  double d_center;
  double d_width;
};

Lorentz lorentz(double c, double w, double t) {
  const double u = (c - t) / w;
  const double l = 1.0 / (1.0 + u * u);
  return {l, -2.0 * u * l * l / w, 2.0 * u * u * l * l / w};
}

void check_alpha(const ModelSpec& spec, const Vector& alpha) {
  if (alpha.size() != spec.n2) {
    throw InvalidInput(fmt::format("{}: expected {} nonlinear parameters, "
                                   "got {}",
                                   to_string(spec.id), spec.n2, alpha.size()));
  }
  if (spec.id == ModelId::kLorentz6 &&
      (alpha(2) == 0.0 || alpha(5) == 0.0 || alpha(7) == 0.0)) {
    throw InvalidParameter("lorentz6: Lorentzian width must be nonzero");
  }
}

}  // namespace

std::string_view to_string(ModelId id) {
  switch (id) {
    case ModelId::kExp3:
      return "exp3";
    case ModelId::kGauss4:
      return "gauss4";
    case ModelId::kLorentz6:
      return "lorentz6";
  }
  return "unknown";
}

std::optional<ModelId> parse_model_id(std::string_view name) {
  for (ModelId id : all_models()) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

std::vector<ModelId> all_models() {
  return {ModelId::kExp3, ModelId::kGauss4, ModelId::kLorentz6};
}

const ModelSpec& model_spec(ModelId id) {
  static const ModelSpec kExp3 = make_exp3();
  static const ModelSpec kGauss4 = make_gauss4();
  static const ModelSpec kLorentz6 = make_lorentz6();
  switch (id) {
    case ModelId::kExp3:
      return kExp3;
    case ModelId::kGauss4:
      return kGauss4;
    case ModelId::kLorentz6:
      return kLorentz6;
  }
  throw InvalidInput("model_spec: unknown model");
}

void basis_row(const ModelSpec& spec, const Vector& alpha, double t,
               Eigen::Ref<Eigen::RowVectorXd> row) {
  switch (spec.id) {
    case ModelId::kExp3:
      row(0) = 1.0;
      row(1) = std::exp(-alpha(0) * t);
      row(2) = std::exp(-alpha(1) * t);
      return;
    case ModelId::kGauss4:
      row(0) = std::exp(-alpha(0) * t);
      for (int k = 0; k < 3; ++k) {
        const double d = t - alpha(2 + 2 * k);
        row(1 + k) = std::exp(-alpha(1 + 2 * k) * d * d);
      }
      return;
    case ModelId::kLorentz6:
      row(0) = 1.0;
      row(1) = t;
      row(2) = t * t;
      for (int k = 0; k < 2; ++k) {
        const double c = alpha(3 * k);
        const double half = 0.5 * alpha(3 * k + 1);
        const double w = alpha(3 * k + 2);
        row(3 + k) = -(lorentz(c + half, w, t).value +
                       lorentz(c - half, w, t).value);
      }
      row(5) = -lorentz(alpha(6), alpha(7), t).value;
      return;
  }
}

void basis_row_derivative(const ModelSpec& spec, const Vector& alpha, double t,
                          Eigen::Ref<DenseMatrix> dphi) {
  dphi.setZero();
  switch (spec.id) {
    case ModelId::kExp3:
      dphi(0, 1) = -t * std::exp(-alpha(0) * t);
      dphi(1, 2) = -t * std::exp(-alpha(1) * t);
      return;
    case ModelId::kGauss4:
      dphi(0, 0) = -t * std::exp(-alpha(0) * t);
      for (int k = 0; k < 3; ++k) {
        const double width = alpha(1 + 2 * k);
        const double d = t - alpha(2 + 2 * k);
        const double g = std::exp(-width * d * d);
        dphi(1 + 2 * k, 1 + k) = -d * d * g;
        dphi(2 + 2 * k, 1 + k) = 2.0 * width * d * g;
      }
      return;
    case ModelId::kLorentz6:
      for (int k = 0; k < 2; ++k) {
        const double c = alpha(3 * k);
        const double half = 0.5 * alpha(3 * k + 1);
        const double w = alpha(3 * k + 2);
        const Lorentz plus = lorentz(c + half, w, t);
        const Lorentz minus = lorentz(c - half, w, t);
        dphi(3 * k, 3 + k) = -(plus.d_center + minus.d_center);
        dphi(3 * k + 1, 3 + k) = -0.5 * (plus.d_center - minus.d_center);
        dphi(3 * k + 2, 3 + k) = -(plus.d_width + minus.d_width);
      }
      {
        const Lorentz single = lorentz(alpha(6), alpha(7), t);
        dphi(6, 5) = -single.d_center;
        dphi(7, 5) = -single.d_width;
      }
      return;
  }
}

double eval_model(const ModelSpec& spec, const Vector& a, const Vector& alpha,
                  double t) {
  check_alpha(spec, alpha);
  if (a.size() != spec.n1) {
    throw InvalidInput(fmt::format("{}: expected {} linear parameters, got {}",
                                   to_string(spec.id), spec.n1, a.size()));
  }
  Eigen::RowVectorXd row(spec.n1);
  basis_row(spec, alpha, t, row);
  return row.dot(a);
}

DenseMatrix basis_matrix(const ModelSpec& spec, const Vector& alpha,
                         const Vector& t) {
  check_alpha(spec, alpha);
  const int m = static_cast<int>(t.size());
  DenseMatrix a(m, spec.n1);
  kernels::for_rows(m, 30L * m * spec.n1, [&](int i) {
    Eigen::RowVectorXd row(spec.n1);
    basis_row(spec, alpha, t(i), row);
    a.row(i) = row;
  });
  return a;
}

std::vector<DenseMatrix> basis_derivatives(const ModelSpec& spec,
                                           const Vector& alpha,
                                           const Vector& t) {
  check_alpha(spec, alpha);
  const int m = static_cast<int>(t.size());
  std::vector<DenseMatrix> d(spec.n2, DenseMatrix::Zero(m, spec.n1));
  kernels::for_rows(m, 30L * m * spec.n1 * spec.n2, [&](int i) {
    DenseMatrix dphi(spec.n2, spec.n1);
    basis_row_derivative(spec, alpha, t(i), dphi);
    for (int k = 0; k < spec.n2; ++k) d[k].row(i) = dphi.row(k);
  });
  return d;
}

bool operator==(const Instance& lhs, const Instance& rhs) {
  auto same = [](const Vector& a, const Vector& b) {
    return a.size() == b.size() && a == b;
  };
  return lhs.model == rhs.model && lhs.m == rhs.m && lhs.seed == rhs.seed &&
         lhs.format_version == rhs.format_version && same(lhs.t, rhs.t) &&
         same(lhs.data, rhs.data) && same(lhs.true_linear, rhs.true_linear) &&
         same(lhs.true_nonlinear, rhs.true_nonlinear);
}

Instance generate_instance(const ModelSpec& spec, int m, std::uint64_t seed) {
  if (m < spec.n1 + spec.n2 + 1) {
    throw InvalidInput(fmt::format("generate_instance: {} needs m >= {}, got {}",
                                   to_string(spec.id), spec.n1 + spec.n2 + 1,
                                   m));
  }
  Instance inst;
  inst.model = spec.id;
  inst.m = m;
  inst.seed = seed;
  inst.t.resize(m);
  for (int i = 0; i < m; ++i) {
    inst.t(i) = spec.t_range.lo + spec.t_range.width() * i / (m - 1.0);
  }
  inst.t(m - 1) = spec.t_range.hi;

  std::mt19937_64 rng(seed);
  inst.true_linear.resize(spec.n1);
  for (int j = 0; j < spec.n1; ++j) {
    inst.true_linear(j) = uniform(rng, spec.linear[j]);
  }
  inst.true_nonlinear.resize(spec.n2);
  for (int k = 0; k < spec.n2; ++k) {
    inst.true_nonlinear(k) = uniform(rng, spec.nonlinear[k]);
  }
  inst.data = basis_matrix(spec, inst.true_nonlinear, inst.t) * inst.true_linear;
  return inst;
}

SeparableProblem make_problem(const Instance& instance) {
  const ModelSpec& spec = model_spec(instance.model);
  const Vector t = instance.t;
  const Vector data = instance.data;
  const int m = instance.m;
  if (t.size() != m || data.size() != m) {
    throw InvalidInput("make_problem: instance arrays do not match m");
  }
  auto basis = [&spec, t](const Vector& y) {
    try {
      return basis_matrix(spec, y, t);
    } catch (const InvalidParameter& e) {
      throw EvaluationError(e.what(), y);
    }
  };
  auto rhs = [data](const Vector&) { return data; };
  auto basis_deriv = [&spec, t](const Vector& y) {
    try {
      return basis_derivatives(spec, y, t);
    } catch (const InvalidParameter& e) {
      throw EvaluationError(e.what(), y);
    }
  };
  auto rhs_deriv = [m, &spec](const Vector&) {
    return DenseMatrix::Zero(m, spec.n2).eval();
  };
  return SeparableProblem(spec.n1, spec.n2, m, basis, rhs, basis_deriv,
                          rhs_deriv);
}

double truth_residual(const Instance& instance) {
  return make_problem(instance).objective(instance.true_linear,
                                          instance.true_nonlinear);
}

Vector perturbed_start(const Instance& instance, double d) {
  const ModelSpec& spec = model_spec(instance.model);
  std::mt19937_64 rng(instance.seed ^ kStartStream);
  Vector y = instance.true_nonlinear;
  for (int k = 0; k < spec.n2; ++k) {
    const ParamRange& r = spec.nonlinear[k];
    const double u = 2.0 * unit_uniform(rng) - 1.0;
    y(k) = std::clamp(y(k) + d * u * r.width(), r.lo, r.hi);
  }
  return y;
}

std::vector<BenchSummary> summarize(const std::vector<BenchRecord>& records) {
  std::vector<BenchSummary> out;
  std::map<std::string, std::size_t> index;
  for (const BenchRecord& r : records) {
    auto [it, inserted] = index.try_emplace(r.method, out.size());
    if (inserted) out.push_back(BenchSummary{r.method});
    BenchSummary& s = out[it->second];
    if (!r.ok) {
      ++s.failures;
      continue;
    }
    ++s.successes;
    s.avg_objective += r.objective;
    s.avg_seconds += r.seconds;
    s.avg_iterations += r.iterations;
  }
  for (BenchSummary& s : out) {
    if (s.successes == 0) continue;
    s.avg_objective /= s.successes;
    s.avg_seconds /= s.successes;
    s.avg_iterations /= s.successes;
  }
  return out;
}

BenchReport run_benchmark(const ModelSpec& spec, const BenchConfig& config) {
  if (config.runs < 1) throw InvalidInput("run_benchmark: runs must be >= 1");
  if (config.methods.empty()) {
    throw InvalidInput("run_benchmark: no methods requested");
  }
  config.options.validate();

  const int methods = static_cast<int>(config.methods.size());
  const int total = config.runs * methods;
  BenchReport report;
  report.records.resize(total);
  report.objective_traces.resize(total);

  auto one_run = [&](int run) {
    const std::uint64_t seed = config.seed_base + static_cast<std::uint64_t>(run);
    const Instance instance = generate_instance(spec, config.m, seed);
    const double truth = truth_residual(instance);
    const SeparableProblem problem = make_problem(instance);
    const Vector y0 = perturbed_start(instance);
    for (int k = 0; k < methods; ++k) {
      BenchRecord& rec = report.records[run * methods + k];
      rec.model = std::string(to_string(spec.id));
      rec.method = std::string(to_string(config.methods[k]));
      rec.run = run;
      rec.seed = seed;
      if (truth > 1e-12) {
        rec.ok = false;
        rec.status = "invalid-instance";
        continue;
      }
      AltOptions options = config.options;
      options.method = config.methods[k];
      const auto start = std::chrono::steady_clock::now();
      try {
        const AltResult res = solve_separable(problem, std::nullopt, y0, options);
        const std::chrono::duration<double> elapsed =
            std::chrono::steady_clock::now() - start;
        rec.seconds = std::round(elapsed.count() * 1000.0) / 1000.0;
        rec.objective = res.objective;
        rec.iterations = res.outer_iterations;
        rec.status = std::string(to_string(res.status));
        rec.ok = res.status == AltStatus::kConverged ||
                 res.status == AltStatus::kMaxIters;
        std::vector<double>& trace = report.objective_traces[run * methods + k];
        trace.push_back(res.initial_objective);
        for (const AltIterate& it : res.trace) trace.push_back(it.objective);
      } catch (const std::exception&) {
        const std::chrono::duration<double> elapsed =
            std::chrono::steady_clock::now() - start;
        rec.seconds = std::round(elapsed.count() * 1000.0) / 1000.0;
        rec.ok = false;
        rec.status = "error";
      }
    }
  };

  if (config.parallel) {
    kernels::ExceptionSlot slot;
#if defined(INFDUAL_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
    for (int run = 0; run < config.runs; ++run) {
      slot.run([&] { one_run(run); });
    }
    slot.rethrow();
  } else {
    for (int run = 0; run < config.runs; ++run) one_run(run);
  }

  report.summary = summarize(report.records);
  return report;
}

}  // namespace infdual
