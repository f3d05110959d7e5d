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

#include <doctest.h>

#include <cmath>

#include "infdual/bench.h"
#include "oracles.h"

using namespace infdual;

TEST_SUITE("bench") {

TEST_CASE("eval_model examples") {
  const ModelSpec& exp3 = model_spec(ModelId::kExp3);
  for (double t : {0.0, 1.3, 4.0}) {
    CHECK(eval_model(exp3, Vector{{1.0, 0.0, 0.0}}, Vector{{2.0, 3.0}}, t) == 1.0);
    CHECK(eval_model(exp3, Vector{{0.0, 1.0, 0.0}}, Vector{{0.0, 3.0}}, t) == 1.0);
  }
  const ModelSpec& gauss4 = model_spec(ModelId::kGauss4);
  Vector alpha = Vector::Ones(7);
  alpha[1] = 1.0;
  alpha[2] = 2.0;
  CHECK(eval_model(gauss4, Vector{{0.0, 1.0, 0.0, 0.0}}, alpha, 2.0) == 1.0);
}

TEST_CASE("lorentz6 rejects a zero width") {
  const ModelSpec& spec = model_spec(ModelId::kLorentz6);
  Vector alpha{{5.0, 1.0, 0.5, 4.0, 1.0, 0.5, 6.0, 1.0}};
  CHECK_NOTHROW(eval_model(spec, Vector::Ones(6), alpha, 3.0));
  for (int k : {2, 5, 7}) {
    Vector bad = alpha;
    bad[k] = 0.0;
    CHECK_THROWS_AS(eval_model(spec, Vector::Ones(6), bad, 3.0), InvalidParameter);
  }
}

TEST_CASE("model shapes") {
  CHECK(model_spec(ModelId::kExp3).n1 == 3);
  CHECK(model_spec(ModelId::kExp3).n2 == 2);
  CHECK(model_spec(ModelId::kGauss4).n1 == 4);
  CHECK(model_spec(ModelId::kGauss4).n2 == 7);
  CHECK(model_spec(ModelId::kLorentz6).n1 == 6);
  CHECK(model_spec(ModelId::kLorentz6).n2 == 8);
  for (ModelId id : all_models()) CHECK(parse_model_id(to_string(id)) == id);
  CHECK_FALSE(parse_model_id("bogus").has_value());
}

TEST_CASE("instances are seeded, zero-residual and inside the ranges") {
  for (ModelId id : all_models()) {
    const ModelSpec& spec = model_spec(id);
    const Instance a = generate_instance(spec, 100, 42);
    const Instance b = generate_instance(spec, 100, 42);
    const Instance c = generate_instance(spec, 100, 43);
    CHECK(a == b);
    CHECK(a.data != c.data);
    CHECK(truth_residual(a) <= 1e-12);
    CHECK(a.t[0] == spec.t_range.lo);
    CHECK(a.t[99] == doctest::Approx(spec.t_range.hi));
    for (int j = 0; j < spec.n1; ++j) {
      CHECK(a.true_linear[j] >= spec.linear[j].lo);
      CHECK(a.true_linear[j] <= spec.linear[j].hi);
    }
    const Vector y0 = perturbed_start(a);
    CHECK(y0 == perturbed_start(b));
    for (int j = 0; j < spec.n2; ++j) {
      const ParamRange& r = spec.nonlinear[j];
      CHECK(a.true_nonlinear[j] >= r.lo);
      CHECK(a.true_nonlinear[j] <= r.hi);
      CHECK(y0[j] >= r.lo);
      CHECK(y0[j] <= r.hi);
      CHECK(std::abs(y0[j] - a.true_nonlinear[j]) <= kStartPerturbation * r.width() + 1e-15);
    }
  }
}

TEST_CASE("analytic basis derivatives match finite differences") {
  oracle::Rng rng(91);
  for (ModelId id : all_models()) {
    const ModelSpec& spec = model_spec(id);
    const Instance inst = generate_instance(spec, 50, 17);
    const SeparableProblem p = make_problem(inst);
    for (int k = 0; k < 20; ++k) {
      Vector y(spec.n2);
      for (int j = 0; j < spec.n2; ++j) {
        y[j] = rng.uniform(spec.nonlinear[j].lo, spec.nonlinear[j].hi);
      }
      Vector x(spec.n1);
      for (int j = 0; j < spec.n1; ++j) {
        x[j] = rng.uniform(spec.linear[j].lo, spec.linear[j].hi);
      }
      const ResidualMap red = reduced_map(p, x);
      const DenseMatrix fd = fd_jacobian(red, y);
      const DenseMatrix an = p.residual_jacobian_y(x, y);
      CAPTURE(to_string(id));
      CHECK((an - fd).norm() <= 1e-5 * std::max(1.0, fd.norm()));
    }
  }
}

TEST_CASE("benchmark shape, summaries and determinism") {
  BenchConfig cfg;
  cfg.runs = 1;
  BenchReport r = run_benchmark(model_spec(ModelId::kExp3), cfg);
  CHECK(r.records.size() == 2);
  CHECK(r.summary.size() == 2);
  CHECK(r.records[0].method == "dual");
  CHECK(r.records[1].method == "pnorm");

  cfg.runs = 3;
  const BenchReport a = run_benchmark(model_spec(ModelId::kExp3), cfg);
  const BenchReport b = run_benchmark(model_spec(ModelId::kExp3), cfg);
  REQUIRE(a.records.size() == 6);
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].objective == b.records[k].objective);
    CHECK(a.records[k].iterations == b.records[k].iterations);
    CHECK(a.records[k].seed == cfg.seed_base + a.records[k].run);
  }
  CHECK(summarize(a.records) == a.summary);

  cfg.parallel = true;
  const BenchReport c = run_benchmark(model_spec(ModelId::kExp3), cfg);
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].objective == c.records[k].objective);
  }
}

TEST_CASE("summary averages successful runs only") {
  std::vector<BenchRecord> recs(3);
  recs[0] = {"exp3", "dual", 0, 1, 1.0, 0.5, 3, "converged", true};
  recs[1] = {"exp3", "dual", 1, 2, 3.0, 1.5, 5, "max-iters", true};
  recs[2] = {"exp3", "dual", 2, 3, 0.0, 0.1, 0, "error", false};
  const std::vector<BenchSummary> s = summarize(recs);
  REQUIRE(s.size() == 1);
  CHECK(s[0].avg_objective == 2.0);
  CHECK(s[0].avg_seconds == 1.0);
  CHECK(s[0].avg_iterations == 4.0);
  CHECK(s[0].successes == 2);
  CHECK(s[0].failures == 1);
}

}  // TEST_SUITE
