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

// File formats: instance and solve-result files are JSON objects, benchmark
// tables are CSV with the header
//
//   model,method,run,seed,objective,seconds,iterations,status
//
// followed by one summary row per method whose run column is "summary", whose
// numeric columns hold the averages and whose status reads "ok=N;fail=M".
// Non-finite numbers are written as the strings "inf", "-inf" and "nan".

#ifndef INFDUAL_IO_H_
#define INFDUAL_IO_H_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "infdual/bench.h"
#include "infdual/core.h"
#include "infdual/separable.h"

namespace infdual {

// Malformed file content. `field` names the offending key or CSV column and
// `line` is 1-based (0 when unknown).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::string field, int line)
      : std::runtime_error(what), field_(std::move(field)), line_(line) {}
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

std::string instance_to_json(const Instance& instance);
Instance instance_from_json(std::string_view text);

nlohmann::ordered_json options_to_json(const AltOptions& options);
// Missing keys keep their defaults; unknown keys are rejected.
AltOptions options_from_json(const nlohmann::ordered_json& json);

struct SolveReport {
  std::string model;
  std::string instance;  // source path as given on the command line
  std::uint64_t seed = 0;
  AltOptions options;    // every effective hyperparameter
  double initial_objective = 0.0;
  double objective = 0.0;
  int outer_iterations = 0;
  int sub_iterations = 0;
  double seconds = 0.0;
  std::string status;
  Vector x;
  Vector y;
  std::vector<AltIterate> trace;
};

bool operator==(const SolveReport& lhs, const SolveReport& rhs);

std::string solve_report_to_json(const SolveReport& report);
SolveReport solve_report_from_json(std::string_view text);

struct BenchTable {
  std::vector<BenchRecord> records;
  std::vector<BenchSummary> summary;
};

// A record counts as a success when its status is one of these.
bool is_success_status(std::string_view status);

std::string bench_to_csv(std::string_view model, const BenchTable& table);
BenchTable bench_from_csv(std::string_view text);

}  // namespace infdual

#endif  // INFDUAL_IO_H_
