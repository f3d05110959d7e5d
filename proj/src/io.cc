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

#include "infdual/io.h"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace infdual {

using Json = nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError(fmt::format("error reading '{}'", path.string()));
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError(fmt::format("error writing '{}'", path.string()));
}

namespace {

int line_at(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  int line = 1;
  for (std::size_t i = 0; i < offset; ++i) line += text[i] == '\n';
  return line;
}

// Line of the first occurrence of "key" in the text, 0 if absent.
int line_of_key(std::string_view text, std::string_view key) {
  const std::string quoted = fmt::format("\"{}\"", key);
  const std::size_t pos = text.find(quoted);
  return pos == std::string_view::npos ? 0 : line_at(text, pos);
}

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json vector_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(number(v[i]));
  return arr;
}

// Field access with error messages that carry the key and its line.
class Reader {
 public:
  Reader(std::string_view text, std::string context)
      : text_(text), context_(std::move(context)) {}

  Json parse() const {
    try {
      return Json::parse(text_);
    } catch (const Json::parse_error& e) {
      const int line = line_at(text_, e.byte == 0 ? 0 : e.byte - 1);
      throw ParseError(fmt::format("{}: malformed JSON at line {}: {}",
                                   context_, line, e.what()),
                       "", line);
    }
  }

  [[noreturn]] void fail(std::string_view key, std::string_view problem) const {
    const int line = line_of_key(text_, key);
    if (line > 0) {
      throw ParseError(fmt::format("{}: field '{}' (line {}): {}", context_,
                                   key, line, problem),
                       std::string(key), line);
    }
    throw ParseError(fmt::format("{}: field '{}': {}", context_, key, problem),
                     std::string(key), 0);
  }

  const Json& at(const Json& obj, std::string_view key) const {
    if (!obj.is_object()) fail(key, "enclosing value is not an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(key, "missing");
    return *it;
  }

  double to_double(const Json& v, std::string_view key) const {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const std::string& s = v.get_ref<const std::string&>();
      if (s == "inf") return HUGE_VAL;
      if (s == "-inf") return -HUGE_VAL;
      if (s == "nan") return std::nan("");
    }
    fail(key, "expected a number");
  }

  double num(const Json& obj, std::string_view key) const {
    return to_double(at(obj, key), key);
  }

  int integer(const Json& obj, std::string_view key) const {
    const Json& v = at(obj, key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    const auto wide = v.get<std::int64_t>();
    if (wide < std::numeric_limits<int>::min() ||
        wide > std::numeric_limits<int>::max()) {
      fail(key, "integer out of range");
    }
    return static_cast<int>(wide);
  }

  std::uint64_t u64(const Json& obj, std::string_view key) const {
    const Json& v = at(obj, key);
    if (!v.is_number_unsigned()) fail(key, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  std::string str(const Json& obj, std::string_view key) const {
    const Json& v = at(obj, key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  Vector vec(const Json& v, std::string_view key) const {
    if (!v.is_array()) fail(key, "expected an array of numbers");
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      out[static_cast<Eigen::Index>(i)] = to_double(v[i], key);
    }
    return out;
  }

  Vector vec(const Json& obj, std::string_view key, Eigen::Index expected) const {
    Vector out = vec(at(obj, key), key);
    if (expected >= 0 && out.size() != expected) {
      fail(key, fmt::format("expected {} entries, found {}", expected, out.size()));
    }
    return out;
  }

  // Applies `handlers` to the members of `obj`; unknown keys are errors.
  void fields(const Json& obj, std::string_view key,
              const std::map<std::string, std::function<void(const Json&)>>&
                  handlers) const {
    if (!obj.is_object()) fail(key, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const auto h = handlers.find(it.key());
      if (h == handlers.end()) fail(it.key(), "unknown option");
      h->second(obj);
    }
  }

 private:
  std::string_view text_;
  std::string context_;
};

}  // namespace

std::string instance_to_json(const Instance& instance) {
  const ModelSpec& spec = model_spec(instance.model);
  Json j;
  j["format_version"] = instance.format_version;
  j["model"] = std::string(to_string(instance.model));
  j["m"] = instance.m;
  j["n1"] = spec.n1;
  j["n2"] = spec.n2;
  j["seed"] = instance.seed;
  j["t"] = vector_json(instance.t);
  j["data"] = vector_json(instance.data);
  j["true_linear"] = vector_json(instance.true_linear);
  j["true_nonlinear"] = vector_json(instance.true_nonlinear);
  return j.dump(2) + "\n";
}

Instance instance_from_json(std::string_view text) {
  const Reader r(text, "instance");
  const Json j = r.parse();
  Instance inst;
  inst.format_version = r.integer(j, "format_version");
  if (inst.format_version != kInstanceFormatVersion) {
    r.fail("format_version",
           fmt::format("unsupported version {}", inst.format_version));
  }
  const std::string model = r.str(j, "model");
  const auto id = parse_model_id(model);
  if (!id) r.fail("model", fmt::format("unknown model '{}'", model));
  inst.model = *id;
  const ModelSpec& spec = model_spec(*id);
  inst.m = r.integer(j, "m");
  if (inst.m < spec.n1 + spec.n2 + 1) r.fail("m", "too few samples for the model");
  if (r.integer(j, "n1") != spec.n1) r.fail("n1", "does not match the model");
  if (r.integer(j, "n2") != spec.n2) r.fail("n2", "does not match the model");
  inst.seed = r.u64(j, "seed");
  inst.t = r.vec(j, "t", inst.m);
  inst.data = r.vec(j, "data", inst.m);
  inst.true_linear = r.vec(j, "true_linear", spec.n1);
  inst.true_nonlinear = r.vec(j, "true_nonlinear", spec.n2);
  return inst;
}

Json options_to_json(const AltOptions& o) {
  Json nlls;
  nlls["max_iters"] = o.dual.inner.max_iters;
  nlls["grad_tol"] = o.dual.inner.grad_tol;
  nlls["step_tol"] = o.dual.inner.step_tol;
  nlls["initial_damping"] = o.dual.inner.initial_damping;
  nlls["damping_up"] = o.dual.inner.damping_up;
  nlls["damping_down"] = o.dual.inner.damping_down;

  Json dual;
  dual["max_outer_iters"] = o.dual.max_outer_iters;
  dual["stop_tol"] = o.dual.stop_tol;
  dual["stall_window"] = o.dual.stall_window;
  dual["gap_tol"] = o.dual.gap_tol;
  dual["step_rule"] = std::string(to_string(o.dual.step_rule));
  dual["lambda0"] = o.dual.lambda0 ? vector_json(*o.dual.lambda0) : Json(nullptr);
  dual["inner"] = std::move(nlls);

  Json pnorm;
  pnorm["p_sequence"] = o.pnorm.p_sequence;
  pnorm["stage_max_iters"] = o.pnorm.stage_max_iters;
  pnorm["stop_tol"] = o.pnorm.stop_tol;
  pnorm["grad_tol"] = o.pnorm.grad_tol;

  Json ls;
  ls["lo"] = o.line_search.lo;
  ls["hi"] = o.line_search.hi;
  ls["grid_points"] = o.line_search.grid_points;
  ls["refine_tol"] = o.line_search.refine_tol;

  Json lp;
  lp["pivot_tol"] = o.lp.pivot_tol;
  lp["max_pivots"] = o.lp.max_pivots;

  Json j;
  j["max_outer"] = o.max_outer;
  j["stop_tol"] = o.stop_tol;
  j["method"] = std::string(to_string(o.method));
  j["space"] = std::string(to_string(o.space));
  j["line_search"] = std::move(ls);
  j["dual"] = std::move(dual);
  j["pnorm"] = std::move(pnorm);
  j["lp"] = std::move(lp);
  return j;
}

namespace {

AltOptions parse_options(const Reader& r, const Json& j) {
  AltOptions o;
  using Handlers = std::map<std::string, std::function<void(const Json&)>>;
  const Handlers nlls{
      {"max_iters", [&](const Json& v) { o.dual.inner.max_iters = r.integer(v, "max_iters"); }},
      {"grad_tol", [&](const Json& v) { o.dual.inner.grad_tol = r.num(v, "grad_tol"); }},
      {"step_tol", [&](const Json& v) { o.dual.inner.step_tol = r.num(v, "step_tol"); }},
      {"initial_damping", [&](const Json& v) { o.dual.inner.initial_damping = r.num(v, "initial_damping"); }},
      {"damping_up", [&](const Json& v) { o.dual.inner.damping_up = r.num(v, "damping_up"); }},
      {"damping_down", [&](const Json& v) { o.dual.inner.damping_down = r.num(v, "damping_down"); }},
  };
  const Handlers dual{
      {"max_outer_iters", [&](const Json& v) { o.dual.max_outer_iters = r.integer(v, "max_outer_iters"); }},
      {"stop_tol", [&](const Json& v) { o.dual.stop_tol = r.num(v, "stop_tol"); }},
      {"stall_window", [&](const Json& v) { o.dual.stall_window = r.integer(v, "stall_window"); }},
      {"gap_tol", [&](const Json& v) { o.dual.gap_tol = r.num(v, "gap_tol"); }},
      {"step_rule", [&](const Json& v) {
         const auto rule = parse_step_rule(r.str(v, "step_rule"));
         if (!rule) r.fail("step_rule", "expected 'polyak' or 'diminishing'");
         o.dual.step_rule = *rule;
       }},
      {"lambda0", [&](const Json& v) {
         const Json& l = r.at(v, "lambda0");
         if (l.is_null()) {
           o.dual.lambda0.reset();
         } else {
           o.dual.lambda0 = r.vec(l, "lambda0");
         }
       }},
      {"inner", [&](const Json& v) { r.fields(r.at(v, "inner"), "inner", nlls); }},
  };
  const Handlers pnorm{
      {"p_sequence", [&](const Json& v) {
         const Json& seq = r.at(v, "p_sequence");
         if (!seq.is_array()) r.fail("p_sequence", "expected an array of integers");
         o.pnorm.p_sequence.clear();
         for (const Json& p : seq) {
           if (!p.is_number_integer()) r.fail("p_sequence", "expected an array of integers");
           o.pnorm.p_sequence.push_back(p.get<int>());
         }
       }},
      {"stage_max_iters", [&](const Json& v) { o.pnorm.stage_max_iters = r.integer(v, "stage_max_iters"); }},
      {"stop_tol", [&](const Json& v) { o.pnorm.stop_tol = r.num(v, "stop_tol"); }},
      {"grad_tol", [&](const Json& v) { o.pnorm.grad_tol = r.num(v, "grad_tol"); }},
  };
  const Handlers ls{
      {"lo", [&](const Json& v) { o.line_search.lo = r.num(v, "lo"); }},
      {"hi", [&](const Json& v) { o.line_search.hi = r.num(v, "hi"); }},
      {"grid_points", [&](const Json& v) { o.line_search.grid_points = r.integer(v, "grid_points"); }},
      {"refine_tol", [&](const Json& v) { o.line_search.refine_tol = r.num(v, "refine_tol"); }},
  };
  const Handlers lp{
      {"pivot_tol", [&](const Json& v) { o.lp.pivot_tol = r.num(v, "pivot_tol"); }},
      {"max_pivots", [&](const Json& v) { o.lp.max_pivots = r.integer(v, "max_pivots"); }},
  };
  const Handlers top{
      {"max_outer", [&](const Json& v) { o.max_outer = r.integer(v, "max_outer"); }},
      {"stop_tol", [&](const Json& v) { o.stop_tol = r.num(v, "stop_tol"); }},
      {"method", [&](const Json& v) {
         const auto m = parse_subproblem_method(r.str(v, "method"));
         if (!m) r.fail("method", "expected 'dual' or 'pnorm'");
         o.method = *m;
       }},
      {"space", [&](const Json& v) {
         const auto s = parse_subproblem_space(r.str(v, "space"));
         if (!s) r.fail("space", "expected 'joint' or 'reduced'");
         o.space = *s;
       }},
      {"line_search", [&](const Json& v) { r.fields(r.at(v, "line_search"), "line_search", ls); }},
      {"dual", [&](const Json& v) { r.fields(r.at(v, "dual"), "dual", dual); }},
      {"pnorm", [&](const Json& v) { r.fields(r.at(v, "pnorm"), "pnorm", pnorm); }},
      {"lp", [&](const Json& v) { r.fields(r.at(v, "lp"), "lp", lp); }},
  };
  r.fields(j, "metadata", top);
  return o;
}

}  // namespace

AltOptions options_from_json(const Json& json) {
  const std::string text = json.dump(2);
  return parse_options(Reader(text, "options"), json);
}

bool operator==(const SolveReport& lhs, const SolveReport& rhs) {
  auto same = [](const Vector& a, const Vector& b) {
    return a.size() == b.size() && a == b;
  };
  return lhs.model == rhs.model && lhs.instance == rhs.instance &&
         lhs.seed == rhs.seed &&
         options_to_json(lhs.options) == options_to_json(rhs.options) &&
         lhs.initial_objective == rhs.initial_objective &&
         lhs.objective == rhs.objective &&
         lhs.outer_iterations == rhs.outer_iterations &&
         lhs.sub_iterations == rhs.sub_iterations &&
         lhs.seconds == rhs.seconds && lhs.status == rhs.status &&
         same(lhs.x, rhs.x) && same(lhs.y, rhs.y) && lhs.trace == rhs.trace;
}

std::string solve_report_to_json(const SolveReport& report) {
  Json j;
  j["format_version"] = 1;
  j["model"] = report.model;
  j["instance"] = report.instance;
  j["seed"] = report.seed;
  j["status"] = report.status;
  j["initial_objective"] = number(report.initial_objective);
  j["objective"] = number(report.objective);
  j["outer_iterations"] = report.outer_iterations;
  j["sub_iterations"] = report.sub_iterations;
  j["seconds"] = report.seconds;
  j["x"] = vector_json(report.x);
  j["y"] = vector_json(report.y);
  Json trace = Json::array();
  for (const AltIterate& it : report.trace) {
    Json row;
    row["after_lp"] = number(it.after_lp);
    row["after_subproblem"] = number(it.after_subproblem);
    row["objective"] = number(it.objective);
    row["beta"] = number(it.beta);
    row["sub_iterations"] = it.sub_iterations;
    trace.push_back(std::move(row));
  }
  j["trace"] = std::move(trace);
  j["metadata"] = options_to_json(report.options);
  return j.dump(2) + "\n";
}

SolveReport solve_report_from_json(std::string_view text) {
  const Reader r(text, "result");
  const Json j = r.parse();
  if (r.integer(j, "format_version") != 1) r.fail("format_version", "unsupported version");
  SolveReport rep;
  rep.model = r.str(j, "model");
  rep.instance = r.str(j, "instance");
  rep.seed = r.u64(j, "seed");
  rep.status = r.str(j, "status");
  rep.initial_objective = r.num(j, "initial_objective");
  rep.objective = r.num(j, "objective");
  rep.outer_iterations = r.integer(j, "outer_iterations");
  rep.sub_iterations = r.integer(j, "sub_iterations");
  rep.seconds = r.num(j, "seconds");
  rep.x = r.vec(j, "x", -1);
  rep.y = r.vec(j, "y", -1);
  const Json& trace = r.at(j, "trace");
  if (!trace.is_array()) r.fail("trace", "expected an array");
  for (const Json& row : trace) {
    AltIterate it;
    it.after_lp = r.num(row, "after_lp");
    it.after_subproblem = r.num(row, "after_subproblem");
    it.objective = r.num(row, "objective");
    it.beta = r.num(row, "beta");
    it.sub_iterations = r.integer(row, "sub_iterations");
    rep.trace.push_back(it);
  }
  rep.options = parse_options(r, r.at(j, "metadata"));
  return rep;
}

bool is_success_status(std::string_view status) {
  return status == to_string(AltStatus::kConverged) ||
         status == to_string(AltStatus::kMaxIters);
}

namespace {

constexpr std::string_view kCsvHeader =
    "model,method,run,seed,objective,seconds,iterations,status";
constexpr std::string_view kSummaryRun = "summary";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void csv_fail(std::string_view column, int line,
                           std::string_view problem) {
  throw ParseError(fmt::format("bench table: column '{}' (line {}): {}",
                               column, line, problem),
                   std::string(column), line);
}

double csv_double(std::string_view cell, std::string_view column, int line) {
  const std::string s(cell);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    csv_fail(column, line, fmt::format("'{}' is not a number", cell));
  }
  return v;
}

template <typename Int>
Int csv_int(std::string_view cell, std::string_view column, int line) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    csv_fail(column, line, fmt::format("'{}' is not an integer", cell));
  }
  return v;
}

}  // namespace

std::string bench_to_csv(std::string_view model, const BenchTable& table) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const BenchRecord& r : table.records) {
    out += fmt::format("{},{},{},{},{:.17g},{:.3f},{},{}\n", r.model, r.method,
                       r.run, r.seed, r.objective, r.seconds, r.iterations,
                       r.status);
  }
  for (const BenchSummary& s : table.summary) {
    out += fmt::format("{},{},{},,{:.17g},{:.17g},{:.17g},ok={};fail={}\n",
                       model, s.method, kSummaryRun, s.avg_objective,
                       s.avg_seconds, s.avg_iterations, s.successes,
                       s.failures);
  }
  return out;
}

BenchTable bench_from_csv(std::string_view text) {
  static constexpr std::string_view kColumns[] = {
      "model", "method", "run", "seed", "objective", "seconds", "iterations", "status"};
  BenchTable table;
  std::size_t pos = 0;
  int line_no = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCsvHeader) csv_fail("header", line_no, "unexpected header row");
      header_seen = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != std::size(kColumns)) {
      csv_fail("row", line_no,
               fmt::format("expected {} columns, found {}", std::size(kColumns),
                           cells.size()));
    }
    if (cells[2] == kSummaryRun) {
      BenchSummary s;
      s.method = std::string(cells[1]);
      s.avg_objective = csv_double(cells[4], kColumns[4], line_no);
      s.avg_seconds = csv_double(cells[5], kColumns[5], line_no);
      s.avg_iterations = csv_double(cells[6], kColumns[6], line_no);
      const auto parts = split(cells[7], ';');
      if (parts.size() != 2 || !parts[0].starts_with("ok=") ||
          !parts[1].starts_with("fail=")) {
        csv_fail(kColumns[7], line_no, "expected 'ok=N;fail=M' in a summary row");
      }
      s.successes = csv_int<int>(parts[0].substr(3), kColumns[7], line_no);
      s.failures = csv_int<int>(parts[1].substr(5), kColumns[7], line_no);
      table.summary.push_back(std::move(s));
      continue;
    }
    BenchRecord r;
    r.model = std::string(cells[0]);
    r.method = std::string(cells[1]);
    r.run = csv_int<int>(cells[2], kColumns[2], line_no);
    r.seed = csv_int<std::uint64_t>(cells[3], kColumns[3], line_no);
    r.objective = csv_double(cells[4], kColumns[4], line_no);
    r.seconds = csv_double(cells[5], kColumns[5], line_no);
    r.iterations = csv_int<int>(cells[6], kColumns[6], line_no);
    r.status = std::string(cells[7]);
    r.ok = is_success_status(r.status);
    table.records.push_back(std::move(r));
  }
  if (!header_seen) csv_fail("header", 1, "missing header row");
  return table;
}

}  // namespace infdual
