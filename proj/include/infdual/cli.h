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

// Command-line front end: `gen`, `solve` and `bench` subcommands.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 solver failure,
// 4 file I/O or parse error.

#ifndef INFDUAL_CLI_H_
#define INFDUAL_CLI_H_

#include <iosfwd>

namespace infdual {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitIo = 4;

// Runs the command line in-process, printing to `out` and `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace infdual

#endif  // INFDUAL_CLI_H_
