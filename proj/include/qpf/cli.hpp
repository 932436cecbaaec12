// Copyright 2026 The qpf Authors
//
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

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qpf::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kNumerical = 2,
  kPostSelection = 3,
};

inline constexpr const char* kVersion = "0.1.0";

/// Runs the command line `args` (without the program name). Data goes to
/// `out` unless --out names a file; errors are one line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qpf::cli
