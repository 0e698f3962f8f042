// Copyright 2026 The dpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The dpaudit command line, as a library so it can be driven from tests.

#ifndef DPAUDIT_TOOLS_CLI_CLI_H_
#define DPAUDIT_TOOLS_CLI_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace dpaudit::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumeric = 3,
};

// `args[0]` is the program name. Regular output goes to `out`, diagnostics to
// `err`. Returns the process exit code.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace dpaudit::cli

#endif  // DPAUDIT_TOOLS_CLI_CLI_H_
