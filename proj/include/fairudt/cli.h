/*
 * Copyright 2026 The FairUDT Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FAIRUDT_CLI_H_
#define FAIRUDT_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace fairudt {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitInternal = 4;

// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "FAIRUDT_OUT";

// Runs one invocation. `args[0]` is the program name. Human-readable output
// goes to `out`, diagnostics to `err`. Never throws.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace fairudt

#endif  // FAIRUDT_CLI_H_
