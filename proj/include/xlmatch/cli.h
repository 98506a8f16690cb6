// Copyright 2026 The xlmatch Authors.
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

#ifndef XLMATCH_CLI_H_
#define XLMATCH_CLI_H_

#include <string>
#include <vector>

namespace xlmatch {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// args[0] is the subcommand: stats, mine, audit, train, predict, baseline,
// ensemble or evaluate. Returns 0 on success, 1 on invalid input or usage and
// 2 on I/O failure. Logs go to standard error.
int Dispatch(const std::vector<std::string> &args);

int Main(int argc, char **argv);

}  // namespace xlmatch

#endif  // XLMATCH_CLI_H_
