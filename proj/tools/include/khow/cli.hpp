// Copyright 2026 The khow Authors
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

// The `khow` command line: check, sat, valid, bisim, equiv, filter,
// translate, classify and axioms.
//
// Exit codes: 0 affirmative verdict or success, 1 negative verdict, 2 usage,
// parse, file-format or precondition error.

#ifndef KHOW_CLI_HPP_
#define KHOW_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace khow::cli {

inline constexpr int kExitYes = 0;
inline constexpr int kExitNo = 1;
inline constexpr int kExitError = 2;

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace khow::cli

#endif  // KHOW_CLI_HPP_
