/*
 * Copyright 2026 The relacq Authors.
 *
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

#ifndef RELACQ_CLI_HPP_
#define RELACQ_CLI_HPP_

#include <iosfwd>
#include <span>
#include <string>

namespace relacq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitUsageError = 2;

// Runs one `relacq` invocation. `args` excludes the program name. `in` feeds
// the interactive subcommand; diagnostics go to `err`.
int Run(std::span<const std::string> args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace relacq::cli

#endif  // RELACQ_CLI_HPP_
