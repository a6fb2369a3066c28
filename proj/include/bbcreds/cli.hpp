/*
 * Copyright 2026 The bbcreds Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BBCREDS_CLI_HPP
#define BBCREDS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace bbcreds::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,  // usage, I/O, or record format errors
  kIssuanceDenied = 3,
  kLivenessFailed = 4,
  kAuthFailed = 5,
  kRpDenied = 6,
};

// Runs one command line (args exclude the program name) against the given
// streams and returns the exit code. The `bbcred` binary is a thin wrapper.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace bbcreds::cli

#endif  // BBCREDS_CLI_HPP
