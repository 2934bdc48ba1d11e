//
// Copyright 2026 The dpq Authors
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
//

// Command-line front end: estimate, bench, bounds and verify.

#ifndef DPQ_CLI_H_
#define DPQ_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "dpq/quantiles.h"

namespace dpq {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitBoundPrecondition = 3;

inline constexpr absl::string_view kNonPrivateBanner =
    "*** NON-PRIVATE OUTPUT: --zero-noise disables the privacy noise. "
    "Do not publish these results. ***";

// Parses newline-delimited reals in [0, 1]. Blank lines and lines starting
// with '#' are skipped. Errors carry the 1-based line number.
absl::StatusOr<SortedSample> ParseDataText(absl::string_view text);
absl::StatusOr<SortedSample> LoadDataFile(const std::string& path);

// Runs the command line `args` (args[0] is the program name).
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace dpq

#endif  // DPQ_CLI_H_
