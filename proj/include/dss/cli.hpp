// SPDX-License-Identifier: Apache-2.0
//
// dss: dataset storage standard tooling for 6G testbeds
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// The `dss` command-line tool. Command logic lives in the library so it can
// be driven from tests.

#pragma once

#include "dss/error.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace dss {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1, // validation errors, unresolved references, bad mappings
    kExitUsage = 2,      // bad flags, selections, profiles, domains, ranges
    kExitIo = 3,         // unreadable, malformed or unsupported files
};

/// The documented error-class to exit-code table.
int exit_code_for(ErrorCode code) noexcept;

/// Runs `dss <args...>` (args excludes the program name). Reports go to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dss
