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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dss {

/// Every failure raised by the library carries one of these codes. The CLI maps
/// them to exit codes (see cli.hpp) and the Python module forwards them as the
/// `code` attribute of the raised exception.
enum class ErrorCode {
    // description files
    SyntaxError,
    KindMismatch,
    TypeError,
    GrammarError,
    RangeError,
    UnresolvedRef,
    MappingError,
    // model
    UnknownType,
    ProfileViolation,
    AxisError,
    IndexError,
    DuplicateType,
    ReservedName,
    ShapeError,
    NormError,
    InvalidArgument,
    // storage
    IoError,
    FormatError,
    VersionError,
    UnsupportedFeature,
    // analysis
    DomainError,
    NonUniformGrid,
    SelectionError,
    ProfileError,
    // synth
    WindowError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::string path = {});

    ErrorCode code() const noexcept { return code_; }

    /// Document pointer, file-internal object path, or filesystem path the
    /// error refers to. Empty when not applicable.
    const std::string& path() const noexcept { return path_; }

    /// Message without the code prefix.
    const std::string& detail() const noexcept { return detail_; }

    /// 1-based position in the source text, 0 when unknown.
    int line = 0;
    int column = 0;

private:
    ErrorCode code_;
    std::string path_;
    std::string detail_;
};

[[noreturn]] void fail(ErrorCode code, std::string message, std::string path = {});

} // namespace dss
