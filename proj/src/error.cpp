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

#include "dss/error.hpp"

namespace dss {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::GrammarError: return "GrammarError";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::UnresolvedRef: return "UnresolvedRef";
    case ErrorCode::MappingError: return "MappingError";
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::ProfileViolation: return "ProfileViolation";
    case ErrorCode::AxisError: return "AxisError";
    case ErrorCode::IndexError: return "IndexError";
    case ErrorCode::DuplicateType: return "DuplicateType";
    case ErrorCode::ReservedName: return "ReservedName";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::NormError: return "NormError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::VersionError: return "VersionError";
    case ErrorCode::UnsupportedFeature: return "UnsupportedFeature";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonUniformGrid: return "NonUniformGrid";
    case ErrorCode::SelectionError: return "SelectionError";
    case ErrorCode::ProfileError: return "ProfileError";
    case ErrorCode::WindowError: return "WindowError";
    }
    return "UnknownError";
}

static std::string compose(ErrorCode code, const std::string& message, const std::string& path)
{
    std::string out(to_string(code));
    out += ": ";
    out += message;
    if (!path.empty()) {
        out += " [at ";
        out += path;
        out += "]";
    }
    return out;
}

Error::Error(ErrorCode code, std::string message, std::string path)
    : std::runtime_error(compose(code, message, path)), code_(code), path_(std::move(path)),
      detail_(std::move(message))
{
}

void fail(ErrorCode code, std::string message, std::string path)
{
    throw Error(code, std::move(message), std::move(path));
}

} // namespace dss
