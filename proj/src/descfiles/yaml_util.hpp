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

// Internal YAML helpers shared by the description-file parser, serializer
// and source locator.

#pragma once

#include "dss/error.hpp"

#include <yaml-cpp/yaml.h>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dss::yaml {

struct Entry {
    std::string key;
    YAML::Node value;
    YAML::Node key_node;
};

/// Entries of a mapping with merge keys (`<<`) applied: explicit keys win over
/// merged ones, and earlier maps in a merge sequence win over later ones.
/// Merge sources are appended to `sources` when given.
std::vector<Entry> flatten(const YAML::Node& map, std::vector<YAML::Node>* sources = nullptr);

/// Looks up `key` in a flattened mapping; returns an undefined node if absent.
YAML::Node lookup(const std::vector<Entry>& entries, std::string_view key);

/// True for scalars written with quotes (a YAML string, never a number).
inline bool is_quoted(const YAML::Node& n) { return n.Tag() == "!"; }

/// Deterministic single-line YAML: flow style, mapping keys sorted, merge keys
/// applied, quoted scalars kept quoted.
std::string canonical(const YAML::Node& node);

/// Block-style emitter. String scalars carrying tag "!" are double-quoted.
std::string emit_block(const YAML::Node& node);

/// Scalar node that emits double-quoted.
YAML::Node quoted(const std::string& s);
/// Scalar node that emits bare.
YAML::Node bare(const std::string& s);

std::string join(const std::string& base, const std::string& key);
std::string join(const std::string& base, std::size_t index);

/// 1-based source position of a node (0 when unknown).
std::pair<int, int> position(const YAML::Node& node);

[[noreturn]] void throw_at(ErrorCode code, const std::string& message, const std::string& path,
                           const YAML::Node& node);

} // namespace dss::yaml
