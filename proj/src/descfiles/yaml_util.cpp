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

#include "yaml_util.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

namespace dss::yaml {

namespace {

void flatten_into(const YAML::Node& map, std::vector<Entry>& out, std::vector<YAML::Node>* sources)
{
    std::vector<YAML::Node> merges;
    for (auto it = map.begin(); it != map.end(); ++it) {
        const auto key = it->first.Scalar();
        if (key == "<<" && !is_quoted(it->first)) {
            merges.push_back(it->second);
            continue;
        }
        const bool seen = std::any_of(out.begin(), out.end(), [&](const Entry& e) { return e.key == key; });
        if (!seen)
            out.push_back({key, it->second, it->first});
    }
    for (const auto& m : merges) {
        if (m.IsMap()) {
            if (sources)
                sources->push_back(m);
            flatten_into(m, out, sources);
        } else if (m.IsSequence()) {
            for (const auto& item : m) {
                if (!item.IsMap())
                    continue;
                if (sources)
                    sources->push_back(item);
                flatten_into(item, out, sources);
            }
        }
    }
}

bool is_bare_safe(const std::string& s)
{
    static const std::regex safe(R"(^[A-Za-z0-9_.+\-/]+$)");
    if (s.empty() || !std::regex_match(s, safe))
        return false;
    // leading characters that carry YAML meaning
    return s.front() != '-' || s.size() > 1;
}

std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (unsigned char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (c < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\x%02x", c);
                out += buf;
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    out += '"';
    return out;
}

std::string scalar_text(const YAML::Node& n)
{
    if (n.IsNull())
        return "null";
    const auto& s = n.Scalar();
    if (is_quoted(n) || !is_bare_safe(s))
        return quote(s);
    return s;
}

void emit_block_into(const YAML::Node& node, int indent, std::ostringstream& os);

void emit_value_after_key(const YAML::Node& value, int indent, std::ostringstream& os)
{
    if (value.IsMap() && value.size() > 0) {
        os << "\n";
        emit_block_into(value, indent + 2, os);
    } else if (value.IsSequence() && value.size() > 0) {
        os << "\n";
        emit_block_into(value, indent + 2, os);
    } else {
        os << " " << canonical(value) << "\n";
    }
}

void emit_block_into(const YAML::Node& node, int indent, std::ostringstream& os)
{
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (node.IsMap()) {
        for (auto it = node.begin(); it != node.end(); ++it) {
            os << pad << scalar_text(it->first) << ":";
            emit_value_after_key(it->second, indent, os);
        }
    } else if (node.IsSequence()) {
        for (const auto& item : node) {
            if (item.IsMap() && item.size() > 0) {
                // first key on the dash line, remaining keys aligned under it
                std::ostringstream inner;
                emit_block_into(item, indent + 2, inner);
                auto text = inner.str();
                os << pad << "- " << text.substr(static_cast<std::size_t>(indent) + 2);
            } else if (item.IsSequence() && item.size() > 0) {
                os << pad << "- " << canonical(item) << "\n";
            } else {
                os << pad << "- " << canonical(item) << "\n";
            }
        }
    } else {
        os << pad << canonical(node) << "\n";
    }
}

} // namespace

std::vector<Entry> flatten(const YAML::Node& map, std::vector<YAML::Node>* sources)
{
    std::vector<Entry> out;
    if (map.IsMap())
        flatten_into(map, out, sources);
    return out;
}

YAML::Node lookup(const std::vector<Entry>& entries, std::string_view key)
{
    for (const auto& e : entries)
        if (e.key == key)
            return e.value;
    return YAML::Node(YAML::NodeType::Undefined);
}

std::string canonical(const YAML::Node& node)
{
    if (!node.IsDefined() || node.IsNull())
        return "null";
    if (node.IsScalar())
        return scalar_text(node);
    if (node.IsSequence()) {
        std::string out = "[";
        bool first = true;
        for (const auto& item : node) {
            if (!first)
                out += ", ";
            first = false;
            out += canonical(item);
        }
        return out + "]";
    }
    auto entries = flatten(node);
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.key < b.key; });
    std::string out = "{";
    bool first = true;
    for (const auto& e : entries) {
        if (!first)
            out += ", ";
        first = false;
        out += scalar_text(e.key_node) + ": " + canonical(e.value);
    }
    return out + "}";
}

std::string emit_block(const YAML::Node& node)
{
    std::ostringstream os;
    emit_block_into(node, 0, os);
    return os.str();
}

YAML::Node quoted(const std::string& s)
{
    YAML::Node n(s);
    n.SetTag("!");
    return n;
}

YAML::Node bare(const std::string& s)
{
    YAML::Node n(s);
    n.SetTag("?");
    return n;
}

std::string join(const std::string& base, const std::string& key)
{
    return base.empty() ? key : base + "." + key;
}

std::string join(const std::string& base, std::size_t index)
{
    return base + "[" + std::to_string(index) + "]";
}

std::pair<int, int> position(const YAML::Node& node)
{
    if (!node.IsDefined())
        return {0, 0};
    const auto mark = node.Mark();
    if (mark.is_null())
        return {0, 0};
    return {mark.line + 1, mark.column + 1};
}

void throw_at(ErrorCode code, const std::string& message, const std::string& path, const YAML::Node& node)
{
    Error err(code, message, path);
    const auto [line, col] = position(node);
    err.line = line;
    err.column = col;
    throw err;
}

} // namespace dss::yaml
