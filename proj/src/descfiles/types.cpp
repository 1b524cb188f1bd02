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

#include "dss/descfiles.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <tuple>

namespace dss {

namespace {

constexpr std::array<std::pair<DocKind, std::string_view>, 5> kKindNames{{
    {DocKind::testbed, "testbed"},
    {DocKind::data_source, "data_source"},
    {DocKind::hardware_component, "hardware_component"},
    {DocKind::environment, "environment"},
    {DocKind::experiment, "experiment"},
}};

constexpr std::array<std::pair<ComponentType, std::string_view>, 7> kComponentNames{{
    {ComponentType::antenna, "antenna"},
    {ComponentType::cable, "cable"},
    {ComponentType::amplifier, "amplifier"},
    {ComponentType::filter, "filter"},
    {ComponentType::microphone, "microphone"},
    {ComponentType::sensor, "sensor"},
    {ComponentType::other, "other"},
}};

} // namespace

std::string_view to_string(DocKind kind) noexcept
{
    for (const auto& [k, name] : kKindNames)
        if (k == kind)
            return name;
    return "unknown";
}

std::optional<DocKind> parse_doc_kind(std::string_view text) noexcept
{
    for (const auto& [k, name] : kKindNames)
        if (name == text)
            return k;
    return std::nullopt;
}

std::string_view to_string(ComponentType t) noexcept
{
    for (const auto& [k, name] : kComponentNames)
        if (k == t)
            return name;
    return "other";
}

std::optional<ComponentType> parse_component_type(std::string_view text) noexcept
{
    for (const auto& [k, name] : kComponentNames)
        if (name == text)
            return k;
    return std::nullopt;
}

std::string_view to_string(MediaKind kind) noexcept
{
    switch (kind) {
    case MediaKind::photo: return "photo";
    case MediaKind::video: return "video";
    case MediaKind::scan: return "scan";
    }
    return "photo";
}

std::string SourcePaths::of(const std::string& field) const
{
    if (auto it = fields.find(field); it != fields.end())
        return it->second;
    return self.empty() ? field : self + "." + field;
}

std::optional<double> Quantity::number() const
{
    double v = 0.0;
    const auto* first = value.data();
    const auto* last = value.data() + value.size();
    if (first != last && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last)
        return std::nullopt;
    return v;
}

// ---------------------------------------------------------------------------

void ValidationReport::error(std::string code, std::string path, std::string message, std::string document)
{
    items.push_back({Severity::error, std::move(code), std::move(path), std::move(message), std::move(document)});
}

void ValidationReport::warning(std::string code, std::string path, std::string message, std::string document)
{
    items.push_back({Severity::warning, std::move(code), std::move(path), std::move(message), std::move(document)});
}

void ValidationReport::merge(const ValidationReport& other)
{
    items.insert(items.end(), other.items.begin(), other.items.end());
}

void ValidationReport::canonicalize()
{
    auto key = [](const Issue& i) { return std::tie(i.document, i.path, i.code, i.severity, i.message); };
    std::sort(items.begin(), items.end(), [&](const Issue& a, const Issue& b) { return key(a) < key(b); });
    items.erase(std::unique(items.begin(), items.end()), items.end());
}

std::size_t ValidationReport::error_count() const noexcept
{
    return static_cast<std::size_t>(
        std::count_if(items.begin(), items.end(), [](const Issue& i) { return i.severity == Severity::error; }));
}

std::size_t ValidationReport::warning_count() const noexcept
{
    return items.size() - error_count();
}

bool ValidationReport::has(std::string_view code) const noexcept
{
    return std::any_of(items.begin(), items.end(), [&](const Issue& i) { return i.code == code; });
}

} // namespace dss
