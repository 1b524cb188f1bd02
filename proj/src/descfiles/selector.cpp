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

#include <charconv>
#include <numeric>

namespace dss {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

std::size_t parse_index(std::string_view part, std::string_view raw)
{
    part = trim(part);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size())
        fail(ErrorCode::GrammarError, "channel selector '" + std::string(raw) + "' must be \"k\" or \"a:b\"");
    return v;
}

} // namespace

ChannelSelector parse_channel_selector(std::string_view raw, std::size_t num_channels)
{
    ChannelSelector sel;
    sel.raw = std::string(raw);
    const auto colon = raw.find(':');
    if (colon == std::string_view::npos) {
        const auto k = parse_index(raw, raw);
        if (k >= num_channels)
            fail(ErrorCode::RangeError, "channel " + std::to_string(k) + " is out of range for a source with " +
                                            std::to_string(num_channels) + " channels");
        sel.indices = {k};
        return sel;
    }
    if (raw.find(':', colon + 1) != std::string_view::npos)
        fail(ErrorCode::GrammarError, "channel selector '" + std::string(raw) + "' has more than one ':'");
    const auto a = parse_index(raw.substr(0, colon), raw);
    const auto b = parse_index(raw.substr(colon + 1), raw);
    if (a >= b)
        fail(ErrorCode::RangeError, "channel range '" + std::string(raw) + "' is empty (a:b requires a < b)");
    if (b > num_channels)
        fail(ErrorCode::RangeError, "channel range '" + std::string(raw) + "' exceeds the " +
                                        std::to_string(num_channels) + " channels of the source");
    sel.indices.resize(b - a);
    std::iota(sel.indices.begin(), sel.indices.end(), a);
    return sel;
}

} // namespace dss
