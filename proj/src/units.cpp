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

#include "dss/matrix.hpp"

#include <array>
#include <utility>

namespace dss::units {

namespace {

struct UnitEntry {
    std::string_view name;
    Dimension dim;
    double scale;
};

constexpr std::array<UnitEntry, 19> kUnits{{
    {"m", Dimension::length, 1.0},
    {"km", Dimension::length, 1e3},
    {"cm", Dimension::length, 1e-2},
    {"mm", Dimension::length, 1e-3},
    {"um", Dimension::length, 1e-6},
    {"Hz", Dimension::frequency, 1.0},
    {"kHz", Dimension::frequency, 1e3},
    {"MHz", Dimension::frequency, 1e6},
    {"GHz", Dimension::frequency, 1e9},
    {"THz", Dimension::frequency, 1e12},
    {"s", Dimension::time, 1.0},
    {"ms", Dimension::time, 1e-3},
    {"us", Dimension::time, 1e-6},
    {"ns", Dimension::time, 1e-9},
    {"ps", Dimension::time, 1e-12},
    {"dB", Dimension::level, 1.0},
    {"dBm", Dimension::level, 1.0},
    {"dBi", Dimension::level, 1.0},
    {"dBFS", Dimension::level, 1.0},
}};

const UnitEntry* lookup(std::string_view unit)
{
    for (const auto& e : kUnits)
        if (e.name == unit)
            return &e;
    return nullptr;
}

} // namespace

std::optional<double> scale_to_si(std::string_view unit, Dimension dim)
{
    const auto* e = lookup(unit);
    if (e == nullptr || e->dim != dim)
        return std::nullopt;
    return e->scale;
}

std::optional<Dimension> dimension_of(std::string_view unit)
{
    const auto* e = lookup(unit);
    if (e == nullptr)
        return std::nullopt;
    return e->dim;
}

} // namespace dss::units
