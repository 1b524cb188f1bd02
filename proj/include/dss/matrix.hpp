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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dss {

/// Dense row-major 2-D table of doubles. Used for channel locations,
/// orientations and hardware-component characterization arrays.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}
    Matrix(std::size_t r, std::size_t c, std::vector<double> v) : rows(r), cols(c), values(std::move(v)) {}

    double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    bool operator==(const Matrix&) const = default;
};

namespace units {

enum class Dimension { length, frequency, time, level };

/// Factor converting a value in `unit` to the SI base unit of `dim`
/// (m, Hz, s, dB). Units outside the interpreted set return nullopt and are
/// carried through verbatim by callers.
std::optional<double> scale_to_si(std::string_view unit, Dimension dim);

/// Dimension of an interpreted unit string, nullopt for anything else.
std::optional<Dimension> dimension_of(std::string_view unit);

} // namespace units
} // namespace dss
