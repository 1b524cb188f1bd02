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

// Hand-rolled random generators shared by the property and acceptance tests.

#pragma once

#include "dss/model.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace dss::test {

using Rng = std::mt19937_64;

inline std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Mostly ordinary values with the occasional bit pattern that text or lossy
// paths would not survive.
inline double awkward_double(Rng& rng)
{
    switch (uniform_size(rng, 0, 19)) {
    case 0:
        return -0.0;
    case 1:
        return std::numeric_limits<double>::denorm_min() * static_cast<double>(uniform_size(rng, 1, 1000));
    case 2:
        return std::numeric_limits<double>::infinity();
    case 3: {
        // NaN with a payload
        std::uint64_t bits = 0x7ff8000000000000ULL | (rng() & 0x0007ffffffffffffULL);
        double d;
        std::memcpy(&d, &bits, sizeof d);
        return d;
    }
    case 4:
        return std::numeric_limits<double>::max();
    default:
        return std::normal_distribution<double>(0.0, 1.0)(rng) * std::pow(10.0, uniform_real(rng, -12, 12));
    }
}

inline std::string random_text(Rng& rng, std::size_t max_len)
{
    static const std::vector<std::string> pieces{"a", "Z", "0", "_", " ", "-", ".", "µ", "é", "→", "测", "\t",
                                                 "\n", "\"", "'", "#", ":", "%", "\\"};
    std::string s;
    const auto n = uniform_size(rng, 1, max_len);
    for (std::size_t i = 0; i < n; ++i)
        s += pieces[uniform_size(rng, 0, pieces.size() - 1)];
    return s;
}

inline std::string random_name(Rng& rng, const char* prefix)
{
    static const char alnum[] = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::string s(prefix);
    const auto n = uniform_size(rng, 1, 6);
    for (std::size_t i = 0; i < n; ++i)
        s += alnum[uniform_size(rng, 0, sizeof alnum - 2)];
    return s;
}

inline Attributes random_attrs(Rng& rng, Attributes base)
{
    const auto n = uniform_size(rng, 0, 4);
    for (std::size_t i = 0; i < n; ++i) {
        const auto key = random_name(rng, "x_");
        switch (uniform_size(rng, 0, 2)) {
        case 0:
            base[key] = static_cast<std::int64_t>(rng());
            break;
        case 1:
            base[key] = awkward_double(rng);
            break;
        default:
            base[key] = random_text(rng, 12);
        }
    }
    return base;
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols)
{
    Matrix m(rows, cols);
    for (auto& v : m.values)
        v = awkward_double(rng);
    return m;
}

inline Matrix unit_quaternions(Rng& rng, std::size_t rows)
{
    Matrix m(rows, 4);
    for (std::size_t r = 0; r < rows; ++r) {
        double n2 = 0;
        for (std::size_t c = 0; c < 4; ++c) {
            m(r, c) = uniform_real(rng, -1, 1) + (c == 0 ? 2.0 : 0.0);
            n2 += m(r, c) * m(r, c);
        }
        const double n = std::sqrt(n2);
        for (std::size_t c = 0; c < 4; ++c)
            m(r, c) /= n;
    }
    return m;
}

inline void add_extras(Rng& rng, DssDataset& ds)
{
    const auto n_meta = uniform_size(rng, 0, 3);
    static const char* kinds[] = {"testbed", "data_source", "hardware_component", "environment", "experiment"};
    for (std::size_t i = 0; i < n_meta; ++i)
        ds.add_metadata({kinds[uniform_size(rng, 0, 4)], random_name(rng, "id"), random_text(rng, 200)});
    if (uniform_size(rng, 0, 2) == 0)
        ds.set_hardware_attribute(random_name(rng, "comp"), random_name(rng, "attr"),
                                  random_matrix(rng, uniform_size(rng, 1, 5), uniform_size(rng, 1, 4)));
}

inline std::vector<double> increasing(Rng& rng, std::size_t n, double start, double step)
{
    std::vector<double> v(n);
    double x = start;
    for (auto& e : v) {
        e = x;
        x += step * uniform_real(rng, 0.5, 1.5);
    }
    return v;
}

inline DssDataset random_channel_sounding(Rng& rng)
{
    const auto tx = uniform_size(rng, 1, 3), rx = uniform_size(rng, 1, 4), t = uniform_size(rng, 1, 3),
               n = uniform_size(rng, 1, 40);
    std::vector<AxisDef> axes{make_axis(AxisKind::tx, tx), make_axis(AxisKind::rx, rx), make_axis(AxisKind::time, t),
                              make_axis(AxisKind::sample, n)};
    const bool freq = uniform_size(rng, 0, 1) == 1;
    if (uniform_size(rng, 0, 3) != 0)
        axes[3].coordinate = freq ? CoordinateVec{increasing(rng, n, 6.9e9, 1e6), "Hz",
                                                  CoordSemantics::frequency_hz_absolute}
                                  : CoordinateVec{increasing(rng, n, 0.0, 1e-9), "s", CoordSemantics::delay_seconds};
    if (uniform_size(rng, 0, 2) == 0)
        axes[2].coordinate = CoordinateVec{increasing(rng, t, 0.0, 0.1), "s", CoordSemantics::time_seconds};
    auto ds = new_dataset("channel_sounding", axes, freq ? Domain::frequency : Domain::delay,
                          random_attrs(rng, {{"center_frequency", uniform_real(rng, 1e9, 1e10)},
                                             {"bandwidth", uniform_real(rng, 1e6, 1e9)}}));
    for (auto& v : ds.complex_data())
        v = Complex(awkward_double(rng), awkward_double(rng));
    if (uniform_size(rng, 0, 1))
        ds.attach_channel_coords("rx", random_matrix(rng, rx, 3),
                                 uniform_size(rng, 0, 1) ? std::optional<Matrix>(unit_quaternions(rng, rx))
                                                         : std::nullopt);
    if (uniform_size(rng, 0, 1))
        ds.attach_channel_coords("tx", random_matrix(rng, tx, 3));
    add_extras(rng, ds);
    return ds;
}

inline DssDataset random_acoustic(Rng& rng)
{
    const auto sp = uniform_size(rng, 1, 3), mic = uniform_size(rng, 1, 5), ch = uniform_size(rng, 1, 2),
               n = uniform_size(rng, 1, 60);
    std::vector<AxisDef> axes{make_axis(AxisKind::speaker, sp), make_axis(AxisKind::microphone, mic),
                              make_axis(AxisKind::channel, ch), make_axis(AxisKind::sample, n)};
    if (uniform_size(rng, 0, 1))
        axes[3].coordinate = CoordinateVec{increasing(rng, n, 0.0, 1.0 / 48e3), "s", CoordSemantics::time_seconds};
    auto ds = new_dataset("acoustic", axes, Domain::time, random_attrs(rng, {{"sampling_rate", 48e3}}));
    for (auto& v : ds.real_data())
        v = awkward_double(rng);
    if (uniform_size(rng, 0, 1))
        ds.attach_channel_coords("microphone", random_matrix(rng, mic, 3), unit_quaternions(rng, mic));
    add_extras(rng, ds);
    return ds;
}

inline DssDataset random_simulation(Rng& rng)
{
    auto ds = new_dataset("simulation", {}, Domain::none, random_attrs(rng, {}));
    const auto runs = uniform_size(rng, 1, 3);
    const auto metrics = uniform_size(rng, 1, 3);
    for (std::size_t r = 0; r < runs; ++r)
        for (std::size_t m = 0; m < metrics; ++m) {
            RaggedSeries s;
            s.run = static_cast<std::int64_t>(r);
            s.metric = "metric" + std::to_string(m);
            s.unit = m == 0 ? "W" : random_text(rng, 4);
            const auto t = increasing(rng, uniform_size(rng, 1, 30), uniform_real(rng, -1, 1), 0.01);
            for (const double x : t)
                s.points.push_back({x, awkward_double(rng)});
            ds.add_series(std::move(s));
        }
    add_extras(rng, ds);
    return ds;
}

// Cycles through the three built-in profiles.
inline DssDataset random_dataset(Rng& rng, std::size_t i)
{
    switch (i % 3) {
    case 0:
        return random_channel_sounding(rng);
    case 1:
        return random_acoustic(rng);
    default:
        return random_simulation(rng);
    }
}

} // namespace dss::test
