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

#include "generators.hpp"
#include "support.hpp"

#include "dss/analysis.hpp"
#include "dss/descfiles.hpp"
#include "dss/storage.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <regex>

using namespace dss;
using dss::test::Rng;
using dss::test::TempDir;
namespace gen = dss::test;

namespace {

std::optional<ErrorCode> code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

std::string random_channel_selector(Rng& rng)
{
    static const std::string alphabet = "0123456789:  \t-,a";
    std::string s;
    switch (gen::uniform_size(rng, 0, 3)) {
    case 0:
        return std::to_string(gen::uniform_size(rng, 0, 300));
    case 1:
        return std::to_string(gen::uniform_size(rng, 0, 300)) + ":" + std::to_string(gen::uniform_size(rng, 0, 300));
    case 2:
        s = std::string(gen::uniform_size(rng, 0, 2), ' ') + std::to_string(gen::uniform_size(rng, 0, 50)) +
            std::string(gen::uniform_size(rng, 0, 2), '\t') + ":" + std::to_string(gen::uniform_size(rng, 0, 300));
        return s;
    default:
        for (std::size_t i = gen::uniform_size(rng, 0, 7); i > 0; --i)
            s += alphabet[gen::uniform_size(rng, 0, alphabet.size() - 1)];
        return s;
    }
}

// Expected indices or error for a channel selector on `n` channels.
std::variant<std::vector<std::size_t>, ErrorCode> selector_oracle(const std::string& s, std::size_t n)
{
    static const std::regex single(R"(^[ \t]*([0-9]{1,9})[ \t]*$)");
    static const std::regex range(R"(^[ \t]*([0-9]{1,9})[ \t]*:[ \t]*([0-9]{1,9})[ \t]*$)");
    std::smatch m;
    if (std::regex_match(s, m, single)) {
        const auto k = std::stoul(m[1]);
        if (k >= n)
            return ErrorCode::RangeError;
        return std::vector<std::size_t>{k};
    }
    if (std::regex_match(s, m, range)) {
        const auto a = std::stoul(m[1]), b = std::stoul(m[2]);
        if (a >= b || b > n)
            return ErrorCode::RangeError;
        std::vector<std::size_t> v;
        for (auto k = a; k < b; ++k)
            v.push_back(k);
        return v;
    }
    return ErrorCode::GrammarError;
}

// Axes with coordinates keep them ordered, so index lists there are sorted and
// unique.
AxisSelection random_axis_selection(Rng& rng, std::size_t len, bool ordered = false)
{
    switch (gen::uniform_size(rng, 0, 2)) {
    case 0:
        return SelectAll{};
    case 1:
        return gen::uniform_size(rng, 0, len - 1);
    default: {
        std::vector<std::size_t> v(gen::uniform_size(rng, 1, len + 2));
        for (auto& x : v)
            x = gen::uniform_size(rng, 0, len - 1);
        if (ordered) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
        return v;
    }
    }
}

std::vector<std::size_t> strides(const std::vector<std::size_t>& shape)
{
    std::vector<std::size_t> s(shape.size(), 1);
    for (std::size_t i = shape.size(); i-- > 1;)
        s[i - 1] = s[i] * shape[i];
    return s;
}

} // namespace

TEST(Properties, ChannelSelectorMatchesOracle)
{
    Rng rng(1001);
    for (int i = 0; i < 3000; ++i) {
        const auto s = random_channel_selector(rng);
        const auto n = gen::uniform_size(rng, 1, 250);
        const auto expect = selector_oracle(s, n);
        std::optional<ChannelSelector> got;
        const auto err = code_of([&] { got = parse_channel_selector(s, n); });
        if (std::holds_alternative<ErrorCode>(expect)) {
            ASSERT_TRUE(err) << "'" << s << "' n=" << n;
            EXPECT_EQ(*err, std::get<ErrorCode>(expect)) << "'" << s << "' n=" << n;
        } else {
            ASSERT_FALSE(err) << "'" << s << "' n=" << n;
            EXPECT_EQ(got->indices, std::get<std::vector<std::size_t>>(expect)) << s;
            EXPECT_EQ(got->raw, s);
        }
    }
}

TEST(Properties, SliceGathersElements)
{
    Rng rng(1002);
    for (int i = 0; i < 150; ++i) {
        const auto ds = gen::random_dataset(rng, static_cast<std::size_t>(i) % 2);
        SliceSelector sel;
        std::vector<std::vector<std::size_t>> picks;
        for (const auto& a : ds.axes()) {
            const auto s = random_axis_selection(rng, a.length, a.coordinate.has_value());
            sel.set(a.name, s);
            picks.push_back(selected_indices(s, a.length, a.name));
        }
        const auto sub = slice(ds, sel);
        std::vector<std::size_t> shape;
        for (const auto& p : picks)
            shape.push_back(p.size());
        ASSERT_EQ(sub.shape(), shape);
        const auto in_st = strides(ds.shape());
        const auto out_st = strides(shape);
        for (std::size_t flat = 0; flat < sub.size(); ++flat) {
            std::size_t src = 0;
            for (std::size_t d = 0; d < shape.size(); ++d)
                src += picks[d][(flat / out_st[d]) % shape[d]] * in_st[d];
            if (ds.is_complex()) {
                const auto a = sub.complex_data()[flat], b = ds.complex_data()[src];
                const double pa[2] = {a.real(), a.imag()}, pb[2] = {b.real(), b.imag()};
                ASSERT_TRUE(bitwise_equal(pa, pb)) << flat;
            } else {
                ASSERT_TRUE(bitwise_equal(sub.real_data().subspan(flat, 1), ds.real_data().subspan(src, 1)));
            }
        }
        for (std::size_t d = 0; d < shape.size(); ++d) {
            const auto& a = ds.axes()[d];
            if (a.coordinate)
                for (std::size_t k = 0; k < picks[d].size(); ++k)
                    ASSERT_EQ(sub.axes()[d].coordinate->values[k], a.coordinate->values[picks[d][k]]);
            if (auto it = ds.channel_coords().find(a.name); it != ds.channel_coords().end())
                for (std::size_t k = 0; k < picks[d].size(); ++k)
                    for (std::size_t c = 0; c < 3; ++c) {
                        const double x = sub.channel_coords().at(a.name).positions(k, c);
                        const double y = it->second.positions(picks[d][k], c);
                        ASSERT_TRUE(bitwise_equal({&x, 1}, {&y, 1}));
                    }
        }
        ASSERT_EQ(sub.attrs().size(), ds.attrs().size());
        for (const auto& [k, v] : ds.attrs())
            EXPECT_EQ(attr_to_string(sub.attrs().at(k)), attr_to_string(v)) << k;
        EXPECT_EQ(sub.metadata(), ds.metadata());
    }
}

TEST(Properties, SliceAllIsIdentityAndComposes)
{
    Rng rng(1003);
    for (int i = 0; i < 100; ++i) {
        const auto ds = gen::random_dataset(rng, static_cast<std::size_t>(i) % 2);
        EXPECT_EQ(slice(ds, SliceSelector()), ds);
        SliceSelector first, second, composed;
        for (const auto& a : ds.axes()) {
            const auto s1 = random_axis_selection(rng, a.length, a.coordinate.has_value());
            const auto p1 = selected_indices(s1, a.length, a.name);
            const auto s2 = random_axis_selection(rng, p1.size(), a.coordinate.has_value());
            const auto p2 = selected_indices(s2, p1.size(), a.name);
            std::vector<std::size_t> both;
            for (const auto k : p2)
                both.push_back(p1[k]);
            first.set(a.name, s1);
            second.set(a.name, s2);
            composed.set(a.name, both);
        }
        EXPECT_EQ(slice(slice(ds, first), second), slice(ds, composed));
    }
}

TEST(Properties, StorageRoundTrip)
{
    Rng rng(1004);
    TempDir tmp;
    for (int i = 0; i < 60; ++i) {
        const auto ds = gen::random_dataset(rng, static_cast<std::size_t>(i));
        for (const auto fmt : {StorageFormat::hdf5, StorageFormat::netcdf4}) {
            const auto path = tmp / ("rt" + std::to_string(i) + (fmt == StorageFormat::hdf5 ? ".h5" : ".nc"));
            save(ds, path, fmt);
            const auto back = open(path);
            EXPECT_EQ(back.format, fmt);
            ASSERT_TRUE(back.dataset == ds) << "dataset " << i << " " << to_string(fmt);
        }
    }
}

TEST(Properties, EqualityDetectsSingleChanges)
{
    Rng rng(1005);
    for (int i = 0; i < 100; ++i) {
        const auto ds = gen::random_dataset(rng, static_cast<std::size_t>(i) % 2);
        EXPECT_EQ(ds, ds);
        auto changed = ds;
        const auto k = gen::uniform_size(rng, 0, ds.size() - 1);
        // a replacement that differs bitwise, NaN payloads included
        const auto other = [](double v) {
            const double one = 1.0;
            return bitwise_equal({&v, 1}, {&one, 1}) ? 2.0 : 1.0;
        };
        if (ds.is_complex())
            changed.complex_data()[k].real(other(ds.complex_data()[k].real()));
        else
            changed.real_data()[k] = other(ds.real_data()[k]);
        EXPECT_FALSE(changed == ds);
        auto attr = ds;
        attr.set_attr("x_changed", std::int64_t{1});
        EXPECT_FALSE(attr == ds);
    }
}

TEST(Properties, TransformsAreUnitaryInverses)
{
    Rng rng(1006);
    std::normal_distribution<double> g;
    for (int i = 0; i < 60; ++i) {
        const auto n = gen::uniform_size(rng, 1, 300);
        const auto rx = gen::uniform_size(rng, 1, 4);
        const double dt = gen::uniform_real(rng, 0.1e-9, 10e-9);
        const double fc = gen::uniform_real(rng, 1e8, 30e9);
        std::vector<double> tau(n);
        for (std::size_t k = 0; k < n; ++k)
            tau[k] = static_cast<double>(k) * dt;
        auto ds = new_dataset("channel_sounding",
                              {make_axis(AxisKind::tx, 1), make_axis(AxisKind::rx, rx), make_axis(AxisKind::time, 1),
                               make_axis(AxisKind::sample, n, CoordinateVec{tau, "s", CoordSemantics::delay_seconds})},
                              Domain::delay, {{"center_frequency", fc}, {"bandwidth", 1.0 / dt}});
        double e = 0;
        for (auto& v : ds.complex_data()) {
            v = Complex(g(rng), g(rng));
            e += std::norm(v);
        }
        const auto tf = cir_to_tf(ds);
        double e_tf = 0;
        for (const auto& v : tf.complex_data())
            e_tf += std::norm(v);
        EXPECT_NEAR(e_tf / e, 1.0, 1e-9);
        const auto back = tf_to_cir(tf);
        double err = 0;
        for (std::size_t k = 0; k < ds.size(); ++k)
            err += std::norm(back.complex_data()[k] - ds.complex_data()[k]);
        EXPECT_LT(std::sqrt(err / e), 1e-9);
        const auto& f = tf.axis("sample").coordinate->values;
        const double df = 1.0 / (static_cast<double>(n) * dt);
        EXPECT_NEAR(f[n / 2], fc, 1e-6 * df + 1e-9);
        if (n > 1)
            EXPECT_NEAR((f[n - 1] - f[0]) / static_cast<double>(n - 1), df, 1e-9 * df);
    }
}

TEST(Properties, ValidationIsPure)
{
    const auto reg = Registry::load_dir(dss::test::fixture("techtile"));
    const auto a = validate_all(reg);
    const auto b = validate_all(reg);
    EXPECT_EQ(a.items.size(), b.items.size());
    for (std::size_t i = 0; i < a.items.size(); ++i)
        {
        EXPECT_EQ(a.items[i].path, b.items[i].path);
        EXPECT_EQ(a.items[i].code, b.items[i].code);
    }
}
