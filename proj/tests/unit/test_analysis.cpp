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

#include "dss/analysis.hpp"
#include "dss/synth.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace dss;
using dss::test::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no dss::Error thrown";
    return ErrorCode::InvalidArgument;
}

DssDataset delay_dataset(std::size_t rx, std::size_t n, double bw = 1e9, double fc = 6.95e9, double tau0 = 0.0)
{
    std::vector<double> tau(n);
    for (std::size_t k = 0; k < n; ++k)
        tau[k] = tau0 + static_cast<double>(k) / bw;
    std::vector<AxisDef> axes{make_axis(AxisKind::tx, 1), make_axis(AxisKind::rx, rx), make_axis(AxisKind::time, 1),
                              make_axis(AxisKind::sample, n, CoordinateVec{tau, "s", CoordSemantics::delay_seconds})};
    return new_dataset("channel_sounding", axes, Domain::delay,
                       {{"center_frequency", fc}, {"bandwidth", bw}});
}

DssDataset random_delay_dataset(Rng& rng, std::size_t rx, std::size_t n)
{
    auto ds = delay_dataset(rx, n);
    std::normal_distribution<double> g;
    for (auto& v : ds.complex_data())
        v = Complex(g(rng), g(rng));
    return ds;
}

double l2(std::span<const Complex> v)
{
    double s = 0;
    for (const auto& z : v)
        s += std::norm(z);
    return std::sqrt(s);
}

double rel_l2(std::span<const Complex> a, std::span<const Complex> b)
{
    double num = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        num += std::norm(a[i] - b[i]);
    return std::sqrt(num) / l2(b);
}

// Direct evaluation of the centered unitary DFT along the last axis.
std::vector<Complex> naive_tf(std::span<const Complex> x, std::size_t n)
{
    std::vector<Complex> out(x.size());
    const auto half = static_cast<long>(n / 2);
    for (std::size_t row = 0; row < x.size() / n; ++row)
        for (std::size_t j = 0; j < n; ++j) {
            const long k = static_cast<long>(j) - half;
            Complex acc = 0;
            for (std::size_t m = 0; m < n; ++m) {
                const double ang = -2.0 * kPi * static_cast<double>((k * static_cast<long>(m)) % static_cast<long>(n)) /
                                   static_cast<double>(n);
                acc += x[row * n + m] * Complex(std::cos(ang), std::sin(ang));
            }
            out[row * n + j] = acc / std::sqrt(static_cast<double>(n));
        }
    return out;
}

// Least-squares slope of y over x.
double slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

double raised_cosine(double f, double B, double beta)
{
    const double rs = B / (1.0 + beta);
    const double a = std::abs(f);
    if (a <= (1.0 - beta) * rs / 2.0)
        return 1.0;
    if (a > (1.0 + beta) * rs / 2.0)
        return 0.0;
    return 0.5 * (1.0 + std::cos(kPi / (beta * rs) * (a - (1.0 - beta) * rs / 2.0)));
}

std::size_t argmax_abs(std::span<const Complex> v)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best]))
            best = i;
    return best;
}

} // namespace

// ---------------------------------------------------------------------------

TEST(CirToTf, ImpulseIsFlat)
{
    auto ds = delay_dataset(1, 64);
    ds.complex_data()[0] = 1.0;
    const auto tf = cir_to_tf(ds);
    EXPECT_EQ(tf.domain(), Domain::frequency);
    const auto& f = tf.axis("sample").coordinate;
    ASSERT_TRUE(f);
    EXPECT_EQ(f->semantics, CoordSemantics::frequency_hz_absolute);
    EXPECT_EQ(f->unit, "Hz");
    const double df = 1.0 / (64 * 1e-9);
    for (std::size_t j = 0; j < 64; ++j) {
        EXPECT_NEAR(std::abs(tf.complex_data()[j]), 1.0 / 8.0, 1e-15);
        EXPECT_NEAR(f->values[j], 6.95e9 + (static_cast<double>(j) - 32.0) * df, 1e-3);
    }
}

TEST(CirToTf, MatchesNaiveDft)
{
    Rng rng(11);
    for (const std::size_t n : {1u, 2u, 7u, 16u, 45u}) {
        const auto ds = random_delay_dataset(rng, 3, n);
        const auto tf = cir_to_tf(ds);
        const auto ref = naive_tf(ds.complex_data(), n);
        EXPECT_LT(rel_l2(tf.complex_data(), ref), 1e-12) << n;
    }
}

TEST(CirToTf, ParsevalRoundTripLinearity)
{
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = random_delay_dataset(rng, 2, 128 + static_cast<std::size_t>(trial));
        const auto y = random_delay_dataset(rng, 2, 128 + static_cast<std::size_t>(trial));
        const auto tx = cir_to_tf(x);
        EXPECT_NEAR(l2(tx.complex_data()) / l2(x.complex_data()), 1.0, 1e-12);
        EXPECT_LT(rel_l2(tf_to_cir(tx).complex_data(), x.complex_data()), 1e-12);
        const auto back = tf_to_cir(tx);
        const auto& t_back = back.axis("sample").coordinate->values;
        const auto& t_orig = x.axis("sample").coordinate->values;
        for (std::size_t k = 0; k < t_orig.size(); ++k)
            ASSERT_NEAR(t_back[k], t_orig[k], 1e-21);

        const Complex a(0.3, -1.2), b(-2.0, 0.5);
        auto combo = x;
        for (std::size_t i = 0; i < combo.size(); ++i)
            combo.complex_data()[i] = a * x.complex_data()[i] + b * y.complex_data()[i];
        const auto ty = cir_to_tf(y);
        std::vector<Complex> expect(combo.size());
        for (std::size_t i = 0; i < expect.size(); ++i)
            expect[i] = a * tx.complex_data()[i] + b * ty.complex_data()[i];
        EXPECT_LT(rel_l2(cir_to_tf(combo).complex_data(), expect), 1e-12);
    }
}

TEST(CirToTf, SinglePathPhaseSlope)
{
    auto spec = fig4_preset();
    spec.rx = {{3.0 + 0.0123, 0.0, 1.0}};
    spec.model.noise_std = 0.0;
    const auto ds = gen_channel_sounding(spec);
    const double tau0 = std::hypot(3.0123, 0.0) / kSpeedOfLight;
    const auto [mag, phase] = plot_tf(ds, parse_slice_selector("tx=0,rx=0,t=0"));
    const auto un = unwrap(phase.series[0].values);
    const double s = slope(phase.x.values, un);
    EXPECT_NEAR(s / (-2.0 * kPi * tau0), 1.0, 1e-6);
}

TEST(CirToTf, DelayOriginIsKept)
{
    auto ds = delay_dataset(1, 32, 1e9, 6.95e9, 50e-9);
    Rng rng(9);
    std::normal_distribution<double> g;
    for (auto& v : ds.complex_data())
        v = Complex(g(rng), g(rng));
    const auto back = tf_to_cir(cir_to_tf(ds));
    EXPECT_LT(rel_l2(back.complex_data(), ds.complex_data()), 1e-12);
    const auto& t0 = back.axis("sample").coordinate->values;
    for (std::size_t k = 0; k < 32; ++k)
        EXPECT_NEAR(t0[k], ds.axis("sample").coordinate->values[k], 1e-21);
}

TEST(TfToCir, ConstantTfIsImpulse)
{
    auto tf = cir_to_tf(delay_dataset(1, 16));
    for (auto& v : tf.complex_data())
        v = 1.0;
    const auto cir = tf_to_cir(tf);
    EXPECT_NEAR(std::abs(cir.complex_data()[0] - Complex(4.0, 0)), 0.0, 1e-14);
    for (std::size_t k = 1; k < 16; ++k)
        EXPECT_NEAR(std::abs(cir.complex_data()[k]), 0.0, 1e-14);
}

TEST(Transforms, DomainAndGridErrors)
{
    const auto ds = delay_dataset(1, 8);
    const auto tf = cir_to_tf(ds);
    EXPECT_EQ(code_of([&] { cir_to_tf(tf); }), ErrorCode::DomainError);
    EXPECT_EQ(code_of([&] { tf_to_cir(ds); }), ErrorCode::DomainError);
    auto bent = tf;
    auto coord = *bent.axis("sample").coordinate;
    coord.values[5] += 0.3 * (coord.values[6] - coord.values[5]);
    bent.set_coordinate("sample", coord);
    EXPECT_EQ(code_of([&] { tf_to_cir(bent); }), ErrorCode::NonUniformGrid);
    auto bent_delay = ds;
    auto dc = *bent_delay.axis("sample").coordinate;
    dc.values[3] += 0.2e-9;
    bent_delay.set_coordinate("sample", dc);
    EXPECT_EQ(code_of([&] { cir_to_tf(bent_delay); }), ErrorCode::NonUniformGrid);
}

// ---------------------------------------------------------------------------

TEST(SelectBand, FullBandIsIdentity)
{
    Rng rng(3);
    const auto tf = cir_to_tf(random_delay_dataset(rng, 2, 1024));
    // the nominal band [fc - B/2, fc + B/2]
    EXPECT_EQ(select_band(tf, 6.95e9 - 0.5e9, 6.95e9 + 0.5e9), tf);
    const auto& f = tf.axis("sample").coordinate->values;
    const auto edges = select_band(tf, f.front(), f.back());
    EXPECT_EQ(edges.size(), tf.size());
    EXPECT_EQ(edges.complex_data()[0], tf.complex_data()[0]);
}

TEST(SelectBand, Fig4SubBand)
{
    Rng rng(4);
    const auto tf = cir_to_tf(random_delay_dataset(rng, 1, 1024));
    const auto sub = select_band(tf, 6.7e9, 7.2e9);
    const auto n = sub.axis("sample").length;
    // both band edges fall on bins: 512 intervals, 513 bins
    EXPECT_EQ(n, 513u);
    EXPECT_NEAR(static_cast<double>(n) / 1024.0, 0.5, 1.0 / 1024.0 + 1e-12);
    EXPECT_EQ(*attr_number(sub.attrs(), "center_frequency"), 6.95e9);
    EXPECT_EQ(*attr_number(sub.attrs(), "bandwidth"), 0.5e9);
    const auto& f = sub.axis("sample").coordinate->values;
    EXPECT_GE(f.front(), 6.7e9 - 1e-3);
    EXPECT_LE(f.back(), 7.2e9 + 1e-3);
    // values are the original bins
    const auto& f0 = tf.axis("sample").coordinate->values;
    const auto first = static_cast<std::size_t>(std::find(f0.begin(), f0.end(), f.front()) - f0.begin());
    for (std::size_t k = 0; k < n; ++k)
        EXPECT_EQ(sub.complex_data()[k], tf.complex_data()[first + k]);
}

TEST(SelectBand, IdempotentAndErrors)
{
    Rng rng(6);
    const auto tf = cir_to_tf(random_delay_dataset(rng, 1, 256));
    const auto once = select_band(tf, 6.8e9, 7.05e9);
    EXPECT_EQ(select_band(once, 6.8e9, 7.05e9), once);
    EXPECT_EQ(code_of([&] { select_band(tf, 8e9, 9e9); }), ErrorCode::RangeError);
    EXPECT_EQ(code_of([&] { select_band(tf, 7e9, 6.9e9); }), ErrorCode::RangeError);
    EXPECT_EQ(code_of([&] { select_band(tf, 6e9, 7e9); }), ErrorCode::RangeError);
    EXPECT_EQ(code_of([&] { select_band(tf_to_cir(tf), 6.8e9, 7e9); }), ErrorCode::DomainError);
}

TEST(ReduceBandwidth, IdentityAndErrors)
{
    Rng rng(8);
    const auto ds = random_delay_dataset(rng, 2, 64);
    const auto same = reduce_bandwidth(ds, 1e9);
    EXPECT_EQ(same.domain(), Domain::delay);
    EXPECT_LT(rel_l2(same.complex_data(), ds.complex_data()), 1e-12);
    EXPECT_EQ(code_of([&] { reduce_bandwidth(ds, 0.0); }), ErrorCode::RangeError);
    EXPECT_EQ(code_of([&] { reduce_bandwidth(ds, 2e9); }), ErrorCode::RangeError);
    const auto tf = cir_to_tf(ds);
    EXPECT_EQ(reduce_bandwidth(tf, 0.25e9).domain(), Domain::frequency);
}

TEST(ReduceBandwidth, TwoPathsStayAtTrueDelays)
{
    ChannelSoundingSpec spec;
    spec.tx = {{0, 0, 0}};
    spec.rx = {{0, 0, 0}};
    spec.fc = 6.95e9;
    spec.fs = 1e9;
    spec.n_samples = 1024;
    spec.model.los = false;
    const double t1 = 100.3e-9, t2 = 400.7e-9;
    spec.model.paths = {{t1, Complex(1.0, 0.0)}, {t2, Complex(0.0, 0.8)}};
    const auto full = gen_channel_sounding(spec);
    const auto narrow = reduce_bandwidth(full, 100e6);
    EXPECT_EQ(narrow.domain(), Domain::delay);
    const auto& tau = narrow.axis("sample").coordinate->values;
    const double dt = tau[1] - tau[0];
    EXPECT_GT(dt, 9e-9);
    const auto h = narrow.complex_data();
    for (const double t : {t1, t2}) {
        // strongest sample within +-5 samples of the true delay
        std::size_t best = 0;
        double best_mag = -1;
        for (std::size_t k = 0; k < tau.size(); ++k)
            if (std::abs(tau[k] - t) < 5 * dt && std::abs(h[k]) > best_mag) {
                best_mag = std::abs(h[k]);
                best = k;
            }
        EXPECT_LE(std::abs(tau[best] - t), dt) << t;
    }
    // broader pulse: fewer samples per unit delay, same energy share
    EXPECT_LT(narrow.axis("sample").length, full.axis("sample").length);
}

TEST(Oversample, IdentityStrideAndComposition)
{
    Rng rng(12);
    const auto ds = random_delay_dataset(rng, 2, 50);
    EXPECT_EQ(oversample(ds, 1), ds);
    const auto x4 = oversample(ds, 4);
    EXPECT_EQ(x4.axis("sample").length, 200u);
    double num = 0, den = 0;
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t k = 0; k < 50; ++k) {
            num += std::norm(x4.complex_data()[r * 200 + 4 * k] - ds.complex_data()[r * 50 + k]);
            den += std::norm(ds.complex_data()[r * 50 + k]);
        }
    EXPECT_LT(std::sqrt(num / den), 1e-12);
    const auto& tau = x4.axis("sample").coordinate->values;
    EXPECT_NEAR(tau[4] - tau[0], 1e-9, 1e-21);

    const auto odd = random_delay_dataset(rng, 1, 33);
    EXPECT_LT(rel_l2(oversample(oversample(odd, 2), 3).complex_data(), oversample(odd, 6).complex_data()), 1e-9);
    EXPECT_LT(rel_l2(oversample(ds, 6).complex_data(), oversample(oversample(ds, 3), 2).complex_data()), 1e-9);
}

TEST(Oversample, RefinesSinglePathPeak)
{
    auto spec = fig4_preset();
    spec.rx = {{3.0 + 0.0137, 0.0, 1.0}};
    spec.model.noise_std = 0.0;
    const auto ds = gen_channel_sounding(spec);
    const double tau0 = (3.0137) / kSpeedOfLight;
    const auto x4 = oversample(ds, 4);
    const auto& tau = x4.axis("sample").coordinate->values;
    const auto k = argmax_abs(x4.complex_data());
    EXPECT_LE(std::abs(tau[k] - tau0), 1e-9 / 4);
}

TEST(Oversample, Errors)
{
    const auto ds = delay_dataset(1, 8);
    EXPECT_EQ(code_of([&] { oversample(ds, 0); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([&] { oversample(cir_to_tf(ds), 2); }), ErrorCode::DomainError);
}

TEST(Oversample, RealTimeDomainInput)
{
    AcousticSpec spec;
    spec.speakers = {{0, 0, 0}};
    spec.microphones = {{1.0, 0, 0}};
    spec.n_samples = 300;
    const auto ds = gen_acoustic(spec);
    const auto x2 = oversample(ds, 2);
    EXPECT_FALSE(x2.is_complex());
    EXPECT_EQ(x2.axis("sample").length, 600u);
    EXPECT_EQ(*attr_number(x2.attrs(), "sampling_rate"), 96e3);
    for (std::size_t k = 0; k < 300; ++k)
        EXPECT_NEAR(x2.real_data()[2 * k], ds.real_data()[k], 1e-12);
}

// ---------------------------------------------------------------------------

TEST(PulseShaping, RectangularFullBandIsIdentity)
{
    Rng rng(21);
    const auto tf = cir_to_tf(random_delay_dataset(rng, 2, 128));
    const auto out = apply_pulse_shaping(tf, {PulseKind::rectangular, 0.0, 1e9});
    ASSERT_EQ(out.size(), tf.size());
    for (std::size_t i = 0; i < tf.size(); ++i)
        EXPECT_EQ(out.complex_data()[i], tf.complex_data()[i]);
    EXPECT_EQ(std::get<std::string>(out.attrs().at("pulse_shape")), "rectangular");
}

TEST(PulseShaping, RaisedCosineClosedForm)
{
    auto tf = cir_to_tf(delay_dataset(1, 256));
    for (auto& v : tf.complex_data())
        v = 1.0;
    const double B = 1e9, beta = 0.25;
    const auto out = apply_pulse_shaping(tf, {PulseKind::raised_cosine, beta, B});
    const auto& f = out.axis("sample").coordinate->values;
    for (std::size_t k = 0; k < 256; ++k) {
        EXPECT_NEAR(out.complex_data()[k].real(), raised_cosine(f[k] - 6.95e9, B, beta), 1e-12) << k;
        EXPECT_EQ(out.complex_data()[k].imag(), 0.0);
    }
    const auto rrc = apply_pulse_shaping(tf, {PulseKind::root_raised_cosine, beta, B});
    for (std::size_t k = 0; k < 256; ++k)
        EXPECT_NEAR(std::norm(rrc.complex_data()[k]), raised_cosine(f[k] - 6.95e9, B, beta), 1e-12);
    for (const double x : {-6e8, -4e8, -3.9e8, 0.0, 2e8, 3.5e8, 5e8})
        EXPECT_NEAR(pulse_response({PulseKind::raised_cosine, beta, B}, x), raised_cosine(x, B, beta), 1e-15) << x;
}

TEST(PulseShaping, Errors)
{
    const auto tf = cir_to_tf(delay_dataset(1, 16));
    EXPECT_EQ(code_of([&] { apply_pulse_shaping(tf, {PulseKind::raised_cosine, 0.2, 2e9}); }), ErrorCode::RangeError);
    EXPECT_EQ(code_of([&] { apply_pulse_shaping(tf, {PulseKind::raised_cosine, 1.5, 1e9}); }), ErrorCode::RangeError);
    EXPECT_EQ(code_of([&] { apply_pulse_shaping(tf_to_cir(tf), {PulseKind::rectangular, 0, 1e9}); }),
              ErrorCode::DomainError);
    EXPECT_EQ(parse_pulse_kind("rrc"), PulseKind::root_raised_cosine);
    EXPECT_EQ(parse_pulse_kind("raised_cosine"), PulseKind::raised_cosine);
    EXPECT_EQ(parse_pulse_kind("gaussian"), std::nullopt);
}

TEST(Deembed, DividesStoredResponse)
{
    Rng rng(30);
    auto tf = cir_to_tf(random_delay_dataset(rng, 1, 64));
    const auto& f = tf.axis("sample").coordinate->values;
    // linear-in-frequency complex gain, sampled coarsely; interpolation is exact
    auto gain = [](double x) { return Complex(2.0 + (x - 6.95e9) * 1e-9, 0.5 - (x - 6.95e9) * 2e-10); };
    Matrix resp(5, 3);
    for (std::size_t i = 0; i < 5; ++i) {
        const double x = 6.4e9 + 0.275e9 * static_cast<double>(i);
        resp(i, 0) = x;
        resp(i, 1) = gain(x).real();
        resp(i, 2) = gain(x).imag();
    }
    auto measured = tf;
    for (std::size_t k = 0; k < 64; ++k)
        measured.complex_data()[k] *= gain(f[k]);
    measured.set_hardware_attribute("pa", "frequency_response", resp);
    const auto out = deembed(measured, {"pa"});
    EXPECT_LT(rel_l2(out.complex_data(), tf.complex_data()), 1e-12);

    EXPECT_EQ(code_of([&] { deembed(measured, {"missing"}); }), ErrorCode::InvalidArgument);
    Matrix narrow = resp;
    narrow(0, 0) = 6.6e9;
    measured.set_hardware_attribute("narrow", "frequency_response", narrow);
    EXPECT_EQ(code_of([&] { deembed(measured, {"narrow"}); }), ErrorCode::RangeError);
    Matrix zero(2, 3, {6e9, 0, 0, 8e9, 0, 0});
    measured.set_hardware_attribute("dead", "frequency_response", zero);
    EXPECT_EQ(code_of([&] { deembed(measured, {"dead"}); }), ErrorCode::RangeError);
}

// ---------------------------------------------------------------------------

TEST(PlotCr, FourReceiversOf140)
{
    Rng rng(40);
    std::vector<AxisDef> axes{make_axis(AxisKind::tx, 1), make_axis(AxisKind::rx, 140), make_axis(AxisKind::time, 2),
                              make_axis(AxisKind::sample, 32)};
    auto ds = new_dataset("channel_sounding", axes, Domain::delay, {{"center_frequency", 6.95e9}, {"bandwidth", 1e9}});
    std::normal_distribution<double> g;
    for (auto& v : ds.complex_data())
        v = Complex(g(rng), g(rng));
    const auto before = ds;
    const auto p = plot_cr(ds, parse_slice_selector("(tx=0, rx=[0,1,2,3], t=1)"));
    EXPECT_EQ(ds, before);
    EXPECT_EQ(p.kind, PlotKind::time_complex);
    ASSERT_EQ(p.series.size(), 4u);
    EXPECT_EQ(p.x.values.size(), 32u);
    EXPECT_EQ(p.x.unit, "s");
    for (std::size_t r = 0; r < 4; ++r) {
        EXPECT_EQ(p.series[r].label, "rx=" + std::to_string(r));
        for (std::size_t k = 0; k < 32; ++k) {
            const auto z = ds.complex_data()[((0 * 140 + r) * 2 + 1) * 32 + k];
            EXPECT_EQ(p.series[r].values[k], z.real());
            EXPECT_EQ(p.series[r].imag[k], z.imag());
        }
    }
    const auto one = plot_cr(ds, parse_slice_selector("tx=0,rx=[5],t=0"));
    ASSERT_EQ(one.series.size(), 1u);
    EXPECT_EQ(one.series[0].values.size(), 32u);
}

TEST(PlotCr, SelectionRules)
{
    auto spec = fig4_preset();
    spec.tx.push_back({0, 1, 1});
    spec.n_time = 2;
    const auto ds = gen_channel_sounding(spec);
    EXPECT_EQ(code_of([&] { plot_cr(ds, parse_slice_selector("tx=[0,1],t=0")); }), ErrorCode::SelectionError);
    EXPECT_EQ(code_of([&] { plot_cr(ds, parse_slice_selector("tx=0")); }), ErrorCode::SelectionError);
    EXPECT_EQ(code_of([&] { plot_cr(ds, parse_slice_selector("tx=0,t=0,sample=0:4")); }), ErrorCode::SelectionError);
    EXPECT_EQ(code_of([&] { plot_cr(ds, parse_slice_selector("tx=0,t=0,rx=9")); }), ErrorCode::IndexError);
    const auto single = gen_channel_sounding(fig4_preset());
    EXPECT_EQ(plot_cr(single, SliceSelector()).series.size(), 4u);
    AcousticSpec ac;
    ac.speakers = {{0, 0, 0}};
    ac.microphones = {{1, 0, 0}};
    EXPECT_EQ(code_of([&] { plot_cr(gen_acoustic(ac), SliceSelector()); }), ErrorCode::ProfileError);
}

TEST(PlotCr, FrequencyInputIsConverted)
{
    const auto ds = gen_channel_sounding(fig4_preset());
    const auto direct = plot_cr(ds, parse_slice_selector("tx=0,t=0"));
    const auto via = plot_cr(cir_to_tf(ds), parse_slice_selector("tx=0,t=0"));
    EXPECT_NE(via.title.find("converted from frequency domain"), std::string::npos);
    EXPECT_EQ(direct.title.find("converted"), std::string::npos);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t k = 0; k < 1024; ++k)
            EXPECT_NEAR(via.series[r].values[k], direct.series[r].values[k], 1e-12);
}

TEST(PlotTf, FlatUnitTransferFunction)
{
    auto tf = cir_to_tf(delay_dataset(4, 32));
    for (auto& v : tf.complex_data())
        v = 1.0;
    const auto [mag, phase] = plot_tf(tf, parse_slice_selector("tx=0,t=0"));
    EXPECT_EQ(mag.kind, PlotKind::magnitude_db);
    EXPECT_EQ(phase.kind, PlotKind::phase_rad);
    ASSERT_EQ(mag.series.size(), 4u);
    ASSERT_EQ(phase.series.size(), 4u);
    EXPECT_EQ(mag.x.unit, "Hz");
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t k = 0; k < 32; ++k) {
            EXPECT_EQ(mag.series[r].values[k], 0.0);
            EXPECT_EQ(phase.series[r].values[k], 0.0);
        }
}

TEST(PlotTf, FloorAndWrapping)
{
    auto tf = cir_to_tf(delay_dataset(1, 8));
    tf.complex_data()[0] = 0.0;
    tf.complex_data()[1] = Complex(-1.0, -0.0);
    tf.complex_data()[2] = Complex(-1.0, 0.0);
    tf.complex_data()[3] = Complex(1e-200, 0.0);
    const auto [mag, phase] = plot_tf(tf, SliceSelector());
    EXPECT_EQ(mag.series[0].values[0], kDbFloor);
    EXPECT_EQ(mag.series[0].values[3], kDbFloor);
    EXPECT_EQ(phase.series[0].values[1], kPi);
    EXPECT_EQ(phase.series[0].values[2], kPi);
    for (const double p : phase.series[0].values) {
        EXPECT_GT(p, -kPi);
        EXPECT_LE(p, kPi);
    }
}

TEST(PlotRir, NotebookCallShape)
{
    AcousticSpec spec;
    spec.speakers = {{0, 0, 1}, {1, 0, 1}};
    for (int m = 0; m < 16; ++m)
        spec.microphones.push_back({0.2 * m, 2.0, 0.5});
    spec.n_samples = 2000;
    const auto ds = gen_acoustic(spec);
    const auto p = plot_rir(ds, parse_slice_selector("sp=1,mic=14,ch=0"));
    ASSERT_EQ(p.series.size(), 1u);
    EXPECT_EQ(p.series[0].label, "sp=1 mic=14 ch=0");
    EXPECT_EQ(p.kind, PlotKind::rir_amplitude);
    EXPECT_EQ(p.x.values.size(), 2000u);
    for (std::size_t k = 0; k < 2000; ++k)
        EXPECT_EQ(p.series[0].values[k], ds.real_data()[(1 * 16 + 14) * 2000 + k]);
    EXPECT_EQ(code_of([&] { plot_rir(ds, parse_slice_selector("sp=1,mic=14,ch=3")); }), ErrorCode::IndexError);
    EXPECT_EQ(code_of([&] { plot_rir(ds, parse_slice_selector("mic=14,ch=0")); }), ErrorCode::SelectionError);
    EXPECT_EQ(code_of([&] { plot_rir(gen_channel_sounding(fig4_preset()), SliceSelector()); }),
              ErrorCode::ProfileError);
}

TEST(PlotRir, ZeroDataset)
{
    std::vector<AxisDef> axes{make_axis(AxisKind::speaker, 1), make_axis(AxisKind::microphone, 1),
                              make_axis(AxisKind::channel, 1), make_axis(AxisKind::sample, 10)};
    const auto ds = new_dataset("acoustic", axes, Domain::time, {{"sampling_rate", 48e3}});
    const auto p = plot_rir(ds, parse_slice_selector("sp=0,mic=0,ch=0"));
    for (const double v : p.series[0].values)
        EXPECT_EQ(v, 0.0);
    EXPECT_NEAR(p.x.values[1], 1.0 / 48e3, 1e-18);
}

// ---------------------------------------------------------------------------

TEST(Render, CsvShape)
{
    PlotSeries s{"t", {"time", "s", {0.0, 0.5, 1.0}}, {{"a", {1.0, 2.0, 3.0}, {}}}, PlotKind::rir_amplitude};
    const auto csv = render(s, RenderFormat::csv);
    EXPECT_EQ(csv, "x(s),a\n0,1\n0.5,2\n1,3\n");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Render, ComplexCsvColumnsAndPrecision)
{
    PlotSeries s{"t", {"delay", "s", {1e-9}}, {{"rx=0", {0.1}, {-1.0 / 3.0}}}, PlotKind::time_complex};
    EXPECT_EQ(render(s, RenderFormat::csv),
              "x(s),rx=0 re,rx=0 im\n1.0000000000000001e-09,0.10000000000000001,-0.33333333333333331\n");
}

TEST(Render, DeterministicAndWellFormedSvg)
{
    const auto ds = gen_channel_sounding(fig4_preset(7));
    const auto [mag, phase] = plot_tf(ds, parse_slice_selector("tx=0,rx=0:4,t=0"));
    for (const auto* s : {&mag, &phase}) {
        const auto a = render(*s, RenderFormat::svg);
        const auto b = render(*s, RenderFormat::svg);
        EXPECT_EQ(a, b);
        std::istringstream in(a);
        boost::property_tree::ptree tree;
        ASSERT_NO_THROW(boost::property_tree::read_xml(in, tree));
        const auto& svg = tree.get_child("svg");
        EXPECT_EQ(svg.get<std::string>("<xmlattr>.viewBox"), "0 0 960 540");
        std::size_t polylines = 0;
        for (const auto& [name, child] : svg)
            if (name == "polyline")
                ++polylines;
        EXPECT_EQ(polylines, 4u);
        EXPECT_EQ(a.find("href"), std::string::npos);
    }
    const auto cr = render(plot_cr(ds, parse_slice_selector("tx=0,rx=0:4,t=0")), RenderFormat::svg);
    EXPECT_EQ(cr, render(plot_cr(ds, parse_slice_selector("tx=0,rx=0:4,t=0")), RenderFormat::svg));
}

TEST(Render, InvalidSeries)
{
    PlotSeries s{"t", {"x", "s", {0.0, 1.0}}, {{"a", {1.0}, {}}}, PlotKind::rir_amplitude};
    EXPECT_EQ(code_of([&] { render(s, RenderFormat::csv); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([&] { render(s, RenderFormat::svg); }), ErrorCode::InvalidArgument);
}

TEST(Render, UnwrapOption)
{
    const std::vector<double> wrapped{3.0, -3.0, -2.9, 3.1};
    const auto un = unwrap(wrapped);
    EXPECT_NEAR(un[1], -3.0 + 2 * kPi, 1e-15);
    EXPECT_NEAR(un[2], -2.9 + 2 * kPi, 1e-15);
    EXPECT_NEAR(un[3], 3.1, 1e-15);
    PlotSeries s{"p", {"frequency", "Hz", {1, 2, 3, 4}}, {{"rx=0", wrapped, {}}}, PlotKind::phase_rad};
    const auto plain = render(s, RenderFormat::csv);
    const auto unwrapped = render(s, RenderFormat::csv, {true});
    EXPECT_NE(plain, unwrapped);
    EXPECT_NE(unwrapped.find("3.2831853071795862"), std::string::npos);
}
