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

#include "dss/synth.hpp"

#include <cmath>
#include <numbers>

namespace dss {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t counter)
{
    const auto bits = splitmix64(splitmix64(seed) ^ counter);
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53; // (0, 1]
}

double distance(const Position& a, const Position& b)
{
    return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

void check_positions(const std::vector<Position>& ps, const char* what)
{
    if (ps.empty())
        fail(ErrorCode::InvalidArgument, std::string("at least one ") + what + " position is required");
    for (const auto& p : ps)
        for (double v : p)
            if (!std::isfinite(v))
                fail(ErrorCode::InvalidArgument, std::string(what) + " positions must be finite");
}

Matrix positions_matrix(const std::vector<Position>& ps)
{
    Matrix m(ps.size(), 3);
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t c = 0; c < 3; ++c)
            m(i, c) = ps[i][c];
    return m;
}

void check_delay(double tau, std::size_t n, double fs)
{
    const double window = static_cast<double>(n) / fs;
    if (!(tau >= 0.0) || !(tau < window))
        fail(ErrorCode::WindowError, "path delay " + attr_to_string(tau) + " s is outside the observable window [0, " +
                                         attr_to_string(window) + ") s");
}

// Per-link paths: explicit ones plus LOS.
std::vector<Path> link_paths(const PathModel& m, const Position& a, const Position& b, double speed, double fc)
{
    std::vector<Path> out = m.paths;
    if (m.los) {
        const double tau = distance(a, b) / speed;
        out.push_back(Path{tau, std::polar(m.los_amplitude, -2.0 * std::numbers::pi * fc * tau)});
    }
    return out;
}

CoordinateVec sample_coordinate(std::size_t n, double fs, CoordSemantics sem)
{
    CoordinateVec c{std::vector<double>(n), "s", sem};
    for (std::size_t i = 0; i < n; ++i)
        c.values[i] = static_cast<double>(i) / fs;
    return c;
}

} // namespace

double gaussian(std::uint64_t seed, std::uint64_t counter)
{
    const double u1 = uniform01(seed, 2 * counter);
    const double u2 = uniform01(seed, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex bandlimited_pulse(std::size_t n, std::size_t N, double dt, double tau)
{
    const double x = static_cast<double>(n) - tau / dt;
    const double m = std::round(x);
    // Delays closer than 1e-9 samples to the grid count as on-grid.
    if (std::abs(x - m) <= 1e-9 * std::max(1.0, std::abs(tau / dt))) {
        const auto mi = static_cast<long long>(m);
        return mi % static_cast<long long>(N) == 0 ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
    }
    const double Nd = static_cast<double>(N);
    const double k0 = -std::floor(Nd / 2.0);
    const double mag = std::sin(std::numbers::pi * x) / (Nd * std::sin(std::numbers::pi * x / Nd));
    return std::polar(1.0, std::numbers::pi * x * (Nd - 1.0 + 2.0 * k0) / Nd) * mag;
}

DssDataset gen_channel_sounding(const ChannelSoundingSpec& spec)
{
    check_positions(spec.tx, "tx");
    check_positions(spec.rx, "rx");
    if (!(spec.fs > 0.0) || !std::isfinite(spec.fs))
        fail(ErrorCode::InvalidArgument, "sampling rate must be positive");
    if (spec.n_samples == 0 || spec.n_time == 0)
        fail(ErrorCode::InvalidArgument, "sample and time counts must be positive");
    if (!(spec.model.noise_std >= 0.0))
        fail(ErrorCode::InvalidArgument, "noise_std must be non-negative");
    const double speed = spec.model.speed > 0.0 ? spec.model.speed : kSpeedOfLight;
    const std::size_t N = spec.n_samples;
    const double dt = 1.0 / spec.fs;

    std::vector<std::vector<Path>> links;
    for (const auto& t : spec.tx)
        for (const auto& r : spec.rx) {
            links.push_back(link_paths(spec.model, t, r, speed, spec.fc));
            for (const auto& p : links.back())
                check_delay(p.delay, N, spec.fs);
        }

    std::vector<AxisDef> axes{make_axis(AxisKind::tx, spec.tx.size()), make_axis(AxisKind::rx, spec.rx.size()),
                              make_axis(AxisKind::time, spec.n_time),
                              make_axis(AxisKind::sample, N, sample_coordinate(N, spec.fs, CoordSemantics::delay_seconds))};
    Attributes attrs{{"center_frequency", spec.fc}, {"bandwidth", spec.fs}, {"sampling_rate", spec.fs}};
    auto ds = new_dataset(kChannelSounding, std::move(axes), Domain::delay, std::move(attrs));
    auto data = ds.complex_data();
    const double sigma = spec.model.noise_std / std::sqrt(2.0);
    for (std::size_t l = 0; l < links.size(); ++l) {
        std::vector<Complex> clean(N);
        for (const auto& p : links[l])
            for (std::size_t n = 0; n < N; ++n)
                clean[n] += p.gain * bandlimited_pulse(n, N, dt, p.delay);
        for (std::size_t t = 0; t < spec.n_time; ++t) {
            const std::size_t base = (l * spec.n_time + t) * N;
            for (std::size_t n = 0; n < N; ++n) {
                Complex v = clean[n];
                if (sigma > 0.0) {
                    const auto c = static_cast<std::uint64_t>(base + n);
                    v += Complex(sigma * gaussian(spec.model.seed, 2 * c), sigma * gaussian(spec.model.seed, 2 * c + 1));
                }
                data[base + n] = v;
            }
        }
    }
    ds.attach_channel_coords("tx", positions_matrix(spec.tx));
    ds.attach_channel_coords("rx", positions_matrix(spec.rx));
    if (spec.model.noise_std > 0.0) {
        ds.set_attr("noise_std", spec.model.noise_std);
        ds.set_attr("seed", static_cast<std::int64_t>(spec.model.seed));
    }
    return ds;
}

DssDataset gen_acoustic(const AcousticSpec& spec)
{
    check_positions(spec.speakers, "speaker");
    check_positions(spec.microphones, "microphone");
    if (!(spec.fs > 0.0) || !std::isfinite(spec.fs))
        fail(ErrorCode::InvalidArgument, "sampling rate must be positive");
    if (spec.n_samples == 0 || spec.n_channels == 0)
        fail(ErrorCode::InvalidArgument, "sample and channel counts must be positive");
    if (!(spec.model.noise_std >= 0.0))
        fail(ErrorCode::InvalidArgument, "noise_std must be non-negative");
    const double speed = spec.model.speed > 0.0 ? spec.model.speed : kSpeedOfSound;
    const std::size_t N = spec.n_samples;
    const double dt = 1.0 / spec.fs;

    std::vector<std::vector<Path>> links;
    for (const auto& s : spec.speakers)
        for (const auto& m : spec.microphones) {
            links.push_back(link_paths(spec.model, s, m, speed, 0.0));
            for (const auto& p : links.back())
                check_delay(p.delay, N, spec.fs);
        }

    std::vector<AxisDef> axes{make_axis(AxisKind::speaker, spec.speakers.size()),
                              make_axis(AxisKind::microphone, spec.microphones.size()),
                              make_axis(AxisKind::channel, spec.n_channels),
                              make_axis(AxisKind::sample, N, sample_coordinate(N, spec.fs, CoordSemantics::time_seconds))};
    auto ds = new_dataset(kAcoustic, std::move(axes), Domain::time, Attributes{{"sampling_rate", spec.fs}});
    auto data = ds.real_data();
    for (std::size_t l = 0; l < links.size(); ++l) {
        std::vector<double> clean(N);
        for (const auto& p : links[l])
            for (std::size_t n = 0; n < N; ++n)
                clean[n] += (p.gain * bandlimited_pulse(n, N, dt, p.delay)).real();
        for (std::size_t c = 0; c < spec.n_channels; ++c) {
            const std::size_t base = (l * spec.n_channels + c) * N;
            for (std::size_t n = 0; n < N; ++n) {
                double v = clean[n];
                if (spec.model.noise_std > 0.0)
                    v += spec.model.noise_std * gaussian(spec.model.seed, static_cast<std::uint64_t>(base + n));
                data[base + n] = v;
            }
        }
    }
    ds.attach_channel_coords("speaker", positions_matrix(spec.speakers));
    ds.attach_channel_coords("microphone", positions_matrix(spec.microphones));
    if (spec.model.noise_std > 0.0) {
        ds.set_attr("noise_std", spec.model.noise_std);
        ds.set_attr("seed", static_cast<std::int64_t>(spec.model.seed));
    }
    return ds;
}

ChannelSoundingSpec fig4_preset(std::uint64_t seed)
{
    ChannelSoundingSpec s;
    s.fc = 6.95e9;
    s.fs = 1e9;
    s.n_samples = 1024;
    s.tx = {Position{0.0, 0.0, 1.0}};
    for (int i = 0; i < 4; ++i)
        s.rx.push_back(Position{3.0 + 0.02 * i, 0.0, 1.0});
    s.model.noise_std = 1e-3;
    s.model.seed = seed;
    return s;
}

} // namespace dss
