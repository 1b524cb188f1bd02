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

// Synthetic channel-sounding and acoustic datasets from geometry.

#pragma once

#include "dss/model.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace dss {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kSpeedOfSound = 343.0;

using Position = std::array<double, 3>;

struct Path {
    double delay = 0.0; // s
    Complex gain{1.0, 0.0};
};

struct PathModel {
    std::vector<Path> paths;   // applied to every link
    bool los = true;           // add the line-of-sight path from geometry
    double los_amplitude = 1.0;
    double noise_std = 0.0;
    std::uint64_t seed = 0;
    double speed = 0.0; // 0: speed of light (RF) or of sound (acoustic)
};

struct ChannelSoundingSpec {
    std::vector<Position> tx;
    std::vector<Position> rx;
    double fs = 1e9;  // sampling rate = measured bandwidth, Hz
    double fc = 0.0;  // carrier, Hz
    std::size_t n_samples = 1024;
    std::size_t n_time = 1;
    PathModel model;
};

struct AcousticSpec {
    std::vector<Position> speakers;
    std::vector<Position> microphones;
    double fs = 48e3;
    std::size_t n_samples = 4800;
    std::size_t n_channels = 1;
    PathModel model;
};

/// Band-limited unit pulse at delay `tau` sampled at n * dt, n in [0, N):
/// the inverse unitary DFT of exp(-2*pi*i*k*df*tau) over the centered bins.
/// Exactly a shifted unit sample when tau is on the grid.
Complex bandlimited_pulse(std::size_t n, std::size_t N, double dt, double tau);

/// Delay-domain complex (tx, rx, time, sample) dataset; LOS gain
/// los_amplitude * exp(-2*pi*i*fc*tau). Throws WindowError or
/// InvalidArgument.
DssDataset gen_channel_sounding(const ChannelSoundingSpec& spec);

/// Real (speaker, microphone, channel, sample) dataset in the time domain.
DssDataset gen_acoustic(const AcousticSpec& spec);

/// fc 6.95 GHz, 1 GHz bandwidth, 1024 samples, one tx and four rx on a line
/// at 2 cm spacing.
ChannelSoundingSpec fig4_preset(std::uint64_t seed = 0);

/// Counter-based standard normal draw; identical for identical arguments.
double gaussian(std::uint64_t seed, std::uint64_t counter);

} // namespace dss
