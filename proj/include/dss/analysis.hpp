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

// Domain transforms, post-processing and plot series for DSS datasets.

#pragma once

#include "dss/model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace dss {

// ---------------------------------------------------------------------------
// transforms
//
// The sample axis of a delay-domain dataset is transformed with a unitary DFT.
// Bin j of the result sits at f_ref + (j - floor(N/2)) * df with
// df = 1 / (N * dtau). f_ref is the `reference_frequency` attribute when set,
// otherwise `center_frequency`.

DssDataset cir_to_tf(const DssDataset& ds);
DssDataset tf_to_cir(const DssDataset& ds);

/// Keeps bins with f_lo <= f <= f_hi. Throws DomainError or RangeError.
DssDataset select_band(const DssDataset& ds, double f_lo, double f_hi);

/// select_band centered on center_frequency, returned in the input domain.
DssDataset reduce_bandwidth(const DssDataset& ds, double new_bandwidth);

/// Band-limited interpolation of a delay- or time-domain dataset.
DssDataset oversample(const DssDataset& ds, std::size_t factor);

enum class PulseKind { raised_cosine, root_raised_cosine, rectangular };

std::string_view to_string(PulseKind k) noexcept;
std::optional<PulseKind> parse_pulse_kind(std::string_view s) noexcept;

struct PulseShape {
    PulseKind kind = PulseKind::rectangular;
    double rolloff = 0.0;
    double bandwidth = 0.0; // Hz
};

/// Frequency response of the shape at baseband offset `f` (peak 1).
double pulse_response(const PulseShape& shape, double f);

DssDataset apply_pulse_shaping(const DssDataset& ds, const PulseShape& shape);

/// Divides out the stored `frequency_response` hardware attribute (columns
/// f [Hz], re, im) of each listed component, linearly interpolated onto the
/// dataset grid.
DssDataset deembed(const DssDataset& ds, const std::vector<std::string>& component_ids);

// ---------------------------------------------------------------------------
// plots

enum class PlotKind { time_complex, magnitude_db, phase_rad, rir_amplitude };

std::string_view to_string(PlotKind k) noexcept;

struct PlotAxis {
    std::string label;
    std::string unit;
    std::vector<double> values;
};

struct PlotLine {
    std::string label;
    std::vector<double> values;
    std::vector<double> imag; // time_complex only
};

struct PlotSeries {
    std::string title;
    PlotAxis x;
    std::vector<PlotLine> series;
    PlotKind kind = PlotKind::time_complex;
};

/// Lowest level reported by magnitude plots, for |H| = 0.
inline constexpr double kDbFloor = -300.0;

/// Complex baseband CIR per selected rx. Frequency-domain input is converted
/// first and the title says so. Throws SelectionError, ProfileError,
/// AxisError or IndexError.
PlotSeries plot_cr(const DssDataset& ds, const SliceSelector& sel);

/// Magnitude (dB) and wrapped phase per selected rx over absolute frequency.
std::pair<PlotSeries, PlotSeries> plot_tf(const DssDataset& ds, const SliceSelector& sel);

/// Real amplitude over time for one speaker, microphone and channel.
PlotSeries plot_rir(const DssDataset& ds, const SliceSelector& sel);

enum class RenderFormat { svg, csv };

struct RenderOptions {
    bool unwrap_phase = false;
};

/// Deterministic bytes. Throws InvalidArgument for inconsistent series.
std::string render(const PlotSeries& series, RenderFormat format, const RenderOptions& options = {});

/// Phase unwrapping used by the render option.
std::vector<double> unwrap(const std::vector<double>& phase);

} // namespace dss
