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

#include "dss/analysis.hpp"

#include "detail.hpp"

#include <cmath>
#include <numbers>

namespace dss {

using namespace detail;

std::string_view to_string(PlotKind k) noexcept
{
    switch (k) {
    case PlotKind::time_complex:
        return "time_complex";
    case PlotKind::magnitude_db:
        return "magnitude_db";
    case PlotKind::phase_rad:
        return "phase_rad";
    case PlotKind::rir_amplitude:
        return "rir_amplitude";
    }
    return "?";
}

namespace {

bool has_axes(const DssDataset& ds, std::initializer_list<std::string_view> names)
{
    if (ds.axes().size() != names.size())
        return false;
    std::size_t i = 0;
    for (auto n : names)
        if (ds.axes()[i++].name != n)
            return false;
    return true;
}

SliceSelector canonical(const SliceSelector& sel)
{
    SliceSelector out;
    for (const auto& [name, s] : sel.axes) {
        auto c = canonical_axis_name(name);
        if (out.axes.count(c))
            fail(ErrorCode::SelectionError, "axis '" + c + "' selected twice");
        out.axes[c] = s;
    }
    return out;
}

// Resolves a selection that must pick exactly one index.
std::size_t single(const DssDataset& ds, SliceSelector& sel, const std::string& axis, std::string_view op)
{
    const auto length = ds.axis(axis).length;
    auto it = sel.axes.find(axis);
    if (it == sel.axes.end()) {
        if (length != 1)
            fail(ErrorCode::SelectionError, std::string(op) + " needs exactly one " + axis + " index (axis has " +
                                                std::to_string(length) + ")");
        sel.axes[axis] = std::size_t{0};
        return 0;
    }
    const auto idx = selected_indices(it->second, length, axis);
    if (idx.size() != 1)
        fail(ErrorCode::SelectionError, std::string(op) + " needs exactly one " + axis + " index, got " +
                                            std::to_string(idx.size()));
    it->second = idx.front();
    return idx.front();
}

struct LinkSelection {
    DssDataset sub;
    std::size_t tx = 0, t = 0;
    std::vector<std::size_t> rx;
};

LinkSelection select_links(const DssDataset& ds, const SliceSelector& raw, std::string_view op)
{
    if (!has_axes(ds, {"tx", "rx", "time", "sample"}) || !ds.is_complex())
        fail(ErrorCode::ProfileError, std::string(op) + " needs a complex (tx, rx, time, sample) dataset; '" +
                                          ds.dataset_type() + "' does not qualify");
    auto sel = canonical(raw);
    for (const auto& [name, s] : sel.axes) {
        ds.axis_index(name);
        if (name == "sample")
            fail(ErrorCode::SelectionError, std::string(op) + " always plots the whole sample axis");
    }
    LinkSelection out;
    out.tx = single(ds, sel, "tx", op);
    out.t = single(ds, sel, "time", op);
    const auto rx_it = sel.axes.find("rx");
    out.rx = selected_indices(rx_it == sel.axes.end() ? AxisSelection{SelectAll{}} : rx_it->second,
                              ds.axis("rx").length, "rx");
    sel.axes["rx"] = out.rx;
    out.sub = slice(ds, sel);
    return out;
}

std::string link_title(std::string_view what, const LinkSelection& s, std::string_view note)
{
    std::string t = std::string(what) + " tx=" + std::to_string(s.tx) + " t=" + std::to_string(s.t);
    if (!note.empty())
        t += " (" + std::string(note) + ")";
    return t;
}

} // namespace

PlotSeries plot_cr(const DssDataset& ds, const SliceSelector& sel)
{
    auto s = select_links(ds, sel, "plot_cr");
    std::string note;
    if (s.sub.domain() == Domain::frequency) {
        s.sub = tf_to_cir(s.sub);
        note = "converted from frequency domain";
    } else if (s.sub.domain() != Domain::delay) {
        fail(ErrorCode::DomainError, "plot_cr needs delay- or frequency-domain data");
    }
    PlotSeries out;
    out.kind = PlotKind::time_complex;
    out.title = link_title("channel response", s, note);
    out.x = PlotAxis{"delay", "s", time_grid(s.sub)};
    const auto data = s.sub.complex_data();
    const std::size_t n = out.x.values.size();
    for (std::size_t r = 0; r < s.rx.size(); ++r) {
        PlotLine line{"rx=" + std::to_string(s.rx[r]), std::vector<double>(n), std::vector<double>(n)};
        for (std::size_t k = 0; k < n; ++k) {
            line.values[k] = data[r * n + k].real();
            line.imag[k] = data[r * n + k].imag();
        }
        out.series.push_back(std::move(line));
    }
    return out;
}

std::pair<PlotSeries, PlotSeries> plot_tf(const DssDataset& ds, const SliceSelector& sel)
{
    auto s = select_links(ds, sel, "plot_tf");
    std::string note;
    if (s.sub.domain() == Domain::delay) {
        s.sub = cir_to_tf(s.sub);
        note = "converted from delay domain";
    } else if (s.sub.domain() != Domain::frequency) {
        fail(ErrorCode::DomainError, "plot_tf needs delay- or frequency-domain data");
    }
    PlotSeries mag, phase;
    mag.kind = PlotKind::magnitude_db;
    phase.kind = PlotKind::phase_rad;
    mag.title = link_title("transfer function magnitude", s, note);
    phase.title = link_title("transfer function phase", s, note);
    mag.x = PlotAxis{"frequency", "Hz", frequency_grid(s.sub)};
    phase.x = mag.x;
    const auto data = s.sub.complex_data();
    const std::size_t n = mag.x.values.size();
    for (std::size_t r = 0; r < s.rx.size(); ++r) {
        const auto label = "rx=" + std::to_string(s.rx[r]);
        PlotLine m{label, std::vector<double>(n), {}};
        PlotLine p{label, std::vector<double>(n), {}};
        for (std::size_t k = 0; k < n; ++k) {
            const auto z = data[r * n + k];
            const double a = std::abs(z);
            m.values[k] = a > 0.0 ? std::max(20.0 * std::log10(a), kDbFloor) : kDbFloor;
            double ph = std::arg(z);
            if (ph <= -std::numbers::pi)
                ph = std::numbers::pi;
            p.values[k] = ph;
        }
        mag.series.push_back(std::move(m));
        phase.series.push_back(std::move(p));
    }
    return {std::move(mag), std::move(phase)};
}

PlotSeries plot_rir(const DssDataset& ds, const SliceSelector& raw)
{
    if (!has_axes(ds, {"speaker", "microphone", "channel", "sample"}) || ds.is_complex())
        fail(ErrorCode::ProfileError, "plot_rir needs a real (speaker, microphone, channel, sample) dataset; '" +
                                          ds.dataset_type() + "' does not qualify");
    auto sel = canonical(raw);
    for (const auto& [name, s] : sel.axes) {
        ds.axis_index(name);
        if (name == "sample")
            fail(ErrorCode::SelectionError, "plot_rir always plots the whole sample axis");
    }
    const auto sp = single(ds, sel, "speaker", "plot_rir");
    const auto mic = single(ds, sel, "microphone", "plot_rir");
    const auto ch = single(ds, sel, "channel", "plot_rir");
    const auto sub = slice(ds, sel);
    PlotSeries out;
    out.kind = PlotKind::rir_amplitude;
    const auto label = "sp=" + std::to_string(sp) + " mic=" + std::to_string(mic) + " ch=" + std::to_string(ch);
    out.title = "room impulse response " + label;
    out.x = PlotAxis{"time", "s", time_grid(sub)};
    const auto data = sub.real_data();
    out.series.push_back(PlotLine{label, std::vector<double>(data.begin(), data.end()), {}});
    return out;
}

} // namespace dss
