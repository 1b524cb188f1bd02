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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace dss {

namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

constexpr double kWidth = 960, kHeight = 540;
constexpr double kLeft = 90, kRight = 900, kTop = 50, kBottom = 470;

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(const char* f, double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string xml_escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

struct Column {
    std::string label;
    std::vector<double> values;
};

// Columns after applying render options; complex series give re/im columns
// for CSV and magnitude for SVG.
std::vector<Column> columns(const PlotSeries& s, bool for_svg, const RenderOptions& opt)
{
    std::vector<Column> out;
    for (const auto& line : s.series) {
        if (s.kind == PlotKind::time_complex) {
            if (for_svg) {
                Column c{line.label, std::vector<double>(line.values.size())};
                for (std::size_t i = 0; i < c.values.size(); ++i)
                    c.values[i] = std::hypot(line.values[i], line.imag.empty() ? 0.0 : line.imag[i]);
                out.push_back(std::move(c));
            } else {
                out.push_back({line.label + " re", line.values});
                out.push_back({line.label + " im",
                               line.imag.empty() ? std::vector<double>(line.values.size(), 0.0) : line.imag});
            }
        } else if (s.kind == PlotKind::phase_rad && opt.unwrap_phase) {
            out.push_back({line.label, unwrap(line.values)});
        } else {
            out.push_back({line.label, line.values});
        }
    }
    return out;
}

std::string y_label(PlotKind k)
{
    switch (k) {
    case PlotKind::time_complex:
        return "|h|";
    case PlotKind::magnitude_db:
        return "magnitude (dB)";
    case PlotKind::phase_rad:
        return "phase (rad)";
    case PlotKind::rir_amplitude:
        return "amplitude";
    }
    return "";
}

std::string render_csv(const PlotSeries& s, const RenderOptions& opt)
{
    const auto cols = columns(s, false, opt);
    std::string out = csv_field("x(" + s.x.unit + ")");
    for (const auto& c : cols)
        out += "," + csv_field(c.label);
    out += "\n";
    for (std::size_t i = 0; i < s.x.values.size(); ++i) {
        out += num(s.x.values[i]);
        for (const auto& c : cols)
            out += "," + num(c.values[i]);
        out += "\n";
    }
    return out;
}

std::string render_svg(const PlotSeries& s, const RenderOptions& opt)
{
    const auto cols = columns(s, true, opt);
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (double v : s.x.values)
        if (std::isfinite(v)) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
    for (const auto& c : cols)
        for (double v : c.values)
            if (std::isfinite(v)) {
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
    if (!std::isfinite(xmin)) {
        xmin = 0;
        xmax = 1;
    }
    if (!std::isfinite(ymin)) {
        ymin = 0;
        ymax = 1;
    }
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto px = [&](double v) { return kLeft + (v - xmin) / (xmax - xmin) * (kRight - kLeft); };
    auto py = [&](double v) {
        if (!std::isfinite(v))
            v = ymin;
        return kBottom - (v - ymin) / (ymax - ymin) * (kBottom - kTop);
    };

    std::string o;
    o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"540\" viewBox=\"0 0 960 540\">\n";
    o += "<title>" + xml_escape(s.title) + "</title>\n";
    o += "<rect x=\"0\" y=\"0\" width=\"" + fmt("%.0f", kWidth) + "\" height=\"" + fmt("%.0f", kHeight) +
         "\" fill=\"#ffffff\"/>\n";
    o += "<text x=\"480\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         xml_escape(s.title) + "</text>\n";
    o += "<g stroke=\"#000000\" stroke-width=\"1\" fill=\"none\">\n";
    o += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", kBottom) + "\" x2=\"" + fmt("%.2f", kRight) +
         "\" y2=\"" + fmt("%.2f", kBottom) + "\"/>\n";
    o += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", kTop) + "\" x2=\"" + fmt("%.2f", kLeft) +
         "\" y2=\"" + fmt("%.2f", kBottom) + "\"/>\n";
    o += "</g>\n";
    o += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#000000\">\n";
    o += "<text x=\"" + fmt("%.2f", kLeft) + "\" y=\"" + fmt("%.2f", kBottom + 18) + "\" text-anchor=\"start\">" +
         xml_escape(fmt("%.6g", xmin)) + "</text>\n";
    o += "<text x=\"" + fmt("%.2f", kRight) + "\" y=\"" + fmt("%.2f", kBottom + 18) + "\" text-anchor=\"end\">" +
         xml_escape(fmt("%.6g", xmax)) + "</text>\n";
    o += "<text x=\"" + fmt("%.2f", kLeft - 6) + "\" y=\"" + fmt("%.2f", kBottom) + "\" text-anchor=\"end\">" +
         xml_escape(fmt("%.6g", ymin)) + "</text>\n";
    o += "<text x=\"" + fmt("%.2f", kLeft - 6) + "\" y=\"" + fmt("%.2f", kTop + 10) + "\" text-anchor=\"end\">" +
         xml_escape(fmt("%.6g", ymax)) + "</text>\n";
    o += "<text x=\"" + fmt("%.2f", (kLeft + kRight) / 2) + "\" y=\"" + fmt("%.2f", kBottom + 40) +
         "\" text-anchor=\"middle\">" + xml_escape(s.x.label + " (" + s.x.unit + ")") + "</text>\n";
    o += "<text x=\"20\" y=\"" + fmt("%.2f", (kTop + kBottom) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         fmt("%.2f", (kTop + kBottom) / 2) + ")\">" + xml_escape(y_label(s.kind)) + "</text>\n";
    o += "</g>\n";
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const char* color = kPalette[c % kPalette.size()];
        o += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.values.size(); ++i) {
            if (i)
                o += ' ';
            o += fmt("%.2f", px(s.x.values[i])) + "," + fmt("%.2f", py(cols[c].values[i]));
        }
        o += "\"/>\n";
        const double ly = kTop + 16.0 * static_cast<double>(c + 1);
        o += "<text x=\"" + fmt("%.2f", kRight + 8) + "\" y=\"" + fmt("%.2f", ly) +
             "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + color + "\">" + xml_escape(cols[c].label) +
             "</text>\n";
    }
    o += "</svg>\n";
    return o;
}

} // namespace

std::vector<double> unwrap(const std::vector<double>& phase)
{
    std::vector<double> out(phase.size());
    double offset = 0.0;
    for (std::size_t i = 0; i < phase.size(); ++i) {
        if (i > 0) {
            const double d = phase[i] - phase[i - 1];
            offset -= 2.0 * std::numbers::pi * std::round(d / (2.0 * std::numbers::pi));
        }
        out[i] = phase[i] + offset;
    }
    return out;
}

std::string render(const PlotSeries& series, RenderFormat format, const RenderOptions& options)
{
    const auto n = series.x.values.size();
    for (const auto& line : series.series) {
        if (line.values.size() != n)
            fail(ErrorCode::InvalidArgument, "series '" + line.label + "' has " + std::to_string(line.values.size()) +
                                                 " values for " + std::to_string(n) + " x positions");
        if (!line.imag.empty() && line.imag.size() != n)
            fail(ErrorCode::InvalidArgument, "series '" + line.label + "' has a mismatched imaginary part");
    }
    return format == RenderFormat::csv ? render_csv(series, options) : render_svg(series, options);
}

} // namespace dss
