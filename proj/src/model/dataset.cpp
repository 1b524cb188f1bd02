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

#include "dss/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>

namespace dss {

namespace {

template <class E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<AxisKind, 10> kAxisKinds{{
    {AxisKind::tx, "tx"},
    {AxisKind::rx, "rx"},
    {AxisKind::time, "time"},
    {AxisKind::sample, "sample"},
    {AxisKind::speaker, "speaker"},
    {AxisKind::microphone, "microphone"},
    {AxisKind::channel, "channel"},
    {AxisKind::run, "run"},
    {AxisKind::metric, "metric"},
    {AxisKind::custom, "custom"},
}};

constexpr NameTable<CoordSemantics, 6> kSemantics{{
    {CoordSemantics::delay_seconds, "delay_seconds"},
    {CoordSemantics::frequency_hz_absolute, "frequency_hz_absolute"},
    {CoordSemantics::time_seconds, "time_seconds"},
    {CoordSemantics::index, "index"},
    {CoordSemantics::position_m, "position_m"},
    {CoordSemantics::custom, "custom"},
}};

constexpr NameTable<Domain, 4> kDomains{{
    {Domain::delay, "delay"},
    {Domain::frequency, "frequency"},
    {Domain::time, "time"},
    {Domain::none, "none"},
}};

template <class E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& t, E v) noexcept
{
    for (const auto& [k, n] : t)
        if (k == v)
            return n;
    return "?";
}

template <class E, std::size_t N>
std::optional<E> value_of(const NameTable<E, N>& t, std::string_view s) noexcept
{
    for (const auto& [k, n] : t)
        if (n == s)
            return k;
    return std::nullopt;
}

bool valid_object_name(std::string_view s)
{
    return !s.empty() && s.find('/') == std::string_view::npos && s != "." && s != "..";
}

} // namespace

std::string_view to_string(AxisKind v) noexcept { return name_of(kAxisKinds, v); }
std::string_view to_string(CoordSemantics v) noexcept { return name_of(kSemantics, v); }
std::string_view to_string(Domain v) noexcept { return name_of(kDomains, v); }
std::string_view to_string(ValueKind v) noexcept { return v == ValueKind::real ? "real" : "complex"; }
std::optional<AxisKind> parse_axis_kind(std::string_view s) noexcept { return value_of(kAxisKinds, s); }
std::optional<CoordSemantics> parse_coord_semantics(std::string_view s) noexcept { return value_of(kSemantics, s); }
std::optional<Domain> parse_domain(std::string_view s) noexcept { return value_of(kDomains, s); }

bool bitwise_equal(std::span<const double> a, std::span<const double> b) noexcept
{
    return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size_bytes()) == 0);
}

AxisDef make_axis(AxisKind kind, std::size_t length, std::optional<CoordinateVec> coordinate)
{
    return AxisDef{std::string(to_string(kind)), kind, length, std::move(coordinate)};
}

std::string attr_to_string(const AttrValue& v)
{
    if (const auto* i = std::get_if<std::int64_t>(&v))
        return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&v)) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", *d);
        return buf;
    }
    return std::get<std::string>(v);
}

std::optional<double> attr_number(const Attributes& attrs, const std::string& key)
{
    const auto it = attrs.find(key);
    if (it == attrs.end())
        return std::nullopt;
    if (const auto* i = std::get_if<std::int64_t>(&it->second))
        return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&it->second))
        return *d;
    return std::nullopt;
}

bool RaggedSeries::operator==(const RaggedSeries& o) const
{
    if (run != o.run || metric != o.metric || unit != o.unit || points.size() != o.points.size())
        return false;
    return points.empty() || std::memcmp(points.data(), o.points.data(), points.size() * sizeof(SeriesPoint)) == 0;
}

void check_series(const RaggedSeries& s)
{
    if (!valid_object_name(s.metric))
        fail(ErrorCode::InvalidArgument, "series metric name '" + s.metric + "' is not usable");
    if (s.run < 0)
        fail(ErrorCode::InvalidArgument, "series run index must be non-negative");
    for (std::size_t i = 1; i < s.points.size(); ++i)
        if (!(s.points[i].t > s.points[i - 1].t))
            fail(ErrorCode::InvalidArgument, "series '" + s.metric + "' of run " + std::to_string(s.run) +
                                                 " has non-increasing time at point " + std::to_string(i));
}

bool ChannelCoords::operator==(const ChannelCoords& o) const
{
    auto same = [](const Matrix& a, const Matrix& b) {
        return a.rows == b.rows && a.cols == b.cols && bitwise_equal(a.values, b.values);
    };
    if (!same(positions, o.positions) || orientations.has_value() != o.orientations.has_value())
        return false;
    return !orientations || same(*orientations, *o.orientations);
}

bool is_reserved_attr(std::string_view key) noexcept
{
    return key.empty() || key.front() == '_' || key == "dss_version" || key == "dataset_type" || key == "domain" ||
           key == "axes" || key == "unit" || key == "semantics" || key.find('/') != std::string_view::npos;
}

// ---------------------------------------------------------------------------

namespace {

bool series_less(const RaggedSeries& a, const RaggedSeries& b)
{
    return a.run != b.run ? a.run < b.run : a.metric < b.metric;
}

} // namespace

DssDataset DssDataset::from_parts(Parts parts)
{
    std::sort(parts.metadata.begin(), parts.metadata.end());
    std::stable_sort(parts.series.begin(), parts.series.end(), series_less);
    DssDataset ds(std::move(parts));
    ds.check_invariants();
    return ds;
}

void DssDataset::check_invariants() const
{
    std::size_t expected = 1;
    for (std::size_t i = 0; i < p_.axes.size(); ++i) {
        const auto& a = p_.axes[i];
        if (!valid_object_name(a.name))
            fail(ErrorCode::InvalidArgument, "axis name '" + a.name + "' is not usable");
        for (std::size_t j = 0; j < i; ++j)
            if (p_.axes[j].name == a.name)
                fail(ErrorCode::InvalidArgument, "axis name '" + a.name + "' used twice");
        if (a.length == 0)
            fail(ErrorCode::ShapeError, "axis '" + a.name + "' has length 0");
        expected *= a.length;
        if (a.coordinate) {
            const auto& c = *a.coordinate;
            if (c.values.size() != a.length)
                fail(ErrorCode::ShapeError, "coordinate of axis '" + a.name + "' has " + std::to_string(c.values.size()) +
                                                " values for length " + std::to_string(a.length));
            for (std::size_t k = 1; k < c.values.size(); ++k) {
                const bool strict = c.semantics == CoordSemantics::frequency_hz_absolute;
                const bool nondecreasing = c.semantics == CoordSemantics::delay_seconds ||
                                           c.semantics == CoordSemantics::time_seconds;
                if ((strict && !(c.values[k] > c.values[k - 1])) ||
                    (nondecreasing && !(c.values[k] >= c.values[k - 1])))
                    fail(ErrorCode::InvalidArgument,
                         "coordinate of axis '" + a.name + "' is not " +
                             (strict ? "strictly increasing" : "nondecreasing"));
            }
        }
    }
    const std::size_t n = std::visit([](const auto& v) { return v.size(); }, p_.data);
    if (p_.axes.empty()) {
        if (n != 0)
            fail(ErrorCode::ShapeError, "a dataset without axes holds no tensor data");
    } else if (n != expected) {
        fail(ErrorCode::ShapeError, "tensor has " + std::to_string(n) + " elements, axes describe " +
                                        std::to_string(expected));
    }
    for (const auto& [key, value] : p_.attrs)
        if (is_reserved_attr(key))
            fail(ErrorCode::ReservedName, "attribute name '" + key + "' is reserved");
    for (const auto& [axis, cc] : p_.channel_coords) {
        const auto idx = find_axis(axis);
        if (!idx)
            fail(ErrorCode::AxisError, "channel coordinates for unknown axis '" + axis + "'");
        const auto len = p_.axes[*idx].length;
        if (cc.positions.rows != len || cc.positions.cols != 3)
            fail(ErrorCode::ShapeError, "positions for axis '" + axis + "' must be " + std::to_string(len) + "x3");
        if (cc.orientations && (cc.orientations->rows != len || cc.orientations->cols != 4))
            fail(ErrorCode::ShapeError, "orientations for axis '" + axis + "' must be " + std::to_string(len) + "x4");
    }
    for (const auto& [comp, attrs] : p_.hardware_attributes) {
        if (!valid_object_name(comp))
            fail(ErrorCode::InvalidArgument, "component id '" + comp + "' is not usable as an object name");
        for (const auto& [name, m] : attrs) {
            if (!valid_object_name(name))
                fail(ErrorCode::InvalidArgument, "attribute name '" + name + "' is not usable");
            if (m.values.size() != m.rows * m.cols)
                fail(ErrorCode::ShapeError, "hardware attribute '" + comp + "/" + name + "' has an inconsistent shape");
        }
    }
    for (std::size_t i = 0; i < p_.metadata.size(); ++i) {
        const auto& doc = p_.metadata[i];
        if (!valid_object_name(doc.kind) || !valid_object_name(doc.id))
            fail(ErrorCode::InvalidArgument, "embedded document '" + doc.kind + "/" + doc.id + "' has an unusable name");
        if (i > 0 && p_.metadata[i - 1].kind == doc.kind && p_.metadata[i - 1].id == doc.id)
            fail(ErrorCode::InvalidArgument, "embedded document '" + doc.kind + "/" + doc.id + "' appears twice");
    }
    for (std::size_t i = 0; i < p_.series.size(); ++i) {
        check_series(p_.series[i]);
        for (std::size_t j = 0; j < i; ++j)
            if (p_.series[j].run == p_.series[i].run && p_.series[j].metric == p_.series[i].metric)
                fail(ErrorCode::InvalidArgument, "duplicate series '" + p_.series[i].metric + "' in run " +
                                                     std::to_string(p_.series[i].run));
    }
}

ValueKind DssDataset::value_kind() const noexcept
{
    return std::holds_alternative<std::vector<Complex>>(p_.data) ? ValueKind::complex : ValueKind::real;
}

std::vector<std::size_t> DssDataset::shape() const
{
    std::vector<std::size_t> s;
    for (const auto& a : p_.axes)
        s.push_back(a.length);
    return s;
}

std::size_t DssDataset::size() const noexcept
{
    return std::visit([](const auto& v) { return v.size(); }, p_.data);
}

std::span<const double> DssDataset::real_data() const
{
    const auto* v = std::get_if<std::vector<double>>(&p_.data);
    if (!v)
        fail(ErrorCode::ProfileViolation, "dataset holds complex values");
    return *v;
}

std::span<const Complex> DssDataset::complex_data() const
{
    const auto* v = std::get_if<std::vector<Complex>>(&p_.data);
    if (!v)
        fail(ErrorCode::ProfileViolation, "dataset holds real values");
    return *v;
}

std::span<double> DssDataset::real_data()
{
    auto* v = std::get_if<std::vector<double>>(&p_.data);
    if (!v)
        fail(ErrorCode::ProfileViolation, "dataset holds complex values");
    return *v;
}

std::span<Complex> DssDataset::complex_data()
{
    auto* v = std::get_if<std::vector<Complex>>(&p_.data);
    if (!v)
        fail(ErrorCode::ProfileViolation, "dataset holds real values");
    return *v;
}

std::optional<std::size_t> DssDataset::find_axis(std::string_view name) const noexcept
{
    for (std::size_t i = 0; i < p_.axes.size(); ++i)
        if (p_.axes[i].name == name)
            return i;
    return std::nullopt;
}

std::size_t DssDataset::axis_index(std::string_view name) const
{
    if (auto i = find_axis(name))
        return *i;
    if (auto i = find_axis(canonical_axis_name(name)))
        return *i;
    fail(ErrorCode::AxisError, "dataset has no axis '" + std::string(name) + "'");
}

void DssDataset::set_attr(const std::string& key, AttrValue value)
{
    if (is_reserved_attr(key))
        fail(ErrorCode::ReservedName, "attribute name '" + key + "' is reserved");
    p_.attrs[key] = std::move(value);
}

void DssDataset::erase_attr(const std::string& key) { p_.attrs.erase(key); }

void DssDataset::set_coordinate(std::string_view axis, std::optional<CoordinateVec> coord)
{
    auto saved = p_.axes;
    p_.axes[axis_index(axis)].coordinate = std::move(coord);
    try {
        check_invariants();
    } catch (...) {
        p_.axes = std::move(saved);
        throw;
    }
}

void DssDataset::add_metadata(EmbeddedDocument doc)
{
    if (!valid_object_name(doc.kind) || !valid_object_name(doc.id))
        fail(ErrorCode::InvalidArgument, "embedded document '" + doc.kind + "/" + doc.id + "' has an unusable name");
    for (auto& d : p_.metadata) {
        if (d.kind == doc.kind && d.id == doc.id) {
            d = std::move(doc);
            return;
        }
    }
    p_.metadata.push_back(std::move(doc));
    std::sort(p_.metadata.begin(), p_.metadata.end());
}

void DssDataset::set_hardware_attribute(const std::string& component_id, const std::string& name, Matrix values)
{
    if (!valid_object_name(component_id) || !valid_object_name(name))
        fail(ErrorCode::InvalidArgument, "hardware attribute '" + component_id + "/" + name + "' has an unusable name");
    if (values.values.size() != values.rows * values.cols)
        fail(ErrorCode::ShapeError, "hardware attribute has an inconsistent shape");
    p_.hardware_attributes[component_id][name] = std::move(values);
}

void DssDataset::add_series(RaggedSeries s)
{
    check_series(s);
    for (const auto& e : p_.series)
        if (e.run == s.run && e.metric == s.metric)
            fail(ErrorCode::InvalidArgument, "duplicate series '" + s.metric + "' in run " + std::to_string(s.run));
    p_.series.insert(std::upper_bound(p_.series.begin(), p_.series.end(), s, series_less), std::move(s));
}

void DssDataset::reshape(std::vector<AxisDef> axes, TensorData data)
{
    Parts next = p_;
    next.axes = std::move(axes);
    next.data = std::move(data);
    for (auto it = next.channel_coords.begin(); it != next.channel_coords.end();) {
        bool keep = false;
        for (const auto& a : next.axes)
            if (a.name == it->first && a.length == it->second.positions.rows)
                keep = true;
        it = keep ? std::next(it) : next.channel_coords.erase(it);
    }
    DssDataset tmp(std::move(next));
    tmp.check_invariants();
    p_ = std::move(tmp.p_);
}

void DssDataset::attach_channel_coords(std::string_view axis, Matrix positions, std::optional<Matrix> orientations)
{
    const auto idx = axis_index(axis);
    const auto& a = p_.axes[idx];
    if (positions.rows != a.length || positions.cols != 3 || positions.values.size() != positions.rows * 3)
        fail(ErrorCode::ShapeError, "positions must be " + std::to_string(a.length) + "x3 for axis '" + a.name + "'");
    if (orientations) {
        const auto& o = *orientations;
        if (o.rows != a.length || o.cols != 4 || o.values.size() != o.rows * 4)
            fail(ErrorCode::ShapeError,
                 "orientations must be " + std::to_string(a.length) + "x4 for axis '" + a.name + "'");
        for (std::size_t r = 0; r < o.rows; ++r) {
            double n2 = 0;
            for (std::size_t c = 0; c < 4; ++c)
                n2 += o(r, c) * o(r, c);
            if (!(std::abs(std::sqrt(n2) - 1.0) <= 1e-9))
                fail(ErrorCode::NormError, "orientation " + std::to_string(r) + " of axis '" + a.name +
                                               "' is not a unit quaternion");
        }
    }
    p_.channel_coords[a.name] = ChannelCoords{std::move(positions), std::move(orientations)};
}

DssDataset attach_channel_coords(DssDataset ds, std::string_view axis, Matrix positions,
                                 std::optional<Matrix> orientations)
{
    ds.attach_channel_coords(axis, std::move(positions), std::move(orientations));
    return ds;
}

bool DssDataset::operator==(const DssDataset& o) const
{
    const auto& a = p_;
    const auto& b = o.p_;
    if (a.dataset_type != b.dataset_type || a.domain != b.domain || a.axes != b.axes)
        return false;
    if (a.attrs.size() != b.attrs.size())
        return false;
    for (auto ia = a.attrs.begin(), ib = b.attrs.begin(); ia != a.attrs.end(); ++ia, ++ib)
        if (ia->first != ib->first || attr_to_string(ia->second) != attr_to_string(ib->second))
            return false;
    if (a.data.index() != b.data.index())
        return false;
    if (const auto* ra = std::get_if<std::vector<double>>(&a.data)) {
        if (!bitwise_equal(*ra, std::get<std::vector<double>>(b.data)))
            return false;
    } else {
        const auto& ca = std::get<std::vector<Complex>>(a.data);
        const auto& cb = std::get<std::vector<Complex>>(b.data);
        if (ca.size() != cb.size() ||
            (!ca.empty() && std::memcmp(ca.data(), cb.data(), ca.size() * sizeof(Complex)) != 0))
            return false;
    }
    if (a.metadata != b.metadata || a.channel_coords != b.channel_coords || a.series != b.series)
        return false;
    if (a.hardware_attributes.size() != b.hardware_attributes.size())
        return false;
    for (auto ia = a.hardware_attributes.begin(), ib = b.hardware_attributes.begin();
         ia != a.hardware_attributes.end(); ++ia, ++ib) {
        if (ia->first != ib->first || ia->second.size() != ib->second.size())
            return false;
        for (auto ja = ia->second.begin(), jb = ib->second.begin(); ja != ia->second.end(); ++ja, ++jb)
            if (ja->first != jb->first || ja->second.rows != jb->second.rows || ja->second.cols != jb->second.cols ||
                !bitwise_equal(ja->second.values, jb->second.values))
                return false;
    }
    return true;
}

} // namespace dss
