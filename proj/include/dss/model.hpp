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

// In-memory tensor data model: named axes with coordinates, units and
// dataset-type profiles (channel sounding, acoustic, simulation and
// user-registered types).

#pragma once

#include "dss/error.hpp"
#include "dss/matrix.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dss {

using Complex = std::complex<double>;

enum class AxisKind { tx, rx, time, sample, speaker, microphone, channel, run, metric, custom };
enum class CoordSemantics { delay_seconds, frequency_hz_absolute, time_seconds, index, position_m, custom };
enum class Domain { delay, frequency, time, none };
enum class ValueKind { real, complex };

std::string_view to_string(AxisKind v) noexcept;
std::string_view to_string(CoordSemantics v) noexcept;
std::string_view to_string(Domain v) noexcept;
std::string_view to_string(ValueKind v) noexcept;
std::optional<AxisKind> parse_axis_kind(std::string_view s) noexcept;
std::optional<CoordSemantics> parse_coord_semantics(std::string_view s) noexcept;
std::optional<Domain> parse_domain(std::string_view s) noexcept;

/// Bitwise comparison of double sequences (NaN payloads and signed zeros
/// included).
bool bitwise_equal(std::span<const double> a, std::span<const double> b) noexcept;

struct CoordinateVec {
    std::vector<double> values;
    std::string unit;
    CoordSemantics semantics = CoordSemantics::index;

    bool operator==(const CoordinateVec& o) const
    {
        return unit == o.unit && semantics == o.semantics && bitwise_equal(values, o.values);
    }
};

struct AxisDef {
    std::string name;
    AxisKind kind = AxisKind::custom;
    std::size_t length = 1;
    std::optional<CoordinateVec> coordinate;

    bool operator==(const AxisDef&) const = default;
};

/// Axis whose name is the kind's canonical name ("tx", "rx", ...).
AxisDef make_axis(AxisKind kind, std::size_t length, std::optional<CoordinateVec> coordinate = std::nullopt);

using AttrValue = std::variant<std::int64_t, double, std::string>;
using Attributes = std::map<std::string, AttrValue>;

/// Normalized text form used by dataset equality ("%.17g" for doubles).
std::string attr_to_string(const AttrValue& v);
std::optional<double> attr_number(const Attributes& attrs, const std::string& key);

struct SeriesPoint {
    double t = 0.0;
    double value = 0.0;
};

/// One simulation metric over time for one run. Times strictly increase.
struct RaggedSeries {
    std::int64_t run = 0;
    std::string metric;
    std::vector<SeriesPoint> points;
    std::string unit;

    bool operator==(const RaggedSeries& o) const;
};

/// Throws InvalidArgument unless `t` strictly increases and the metric name is
/// usable as an object name.
void check_series(const RaggedSeries& s);

struct EmbeddedDocument {
    std::string kind; // testbed, data_source, ...
    std::string id;
    std::string text; // verbatim description-file text

    bool operator==(const EmbeddedDocument&) const = default;
    auto operator<=>(const EmbeddedDocument&) const = default;
};

struct ChannelCoords {
    Matrix positions;                  // N x 3, meters
    std::optional<Matrix> orientations; // N x 4 unit quaternions (w, x, y, z)

    bool operator==(const ChannelCoords& o) const;
};

using TensorData = std::variant<std::vector<double>, std::vector<Complex>>;

/// Names that cannot be used as user attribute keys.
bool is_reserved_attr(std::string_view key) noexcept;

class DssDataset {
public:
    struct Parts {
        std::string dataset_type;
        std::vector<AxisDef> axes;
        Domain domain = Domain::none;
        TensorData data;
        Attributes attrs;
        std::vector<EmbeddedDocument> metadata;
        std::map<std::string, ChannelCoords> channel_coords;
        std::map<std::string, std::map<std::string, Matrix>> hardware_attributes;
        std::vector<RaggedSeries> series;
    };

    DssDataset() = default;

    /// Assembles a dataset and checks the structural invariants (element
    /// count, coordinate lengths, channel-coordinate shapes, series
    /// monotonicity). Profile conformance is checked by new_dataset and
    /// validate_profile.
    static DssDataset from_parts(Parts parts);

    const Parts& parts() const noexcept { return p_; }
    const std::string& dataset_type() const noexcept { return p_.dataset_type; }
    const std::vector<AxisDef>& axes() const noexcept { return p_.axes; }
    Domain domain() const noexcept { return p_.domain; }
    const Attributes& attrs() const noexcept { return p_.attrs; }
    const std::vector<EmbeddedDocument>& metadata() const noexcept { return p_.metadata; }
    const std::map<std::string, ChannelCoords>& channel_coords() const noexcept { return p_.channel_coords; }
    const std::map<std::string, std::map<std::string, Matrix>>& hardware_attributes() const noexcept
    {
        return p_.hardware_attributes;
    }
    const std::vector<RaggedSeries>& series() const noexcept { return p_.series; }

    ValueKind value_kind() const noexcept;
    bool is_complex() const noexcept { return value_kind() == ValueKind::complex; }
    std::vector<std::size_t> shape() const;
    std::size_t size() const noexcept;

    std::span<const double> real_data() const;
    std::span<const Complex> complex_data() const;
    std::span<double> real_data();
    std::span<Complex> complex_data();

    /// Index of the named axis; throws AxisError.
    std::size_t axis_index(std::string_view name) const;
    const AxisDef& axis(std::string_view name) const { return p_.axes[axis_index(name)]; }
    std::optional<std::size_t> find_axis(std::string_view name) const noexcept;

    void set_attr(const std::string& key, AttrValue value);
    void erase_attr(const std::string& key);
    void set_domain(Domain d) noexcept { p_.domain = d; }
    void set_coordinate(std::string_view axis, std::optional<CoordinateVec> coord);
    void add_metadata(EmbeddedDocument doc);
    void set_hardware_attribute(const std::string& component_id, const std::string& name, Matrix values);
    void add_series(RaggedSeries s);

    /// Replaces the tensor and axes together; invariants rechecked.
    void reshape(std::vector<AxisDef> axes, TensorData data);

    /// Per-index position/orientation table for an axis. Throws AxisError,
    /// ShapeError (rows != axis length, positions not N x 3, orientations not
    /// N x 4) or NormError (quaternion norm off by more than 1e-9).
    void attach_channel_coords(std::string_view axis, Matrix positions, std::optional<Matrix> orientations = {});

    /// The dataset equality relation used by storage round-trips.
    bool operator==(const DssDataset& o) const;

private:
    explicit DssDataset(Parts p) : p_(std::move(p)) {}
    void check_invariants() const;

    Parts p_;
};

DssDataset attach_channel_coords(DssDataset ds, std::string_view axis, Matrix positions,
                                 std::optional<Matrix> orientations = {});

// ---------------------------------------------------------------------------
// dataset types

struct AxisSpec {
    AxisKind kind = AxisKind::custom;
    std::string name; // empty: the kind's canonical name

    std::string effective_name() const;
    bool operator==(const AxisSpec&) const = default;
};

struct DatasetProfile {
    std::vector<AxisSpec> axes; // exact order
    ValueKind value_kind = ValueKind::complex;
    std::vector<std::string> required_attrs;
    std::vector<Domain> domains; // allowed; empty allows any
    bool ragged_series = false;  // simulation-style: no dense tensor

    bool operator==(const DatasetProfile&) const = default;
};

inline constexpr std::string_view kChannelSounding = "channel_sounding";
inline constexpr std::string_view kAcoustic = "acoustic";
inline constexpr std::string_view kSimulation = "simulation";

class DatasetTypeRegistry {
public:
    /// Holds the three built-in types.
    DatasetTypeRegistry();

    const DatasetProfile* find(std::string_view name) const noexcept;
    bool is_builtin(std::string_view name) const noexcept;
    std::vector<std::string> names() const;

    /// Returns a registry extended with `name`. Throws ReservedName for a
    /// built-in name and DuplicateType for an already registered one.
    DatasetTypeRegistry with_type(std::string name, DatasetProfile profile) const;

private:
    std::map<std::string, DatasetProfile, std::less<>> entries_;
};

DatasetTypeRegistry register_type(const DatasetTypeRegistry& registry, std::string name, DatasetProfile profile);

/// Zero-initialized dataset conforming to the registered profile. Throws
/// UnknownType or ProfileViolation.
DssDataset new_dataset(std::string_view dataset_type, std::vector<AxisDef> axes, Domain domain,
                       Attributes attrs = {}, const DatasetTypeRegistry& registry = DatasetTypeRegistry(),
                       std::optional<ValueKind> value_kind = std::nullopt);

/// Rechecks a dataset against its registered profile. Types unknown to the
/// registry pass when structurally valid. Throws ProfileViolation.
void validate_profile(const DssDataset& ds, const DatasetTypeRegistry& registry = DatasetTypeRegistry());

// ---------------------------------------------------------------------------
// slicing

struct SelectAll {
    bool operator==(const SelectAll&) const = default;
};

/// One axis selection: everything, a single index (axis kept with length 1),
/// or an index list (order and duplicates honored).
using AxisSelection = std::variant<SelectAll, std::size_t, std::vector<std::size_t>>;

struct SliceSelector {
    std::map<std::string, AxisSelection> axes;

    SliceSelector& set(std::string axis, AxisSelection sel)
    {
        axes[std::move(axis)] = std::move(sel);
        return *this;
    }
};

/// Short names accepted for axes: t, sp, mic, ch.
std::string canonical_axis_name(std::string_view name);

/// Parses "tx=0,rx=0:4,t=0", "rx=[0,1,2,3]" or "(tx=0, rx=[0,1], t=0)".
/// Ranges are half-open; "all" or ":" selects everything. Throws
/// GrammarError.
SliceSelector parse_slice_selector(std::string_view text);

/// Indices selected on an axis of the given length. Throws IndexError.
std::vector<std::size_t> selected_indices(const AxisSelection& sel, std::size_t length, std::string_view axis);

/// Copy of the selected sub-tensor with coordinates and channel coordinates
/// gathered consistently. Throws AxisError or IndexError.
DssDataset slice(const DssDataset& ds, const SliceSelector& sel);

} // namespace dss
