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

// Description files: the human-readable metadata documents (testbed, data
// source, hardware component, environment, experiment) that explain a
// dataset. YAML 1.1 text with anchors and merge keys; cross-file references
// are string ids resolved against a Registry.

#pragma once

#include "dss/error.hpp"
#include "dss/matrix.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dss {

enum class DocKind { testbed, data_source, hardware_component, environment, experiment };

std::string_view to_string(DocKind kind) noexcept;
std::optional<DocKind> parse_doc_kind(std::string_view text) noexcept;

inline constexpr std::string_view kDefaultDssVersion = "1.0";

// ---------------------------------------------------------------------------
// Validation report

enum class Severity { error, warning };

struct Issue {
    Severity severity = Severity::error;
    std::string code;
    std::string path;     // document pointer, e.g. "data_chains[0].num_data_source_chains"
    std::string message;
    std::string document; // "<kind>:<id>" or a file name, empty when not tied to a document

    bool operator==(const Issue&) const = default;
};

struct ValidationReport {
    std::vector<Issue> items;

    void error(std::string code, std::string path, std::string message, std::string document = {});
    void warning(std::string code, std::string path, std::string message, std::string document = {});
    void merge(const ValidationReport& other);

    /// Canonical order: document, path, code, severity, message. Duplicates removed.
    void canonicalize();

    bool valid() const noexcept { return error_count() == 0; }
    std::size_t error_count() const noexcept;
    std::size_t warning_count() const noexcept;
    bool has(std::string_view code) const noexcept;

    bool operator==(const ValidationReport&) const = default;
};

// ---------------------------------------------------------------------------
// Document model

/// Keys not defined by the standard. Preserved as canonical YAML text so they
/// survive a serialize/parse round-trip; reported as warnings.
using Extras = std::map<std::string, std::string>;

/// Where each field was found in the source text. Not part of equality.
struct SourcePaths {
    std::string self;
    std::map<std::string, std::string> fields;

    std::string of(const std::string& field) const;
    bool operator==(const SourcePaths&) const { return true; }
};

/// Scalar value with an optional unit. `value` keeps the scalar text.
struct Quantity {
    std::string value;
    std::optional<std::string> unit;

    std::optional<double> number() const;
    bool operator==(const Quantity&) const = default;
};

/// Reference to another document: a string id, an inline definition, or both
/// (an inline definition that names its id).
template <class T>
struct Ref {
    std::string id;
    std::shared_ptr<const T> inline_def;

    bool operator==(const Ref& o) const
    {
        if (id != o.id || bool(inline_def) != bool(o.inline_def))
            return false;
        return !inline_def || *inline_def == *o.inline_def;
    }
};

enum class ComponentType { antenna, cable, amplifier, filter, microphone, sensor, other };
std::string_view to_string(ComponentType t) noexcept;
std::optional<ComponentType> parse_component_type(std::string_view text) noexcept;

struct AttributeRef {
    std::string name;                  // e.g. "frequency_response", "am_am", "antenna_pattern"
    std::string data_ref;              // "file.dss.h5#/hardware_attributes/amp/frequency_response"
    std::vector<double> inline_values; // alternative to data_ref
    std::size_t inline_columns = 0;    // row width of inline_values, 0 means a flat vector
    std::vector<std::string> axis_units;
    Extras extras;
    SourcePaths src;

    bool operator==(const AttributeRef&) const = default;
};

struct HardwareComponentDesc {
    std::string id;
    std::string name;
    std::optional<ComponentType> component_type;
    std::optional<std::int64_t> ports;
    std::vector<AttributeRef> attributes;
    Extras extras;
    SourcePaths src;

    bool operator==(const HardwareComponentDesc&) const = default;
};

struct DataSourceDesc {
    std::string id;
    std::string name;
    std::string source_type; // "SDR", "DAQ", ...
    std::optional<std::int64_t> num_channels;
    std::map<std::string, Quantity> parameters;
    Extras extras;
    SourcePaths src;

    bool operator==(const DataSourceDesc&) const = default;
};

/// Channel selection on a data source: "k" or the half-open range "a:b".
struct ChannelSelector {
    std::string raw;
    std::vector<std::size_t> indices;

    bool operator==(const ChannelSelector&) const = default;
};

/// Parses a selector and checks every index against `num_channels`.
/// Throws GrammarError or RangeError.
ChannelSelector parse_channel_selector(std::string_view raw, std::size_t num_channels);

struct ChannelLocations {
    std::string file;
    std::string loc_unit;
    bool operator==(const ChannelLocations&) const = default;
};

enum class OrientationFormat { quaternion, axis_angle };

struct ChannelOrientations {
    std::string file;
    OrientationFormat format = OrientationFormat::quaternion;
    bool operator==(const ChannelOrientations&) const = default;
};

struct DataChainDesc {
    std::string label;
    Ref<DataSourceDesc> data_source;
    std::vector<Ref<HardwareComponentDesc>> hardware_components; // nearest the medium first
    std::string data_source_channel;
    std::optional<std::int64_t> num_data_source_chains;
    std::optional<ChannelLocations> channel_locations;
    std::optional<ChannelOrientations> channel_orientations;
    Extras extras;               // keys on the list item
    Extras chain_extras;         // keys inside `chain`
    Extras channel_chain_extras; // keys inside `channel_chain`
    SourcePaths src;

    bool operator==(const DataChainDesc&) const = default;
};

struct TestbedDesc {
    std::string id;
    std::string name;
    std::string description;
    std::string url;
    std::string level;
    std::vector<DataChainDesc> data_chains;
    Extras extras;
    SourcePaths src;

    bool operator==(const TestbedDesc&) const = default;
};

struct FileRole {
    std::string role;
    std::string path;
    bool operator==(const FileRole&) const = default;
};

struct EnvironmentDesc {
    std::string id;
    std::string name;
    std::map<std::string, Quantity> properties;
    std::vector<FileRole> file_refs;
    Extras extras;
    SourcePaths src;

    bool operator==(const EnvironmentDesc&) const = default;
};

struct MeasurementDesc {
    std::string id;
    std::string file;
    std::string dataset_type;
    std::map<std::string, Quantity> parameters;
    Extras extras;
    SourcePaths src;

    bool operator==(const MeasurementDesc&) const = default;
};

/// Global channel indices in the experiment's channel space: the channel maps
/// of the referenced testbeds concatenated in listed order.
struct ChannelPair {
    std::int64_t tx = 0;
    std::int64_t rx = 0;
    bool operator==(const ChannelPair&) const = default;
    auto operator<=>(const ChannelPair&) const = default;
};

struct TxRxMapping {
    bool full = false;
    std::vector<ChannelPair> pairs; // explicit mode
    std::string tx_channels;        // selectors used by "full"; empty = every channel
    std::string rx_channels;
    SourcePaths src;
    bool operator==(const TxRxMapping&) const = default;
};

enum class MediaKind { photo, video, scan };
std::string_view to_string(MediaKind kind) noexcept;

struct MediaRef {
    MediaKind kind = MediaKind::photo;
    std::string path;
    bool operator==(const MediaRef&) const = default;
};

struct ExperimentDesc {
    std::string id;
    std::string name;
    std::vector<std::string> testbeds;
    std::optional<std::string> environment;
    std::vector<MeasurementDesc> measurements;
    std::optional<TxRxMapping> tx_rx_mapping;
    std::map<std::string, Quantity> variables;
    std::vector<MediaRef> media;
    std::optional<std::string> sync_info; // canonical YAML of a free-form map
    Extras extras;
    SourcePaths src;

    bool operator==(const ExperimentDesc&) const = default;
};

using DocBody =
    std::variant<TestbedDesc, DataSourceDesc, HardwareComponentDesc, EnvironmentDesc, ExperimentDesc>;

struct DescriptionDoc {
    DocKind kind = DocKind::testbed;
    std::string id;
    std::string dss_version{kDefaultDssVersion};
    DocBody body;

    // provenance, not part of equality
    std::string source_text;
    std::filesystem::path source_path;
    std::size_t stream_index = 0; // YAML document within the stream
    std::vector<Issue> parse_issues;

    std::string label() const { return std::string(to_string(kind)) + ":" + id; }

    template <class T> const T& as() const { return std::get<T>(body); }

    bool operator==(const DescriptionDoc& o) const
    {
        return kind == o.kind && id == o.id && dss_version == o.dss_version && body == o.body;
    }
};

/// Parses exactly one document of `kind` from `text`. The text may be a flat
/// document (`kind:`/`id:` at top level) or the keyed form used by testbed
/// files (`Techtile: &Techtile {...}`), possibly preceded by anchored stubs.
/// Throws SyntaxError, KindMismatch or TypeError.
DescriptionDoc parse_description(std::string_view text, DocKind kind);

/// Parses every document in `text` (all YAML documents, every keyed entry).
/// `hint` is used for documents that neither declare `kind:` nor have an
/// inferable shape (the filename-suffix convention).
std::vector<DescriptionDoc> parse_documents(std::string_view text,
                                            std::optional<DocKind> hint = std::nullopt,
                                            const std::filesystem::path& source_path = {});

/// Flat-form YAML for a document. Reparsing yields an equal document.
std::string serialize(const DescriptionDoc& doc);

struct SourcePosition {
    int line = 0; // 1-based
    int column = 0;
};

/// Locates a document pointer inside YAML text, following merge keys.
std::optional<SourcePosition> locate(std::string_view text, std::string_view path,
                                     std::size_t stream_index = 0);

// ---------------------------------------------------------------------------
// Registry

class Registry {
public:
    Registry() = default;

    /// Loads every `*.yaml`/`*.yml` file in `dir` (non-recursive). Files that
    /// fail to parse are recorded in load_issues().
    static Registry load_dir(const std::filesystem::path& dir);

    /// Loads the given files or directories.
    static Registry load_paths(const std::vector<std::filesystem::path>& paths);

    void add(DescriptionDoc doc);
    void add_text(std::string_view text, const std::filesystem::path& source_path,
                  std::optional<DocKind> hint = std::nullopt);

    const DescriptionDoc* find(DocKind kind, std::string_view id) const;
    const std::vector<std::shared_ptr<const DescriptionDoc>>& documents() const { return docs_; }
    const ValidationReport& load_issues() const { return load_issues_; }

private:
    std::vector<std::shared_ptr<const DescriptionDoc>> docs_;
    ValidationReport load_issues_;
};

/// Kind implied by a `name.<kind>.yaml` file name.
std::optional<DocKind> kind_from_filename(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// File access used by validation and channel expansion

struct FileAccess {
    /// Reads an N x C numeric table. The default handles CSV and .npy.
    std::function<Matrix(const std::filesystem::path&, const std::string& object)> load_matrix;
    /// True when `object` exists inside a dataset file. Unset means unchecked.
    std::function<bool(const std::filesystem::path&, const std::string& object)> has_object;
    /// When false, references to external files are not checked at all.
    bool check_files = true;
};

/// CSV and .npy support only.
FileAccess default_file_access();

/// Reads a plain CSV (comma or whitespace separated, '#' comments) table.
/// Throws IoError, FormatError (non-numeric cell) or ShapeError (ragged rows).
Matrix read_csv_matrix(const std::filesystem::path& path);
/// Reads a little-endian float64/float32/int .npy array of rank 1 or 2.
/// Throws IoError, FormatError (malformed file) or ShapeError (rank > 2).
Matrix read_npy_matrix(const std::filesystem::path& path);
void write_csv_matrix(const std::filesystem::path& path, const Matrix& m);

/// Splits "file#/object" into its parts; object is empty when absent.
std::pair<std::string, std::string> split_data_ref(std::string_view ref);

// ---------------------------------------------------------------------------
// Validation and resolution

ValidationReport validate(const DescriptionDoc& doc, const Registry& registry,
                          const FileAccess& files = default_file_access());

/// Validates every document in the registry plus its load issues.
ValidationReport validate_all(const Registry& registry,
                              const FileAccess& files = default_file_access());

using Quaternion = std::array<double, 4>; // w, x, y, z

struct ChannelRecord {
    std::size_t global_index = 0;
    std::string chain_label;
    std::size_t chain_instance = 0;
    std::size_t source_channel = 0;
    std::optional<std::array<double, 3>> location; // meters when loc_unit is interpreted
    std::optional<Quaternion> orientation;
    std::vector<std::string> hardware_chain;
};

struct ChannelMap {
    std::vector<ChannelRecord> channels;
    ValidationReport notes; // warnings raised during expansion
};

/// Number of channels a chain contributes, or nullopt when the selector is
/// malformed or the instance count is missing.
std::optional<std::size_t> chain_channel_count(const DataChainDesc& chain);

/// Expands a testbed into its flat channel map. `base_dir` anchors relative
/// location files. `registry` (optional) supplies referenced data sources for
/// selector range checks. Throws IoError, ShapeError, GrammarError, RangeError.
ChannelMap expand_channels(const TestbedDesc& testbed, const FileAccess& files,
                           const std::filesystem::path& base_dir = {},
                           const Registry* registry = nullptr);

/// Converts axis-angle (unit axis x,y,z and angle in radians) to a quaternion.
Quaternion quaternion_from_axis_angle(double ax, double ay, double az, double angle);

struct ResolvedTestbed {
    TestbedDesc testbed;
    ChannelMap channels;
    std::size_t offset = 0; // first global index in the experiment channel space
};

struct ResolvedExperiment {
    ExperimentDesc experiment;
    std::vector<ResolvedTestbed> testbeds;
    std::optional<EnvironmentDesc> environment;
    std::map<std::string, DataSourceDesc> data_sources;
    std::map<std::string, HardwareComponentDesc> hardware_components;
    std::vector<ChannelPair> pairs; // normalized explicit mapping
    std::size_t channel_count = 0;
};

/// Replaces every reference with its document and normalizes the tx/rx
/// mapping. Throws UnresolvedRef or MappingError.
ResolvedExperiment resolve_experiment(const DescriptionDoc& experiment, const Registry& registry,
                                      const FileAccess& files = default_file_access());

} // namespace dss
