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

#include "dss/descfiles.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace dss {

namespace fs = std::filesystem;

namespace {

constexpr auto kUnbounded = std::numeric_limits<std::size_t>::max();

class Checker {
public:
    Checker(const DescriptionDoc& doc, const Registry& registry, const FileAccess& files)
        : doc_(doc), registry_(registry), files_(files), label_(doc.label())
    {
        if (!doc.source_path.empty())
            base_dir_ = doc.source_path.parent_path();
    }

    ValidationReport run()
    {
        for (auto issue : doc_.parse_issues) {
            issue.document = label_;
            report_.items.push_back(issue);
        }
        check_header();
        std::visit([this](const auto& body) { check(body); }, doc_.body);
        return std::move(report_);
    }

private:
    void error(const std::string& code, const std::string& path, const std::string& msg)
    {
        report_.error(code, path, msg, label_);
    }
    void warning(const std::string& code, const std::string& path, const std::string& msg)
    {
        report_.warning(code, path, msg, label_);
    }

    void extras(const Extras& ex, const SourcePaths& src)
    {
        for (const auto& [key, text] : ex)
            warning("unknown_key", src.of(key), "key '" + key + "' is not part of the standard and is kept verbatim");
    }

    void check_header()
    {
        const auto& v = doc_.dss_version;
        const auto major = v.substr(0, v.find('.'));
        if (major != "1")
            error("unsupported_version", root().empty() ? "dss_version" : root() + ".dss_version", "dss_version '" + v + "' is not supported (expected 1.x)");
        if (doc_.id.empty())
            error("missing_field", root(), "document has no id");
        else if (doc_.id.find('/') != std::string::npos)
            error("invalid_id", root(), "id '" + doc_.id + "' must not contain '/'");
        std::size_t same = 0;
        for (const auto& d : registry_.documents())
            if (d->kind == doc_.kind && d->id == doc_.id)
                ++same;
        if (same > 1)
            error("duplicate_id", root(),
                  "id '" + doc_.id + "' is defined " + std::to_string(same) + " times in the registry");
    }

    std::string root() const
    {
        return std::visit([](const auto& b) { return b.src.self; }, doc_.body);
    }

    void units(const std::map<std::string, Quantity>& m, const std::string& base)
    {
        for (const auto& [name, q] : m) {
            const auto p = base + "." + name;
            if (q.unit && q.unit->empty())
                error("empty_unit", p, "unit of '" + name + "' is an empty string");
            if (q.unit && units::dimension_of(*q.unit) && !q.number())
                error("invalid_value", p, "'" + name + "' has unit " + *q.unit + " but a non-numeric value");
        }
    }

    // ----- data source
    void check(const DataSourceDesc& d) { check_source_body(d); }

    void check_source_body(const DataSourceDesc& d)
    {
        extras(d.extras, d.src);
        if (!d.num_channels)
            error("missing_field", d.src.self, "num_channels is required");
        else if (*d.num_channels < 1)
            error("invalid_value", d.src.of("num_channels"), "num_channels must be at least 1");
        units(d.parameters, d.src.of("parameters"));
        if ((d.source_type == "SDR" || d.source_type == "DAQ") && !d.parameters.count("sampling_rate") &&
            !d.parameters.count("bandwidth"))
            warning("missing_common_parameter", d.src.self,
                    d.source_type + " data source declares neither sampling_rate nor bandwidth");
    }

    // ----- hardware component
    void check(const HardwareComponentDesc& c) { check_component_body(c); }

    void check_component_body(const HardwareComponentDesc& c)
    {
        extras(c.extras, c.src);
        if (!c.component_type)
            error("missing_field", c.src.self, "component_type is required");
        if (!c.ports)
            error("missing_field", c.src.self, "ports is required");
        else if (*c.ports < 1)
            error("invalid_value", c.src.of("ports"), "ports must be at least 1");
        std::set<std::string> names;
        for (const auto& a : c.attributes) {
            extras(a.extras, a.src);
            if (a.name.empty())
                error("missing_field", a.src.self, "attribute needs a name");
            else if (!names.insert(a.name).second)
                error("duplicate_attribute", a.src.self, "attribute '" + a.name + "' defined twice");
            for (std::size_t i = 0; i < a.axis_units.size(); ++i)
                if (a.axis_units[i].empty())
                    error("empty_unit", a.src.of("axis_units") + "[" + std::to_string(i) + "]", "empty unit string");
            if (a.data_ref.empty() && a.inline_values.empty()) {
                error("missing_field", a.src.self, "attribute needs data_ref or values");
                continue;
            }
            if (!a.data_ref.empty())
                check_data_ref(a);
        }
    }

    void check_data_ref(const AttributeRef& a)
    {
        if (!files_.check_files)
            return;
        const auto [file, object] = split_data_ref(a.data_ref);
        const auto path = base_dir_ / file;
        const auto p = a.src.of("data_ref");
        std::error_code ec;
        if (!fs::exists(path, ec)) {
            error("attribute_unresolved", p, "data_ref file '" + file + "' does not exist");
            return;
        }
        if (object.empty() && (path.extension() == ".csv" || path.extension() == ".npy" || path.extension() == ".txt")) {
            try {
                files_.load_matrix(path, object);
            } catch (const Error& e) {
                error("attribute_unresolved", p, e.detail());
            }
            return;
        }
        if (!files_.has_object) {
            warning("attribute_unchecked", p, "dataset object '" + object + "' was not checked");
            return;
        }
        if (!files_.has_object(path, object.empty() ? "/data" : object))
            error("attribute_unresolved", p, "dataset path '" + object + "' not found in '" + file + "'");
    }

    // ----- testbed
    const DataSourceDesc* source_of(const DataChainDesc& c) const
    {
        if (c.data_source.inline_def)
            return c.data_source.inline_def.get();
        if (const auto* d = registry_.find(DocKind::data_source, c.data_source.id))
            return &d->as<DataSourceDesc>();
        return nullptr;
    }

    void check(const TestbedDesc& t)
    {
        extras(t.extras, t.src);
        if (t.data_chains.empty())
            error("missing_field", t.src.self, "a testbed needs at least one data chain");
        std::set<std::string> labels;
        for (const auto& c : t.data_chains)
            check_chain(c, labels);
    }

    void check_chain(const DataChainDesc& c, std::set<std::string>& labels)
    {
        const auto& s = c.src;
        extras(c.extras, s);
        extras(c.chain_extras, s);
        extras(c.channel_chain_extras, s);
        if (c.label.empty())
            error("missing_field", s.self, "data chain needs a label");
        else if (!labels.insert(c.label).second)
            error("duplicate_label", s.of("label"), "label '" + c.label + "' used by more than one chain");

        const DataSourceDesc* source = nullptr;
        if (c.data_source.id.empty() && !c.data_source.inline_def) {
            error("missing_field", s.self, "data chain needs a data_source");
        } else {
            source = source_of(c);
            if (!source)
                error("unresolved_ref", s.of("data_source"),
                      "data source '" + c.data_source.id + "' is not defined in the registry");
            else if (c.data_source.inline_def)
                check_source_body(*c.data_source.inline_def);
        }
        for (std::size_t i = 0; i < c.hardware_components.size(); ++i) {
            const auto& r = c.hardware_components[i];
            const auto p = s.of("hardware_components") + "[" + std::to_string(i) + "]";
            if (r.inline_def) {
                check_component_body(*r.inline_def);
            } else if (!registry_.find(DocKind::hardware_component, r.id)) {
                error("unresolved_ref", p, "hardware component '" + r.id + "' is not defined in the registry");
            }
        }

        std::optional<std::size_t> per_instance;
        if (c.data_source_channel.empty()) {
            error("missing_field", s.self, "data_source_channel is required");
        } else {
            std::size_t limit = kUnbounded;
            if (source && source->num_channels && *source->num_channels > 0)
                limit = static_cast<std::size_t>(*source->num_channels);
            try {
                per_instance = parse_channel_selector(c.data_source_channel, limit).indices.size();
            } catch (const Error& e) {
                error(e.code() == ErrorCode::GrammarError ? "selector_grammar" : "selector_range",
                      s.of("data_source_channel"), e.detail());
            }
        }
        std::optional<std::size_t> total;
        if (!c.num_data_source_chains) {
            error("missing_field", s.self, "num_data_source_chains is required");
        } else if (*c.num_data_source_chains < 1) {
            error("invalid_value", s.of("num_data_source_chains"), "num_data_source_chains must be at least 1");
        } else if (per_instance) {
            total = *per_instance * static_cast<std::size_t>(*c.num_data_source_chains);
        }

        if (!c.channel_locations) {
            warning("no_channel_locations", s.self, "chain '" + c.label + "' has no channel_locations");
        } else {
            const auto& loc = *c.channel_locations;
            const auto p = s.of("channel_locations");
            if (loc.loc_unit.empty())
                error("missing_unit", p, "channel_locations needs a loc_unit");
            else if (!units::scale_to_si(loc.loc_unit, units::Dimension::length))
                warning("unit_not_interpreted", p + ".loc_unit", "loc_unit '" + loc.loc_unit + "' is kept verbatim");
            if (loc.file.empty())
                error("missing_field", p, "channel_locations needs a file");
            else
                check_table(loc.file, 3, total, p, "location");
        }
        if (c.channel_orientations) {
            const auto& o = *c.channel_orientations;
            const auto p = s.of("channel_orientations");
            if (o.file.empty()) {
                error("missing_field", p, "channel_orientations needs a file");
            } else if (auto m = check_table(o.file, 4, total, p, "orientation")) {
                for (std::size_t r = 0; r < m->rows; ++r) {
                    double norm = 0;
                    if (o.format == OrientationFormat::quaternion) {
                        for (std::size_t k = 0; k < 4; ++k)
                            norm += (*m)(r, k) * (*m)(r, k);
                    } else {
                        for (std::size_t k = 0; k < 3; ++k)
                            norm += (*m)(r, k) * (*m)(r, k);
                    }
                    if (std::abs(std::sqrt(norm) - 1.0) > 1e-9) {
                        error("invalid_orientation", p,
                              "row " + std::to_string(r) + " is not a unit " +
                                  (o.format == OrientationFormat::quaternion ? "quaternion" : "axis"));
                        break;
                    }
                }
            }
        }
    }

    std::optional<Matrix> check_table(const std::string& ref, std::size_t cols, std::optional<std::size_t> rows,
                                      const std::string& p, const std::string& what)
    {
        if (!files_.check_files)
            return std::nullopt;
        const auto [file, object] = split_data_ref(ref);
        Matrix m;
        try {
            m = files_.load_matrix(base_dir_ / file, object);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::ShapeError)
                error(what + "_shape", p + ".file", e.detail());
            else
                error(what + "_unreadable", p + ".file", "cannot read '" + file + "': " + e.detail());
            return std::nullopt;
        }
        if (m.cols != cols) {
            error(what + "_shape", p + ".file",
                  "'" + file + "' has " + std::to_string(m.cols) + " columns, expected " + std::to_string(cols));
            return std::nullopt;
        }
        if (rows && m.rows != *rows) {
            error(what + "_count_mismatch", p + ".file",
                  "'" + file + "' has " + std::to_string(m.rows) + " rows but the chain has " + std::to_string(*rows) +
                      " channels");
        }
        return m;
    }

    // ----- environment
    void check(const EnvironmentDesc& e)
    {
        extras(e.extras, e.src);
        units(e.properties, e.src.of("properties"));
        std::set<std::string> roles;
        for (std::size_t i = 0; i < e.file_refs.size(); ++i) {
            const auto p = e.src.of("file_refs") + "[" + std::to_string(i) + "]";
            if (e.file_refs[i].role.empty() || e.file_refs[i].path.empty())
                error("missing_field", p, "file_refs entries need role and path");
            else if (!roles.insert(e.file_refs[i].role).second)
                error("duplicate_role", p, "role '" + e.file_refs[i].role + "' appears more than once");
        }
    }

    // ----- experiment
    void check(const ExperimentDesc& x)
    {
        extras(x.extras, x.src);
        if (x.testbeds.empty())
            error("missing_field", x.src.self, "an experiment references at least one testbed");
        std::optional<std::size_t> total = 0;
        for (std::size_t i = 0; i < x.testbeds.size(); ++i) {
            const auto p = x.src.of("testbeds") + "[" + std::to_string(i) + "]";
            const auto* tb = registry_.find(DocKind::testbed, x.testbeds[i]);
            if (!tb) {
                error("unresolved_ref", p, "testbed '" + x.testbeds[i] + "' is not defined in the registry");
                total.reset();
                continue;
            }
            for (const auto& c : tb->as<TestbedDesc>().data_chains) {
                const auto n = chain_channel_count(c);
                if (!n || !total)
                    total.reset();
                else
                    *total += *n;
            }
        }
        if (x.environment && !registry_.find(DocKind::environment, *x.environment))
            error("unresolved_ref", x.src.of("environment"),
                  "environment '" + *x.environment + "' is not defined in the registry");
        std::set<std::string> ids;
        for (const auto& m : x.measurements) {
            extras(m.extras, m.src);
            if (m.id.empty())
                error("missing_field", m.src.self, "measurement needs an id");
            else if (!ids.insert(m.id).second)
                error("duplicate_id", m.src.of("id"), "measurement id '" + m.id + "' is used twice");
            if (m.file.empty())
                error("missing_field", m.src.self, "measurement needs a dataset file");
            units(m.parameters, m.src.of("parameters"));
        }
        units(x.variables, x.src.of("variables"));
        for (std::size_t i = 0; i < x.media.size(); ++i)
            if (x.media[i].path.empty())
                error("missing_field", x.src.of("media") + "[" + std::to_string(i) + "]", "media entry needs a path");
        if (x.tx_rx_mapping && total)
            check_mapping(*x.tx_rx_mapping, *total, x.src.of("tx_rx_mapping"));
    }

    void check_mapping(const TxRxMapping& m, std::size_t total, const std::string& p)
    {
        const auto at = [&](const std::string& f) { return m.src.self.empty() ? p + "." + f : m.src.of(f); };
        for (const auto& [sel, name] : {std::pair{m.tx_channels, "tx"}, std::pair{m.rx_channels, "rx"}}) {
            if (sel.empty())
                continue;
            try {
                parse_channel_selector(sel, total);
            } catch (const Error& e) {
                error(e.code() == ErrorCode::GrammarError ? "selector_grammar" : "mapping_out_of_range",
                      at(name), e.detail());
            }
        }
        for (std::size_t i = 0; i < m.pairs.size(); ++i) {
            const auto& pr = m.pairs[i];
            const auto in_range = [&](std::int64_t v) { return v >= 0 && static_cast<std::size_t>(v) < total; };
            if (!in_range(pr.tx) || !in_range(pr.rx))
                error("mapping_out_of_range", at("pairs") + "[" + std::to_string(i) + "]",
                      "pair (" + std::to_string(pr.tx) + ", " + std::to_string(pr.rx) + ") references a channel outside 0.." +
                          std::to_string(total == 0 ? 0 : total - 1));
        }
    }

    const DescriptionDoc& doc_;
    const Registry& registry_;
    const FileAccess& files_;
    std::string label_;
    fs::path base_dir_;
    ValidationReport report_;
};

} // namespace

std::optional<std::size_t> chain_channel_count(const DataChainDesc& chain)
{
    if (!chain.num_data_source_chains || *chain.num_data_source_chains < 1)
        return std::nullopt;
    try {
        const auto sel = parse_channel_selector(chain.data_source_channel, kUnbounded);
        return sel.indices.size() * static_cast<std::size_t>(*chain.num_data_source_chains);
    } catch (const Error&) {
        return std::nullopt;
    }
}

ValidationReport validate(const DescriptionDoc& doc, const Registry& registry, const FileAccess& files)
{
    auto report = Checker(doc, registry, files).run();
    report.canonicalize();
    return report;
}

ValidationReport validate_all(const Registry& registry, const FileAccess& files)
{
    ValidationReport report = registry.load_issues();
    for (const auto& d : registry.documents())
        report.merge(validate(*d, registry, files));
    report.canonicalize();
    return report;
}

} // namespace dss
