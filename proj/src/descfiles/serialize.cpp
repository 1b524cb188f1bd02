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

#include "yaml_util.hpp"

namespace dss {

namespace {

using yaml::bare;
using yaml::quoted;

YAML::Node value_node(const std::string& text)
{
    if (!text.empty() && (text.front() == '[' || text.front() == '{')) {
        try {
            return YAML::Load(text);
        } catch (const YAML::Exception&) {
        }
    }
    YAML::Node probe;
    try {
        probe = YAML::Load(text);
    } catch (const YAML::Exception&) {
        return quoted(text);
    }
    if (probe.IsScalar() && probe.Scalar() == text && !yaml::is_quoted(probe))
        return bare(text);
    return quoted(text);
}

YAML::Node quantity_node(const Quantity& q)
{
    if (!q.unit)
        return value_node(q.value);
    YAML::Node n(YAML::NodeType::Map);
    n["value"] = value_node(q.value);
    n["unit"] = quoted(*q.unit);
    return n;
}

YAML::Node quantity_map(const std::map<std::string, Quantity>& m)
{
    YAML::Node n(YAML::NodeType::Map);
    for (const auto& [k, q] : m)
        n[k] = quantity_node(q);
    return n;
}

void add_extras(YAML::Node& n, const Extras& extras)
{
    for (const auto& [k, text] : extras)
        n[k] = YAML::Load(text);
}

YAML::Node int_node(std::int64_t v) { return bare(std::to_string(v)); }

YAML::Node data_source_node(const DataSourceDesc& d, bool with_header)
{
    YAML::Node n(YAML::NodeType::Map);
    if (with_header)
        n["kind"] = bare("data_source");
    n["id"] = quoted(d.id);
    if (!d.name.empty())
        n["name"] = quoted(d.name);
    if (!d.source_type.empty())
        n["source_type"] = quoted(d.source_type);
    if (d.num_channels)
        n["num_channels"] = int_node(*d.num_channels);
    if (!d.parameters.empty())
        n["parameters"] = quantity_map(d.parameters);
    add_extras(n, d.extras);
    return n;
}

YAML::Node component_node(const HardwareComponentDesc& c, bool with_header)
{
    YAML::Node n(YAML::NodeType::Map);
    if (with_header)
        n["kind"] = bare("hardware_component");
    n["id"] = quoted(c.id);
    if (!c.name.empty())
        n["name"] = quoted(c.name);
    if (c.component_type)
        n["component_type"] = bare(std::string(to_string(*c.component_type)));
    if (c.ports)
        n["ports"] = int_node(*c.ports);
    if (!c.attributes.empty()) {
        YAML::Node attrs(YAML::NodeType::Sequence);
        for (const auto& a : c.attributes) {
            YAML::Node an(YAML::NodeType::Map);
            an["name"] = quoted(a.name);
            if (!a.data_ref.empty())
                an["data_ref"] = quoted(a.data_ref);
            if (!a.inline_values.empty()) {
                YAML::Node vals(YAML::NodeType::Sequence);
                vals.SetStyle(YAML::EmitterStyle::Flow);
                if (a.inline_columns == 0) {
                    for (double v : a.inline_values)
                        vals.push_back(bare(YAML::Node(v).Scalar()));
                } else {
                    for (std::size_t r = 0; r * a.inline_columns < a.inline_values.size(); ++r) {
                        YAML::Node row(YAML::NodeType::Sequence);
                        for (std::size_t c2 = 0; c2 < a.inline_columns; ++c2)
                            row.push_back(bare(YAML::Node(a.inline_values[r * a.inline_columns + c2]).Scalar()));
                        vals.push_back(row);
                    }
                }
                an["values"] = vals;
            }
            if (!a.axis_units.empty()) {
                YAML::Node units(YAML::NodeType::Sequence);
                for (const auto& u : a.axis_units)
                    units.push_back(quoted(u));
                an["axis_units"] = units;
            }
            add_extras(an, a.extras);
            attrs.push_back(an);
        }
        n["attributes"] = attrs;
    }
    add_extras(n, c.extras);
    return n;
}

template <class T, class Fn>
YAML::Node ref_node(const Ref<T>& ref, Fn body)
{
    if (!ref.inline_def)
        return quoted(ref.id);
    return body(*ref.inline_def, false);
}

YAML::Node testbed_node(const TestbedDesc& t)
{
    YAML::Node n(YAML::NodeType::Map);
    n["kind"] = bare("testbed");
    n["id"] = quoted(t.id);
    if (!t.name.empty())
        n["name"] = quoted(t.name);
    if (!t.description.empty())
        n["description"] = quoted(t.description);
    if (!t.url.empty())
        n["url"] = quoted(t.url);
    if (!t.level.empty())
        n["level"] = quoted(t.level);
    YAML::Node chains(YAML::NodeType::Sequence);
    for (const auto& c : t.data_chains) {
        YAML::Node item(YAML::NodeType::Map);
        item["label"] = quoted(c.label);
        YAML::Node chain(YAML::NodeType::Map);
        if (!c.data_source.id.empty() || c.data_source.inline_def)
            chain["data_source"] = ref_node(c.data_source, data_source_node);
        YAML::Node channel_chain(YAML::NodeType::Map);
        YAML::Node comps(YAML::NodeType::Sequence);
        for (const auto& r : c.hardware_components)
            comps.push_back(ref_node(r, component_node));
        channel_chain["hardware_components"] = comps;
        if (!c.data_source_channel.empty())
            channel_chain["data_source_channel"] = quoted(c.data_source_channel);
        add_extras(channel_chain, c.channel_chain_extras);
        chain["channel_chain"] = channel_chain;
        if (c.num_data_source_chains)
            chain["num_data_source_chains"] = int_node(*c.num_data_source_chains);
        if (c.channel_locations) {
            YAML::Node loc(YAML::NodeType::Map);
            loc["file"] = quoted(c.channel_locations->file);
            loc["loc_unit"] = quoted(c.channel_locations->loc_unit);
            chain["channel_locations"] = loc;
        }
        if (c.channel_orientations) {
            YAML::Node o(YAML::NodeType::Map);
            o["file"] = quoted(c.channel_orientations->file);
            o["format"] = bare(c.channel_orientations->format == OrientationFormat::quaternion ? "quaternion"
                                                                                                : "axis_angle");
            chain["channel_orientations"] = o;
        }
        add_extras(chain, c.chain_extras);
        item["chain"] = chain;
        add_extras(item, c.extras);
        chains.push_back(item);
    }
    n["data_chains"] = chains;
    add_extras(n, t.extras);
    return n;
}

YAML::Node environment_node(const EnvironmentDesc& e)
{
    YAML::Node n(YAML::NodeType::Map);
    n["kind"] = bare("environment");
    n["id"] = quoted(e.id);
    if (!e.name.empty())
        n["name"] = quoted(e.name);
    if (!e.properties.empty())
        n["properties"] = quantity_map(e.properties);
    if (!e.file_refs.empty()) {
        YAML::Node refs(YAML::NodeType::Sequence);
        for (const auto& fr : e.file_refs) {
            YAML::Node r(YAML::NodeType::Map);
            r["role"] = quoted(fr.role);
            r["path"] = quoted(fr.path);
            refs.push_back(r);
        }
        n["file_refs"] = refs;
    }
    add_extras(n, e.extras);
    return n;
}

YAML::Node pair_node(const ChannelPair& p)
{
    YAML::Node n(YAML::NodeType::Map);
    n["tx"] = int_node(p.tx);
    n["rx"] = int_node(p.rx);
    return n;
}

YAML::Node experiment_node(const ExperimentDesc& x)
{
    YAML::Node n(YAML::NodeType::Map);
    n["kind"] = bare("experiment");
    n["id"] = quoted(x.id);
    if (!x.name.empty())
        n["name"] = quoted(x.name);
    YAML::Node tbs(YAML::NodeType::Sequence);
    for (const auto& t : x.testbeds)
        tbs.push_back(quoted(t));
    n["testbeds"] = tbs;
    if (x.environment)
        n["environment"] = quoted(*x.environment);
    if (!x.measurements.empty()) {
        YAML::Node ms(YAML::NodeType::Sequence);
        for (const auto& m : x.measurements) {
            YAML::Node mn(YAML::NodeType::Map);
            mn["id"] = quoted(m.id);
            if (!m.file.empty())
                mn["file"] = quoted(m.file);
            if (!m.dataset_type.empty())
                mn["dataset_type"] = quoted(m.dataset_type);
            if (!m.parameters.empty())
                mn["parameters"] = quantity_map(m.parameters);
            add_extras(mn, m.extras);
            ms.push_back(mn);
        }
        n["measurements"] = ms;
    }
    if (x.tx_rx_mapping) {
        const auto& m = *x.tx_rx_mapping;
        YAML::Node mn(YAML::NodeType::Map);
        mn["mode"] = bare(m.full ? "full" : "explicit");
        if (!m.tx_channels.empty())
            mn["tx"] = quoted(m.tx_channels);
        if (!m.rx_channels.empty())
            mn["rx"] = quoted(m.rx_channels);
        if (!m.pairs.empty()) {
            YAML::Node ps(YAML::NodeType::Sequence);
            for (const auto& p : m.pairs)
                ps.push_back(pair_node(p));
            mn["pairs"] = ps;
        }
        n["tx_rx_mapping"] = mn;
    }
    if (!x.variables.empty())
        n["variables"] = quantity_map(x.variables);
    if (!x.media.empty()) {
        YAML::Node media(YAML::NodeType::Sequence);
        for (const auto& m : x.media) {
            YAML::Node mn(YAML::NodeType::Map);
            mn["kind"] = bare(std::string(to_string(m.kind)));
            mn["path"] = quoted(m.path);
            media.push_back(mn);
        }
        n["media"] = media;
    }
    if (x.sync_info)
        n["sync_info"] = YAML::Load(*x.sync_info);
    add_extras(n, x.extras);
    return n;
}

} // namespace

std::string serialize(const DescriptionDoc& doc)
{
    YAML::Node n;
    switch (doc.kind) {
    case DocKind::testbed: n = testbed_node(doc.as<TestbedDesc>()); break;
    case DocKind::data_source: n = data_source_node(doc.as<DataSourceDesc>(), true); break;
    case DocKind::hardware_component: n = component_node(doc.as<HardwareComponentDesc>(), true); break;
    case DocKind::environment: n = environment_node(doc.as<EnvironmentDesc>()); break;
    case DocKind::experiment: n = experiment_node(doc.as<ExperimentDesc>()); break;
    }
    YAML::Node out(YAML::NodeType::Map);
    out["dss_version"] = quoted(doc.dss_version);
    for (auto it = n.begin(); it != n.end(); ++it)
        out[it->first.Scalar()] = it->second;
    return yaml::emit_block(out);
}

} // namespace dss
