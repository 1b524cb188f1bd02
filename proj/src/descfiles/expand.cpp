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

namespace dss {

namespace fs = std::filesystem;

Quaternion quaternion_from_axis_angle(double ax, double ay, double az, double angle)
{
    const double n = std::sqrt(ax * ax + ay * ay + az * az);
    if (n == 0.0)
        fail(ErrorCode::NormError, "axis-angle orientation has a zero axis");
    const double s = std::sin(angle / 2.0) / n;
    return {std::cos(angle / 2.0), ax * s, ay * s, az * s};
}

namespace {

const DataSourceDesc* find_source(const DataChainDesc& c, const Registry* registry)
{
    if (c.data_source.inline_def)
        return c.data_source.inline_def.get();
    if (registry)
        if (const auto* d = registry->find(DocKind::data_source, c.data_source.id))
            return &d->as<DataSourceDesc>();
    return nullptr;
}

Matrix load_table(const FileAccess& files, const fs::path& base_dir, const std::string& ref, std::size_t rows,
                  std::size_t cols, const std::string& what)
{
    const auto [file, object] = split_data_ref(ref);
    auto m = files.load_matrix(base_dir / file, object);
    if (m.cols != cols || m.rows != rows)
        fail(ErrorCode::ShapeError,
             what + " array is " + std::to_string(m.rows) + "x" + std::to_string(m.cols) + ", expected " +
                 std::to_string(rows) + "x" + std::to_string(cols),
             (base_dir / file).string());
    return m;
}

} // namespace

ChannelMap expand_channels(const TestbedDesc& testbed, const FileAccess& files, const fs::path& base_dir,
                           const Registry* registry)
{
    ChannelMap map;
    for (const auto& chain : testbed.data_chains) {
        std::size_t limit = std::numeric_limits<std::size_t>::max();
        if (const auto* src = find_source(chain, registry); src && src->num_channels && *src->num_channels > 0)
            limit = static_cast<std::size_t>(*src->num_channels);
        const auto sel = parse_channel_selector(chain.data_source_channel, limit);
        if (!chain.num_data_source_chains || *chain.num_data_source_chains < 1)
            fail(ErrorCode::RangeError, "chain '" + chain.label + "' has no valid num_data_source_chains",
                 chain.src.of("num_data_source_chains"));
        const auto instances = static_cast<std::size_t>(*chain.num_data_source_chains);
        const auto count = instances * sel.indices.size();

        std::vector<std::string> hw;
        for (const auto& r : chain.hardware_components)
            hw.push_back(r.id);

        std::optional<Matrix> locations;
        if (chain.channel_locations && files.check_files) {
            locations = load_table(files, base_dir, chain.channel_locations->file, count, 3, "location");
            const auto& unit = chain.channel_locations->loc_unit;
            if (const auto scale = units::scale_to_si(unit, units::Dimension::length)) {
                for (auto& v : locations->values)
                    v *= *scale;
            } else {
                map.notes.warning("unit_not_interpreted", chain.src.of("channel_locations"),
                                  "loc_unit '" + unit + "' is not a length unit; locations kept verbatim");
            }
        } else if (!chain.channel_locations) {
            map.notes.warning("no_channel_locations", chain.src.self,
                              "chain '" + chain.label + "' has no channel_locations");
        }

        std::optional<Matrix> orientations;
        if (chain.channel_orientations && files.check_files)
            orientations = load_table(files, base_dir, chain.channel_orientations->file, count, 4, "orientation");

        std::size_t row = 0;
        for (std::size_t inst = 0; inst < instances; ++inst) {
            for (const auto idx : sel.indices) {
                ChannelRecord rec;
                rec.global_index = map.channels.size();
                rec.chain_label = chain.label;
                rec.chain_instance = inst;
                rec.source_channel = idx;
                rec.hardware_chain = hw;
                if (locations)
                    rec.location = {(*locations)(row, 0), (*locations)(row, 1), (*locations)(row, 2)};
                if (orientations) {
                    const auto& o = *orientations;
                    Quaternion q{};
                    if (chain.channel_orientations->format == OrientationFormat::axis_angle)
                        q = quaternion_from_axis_angle(o(row, 0), o(row, 1), o(row, 2), o(row, 3));
                    else
                        q = {o(row, 0), o(row, 1), o(row, 2), o(row, 3)};
                    const double n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
                    if (std::abs(n - 1.0) > 1e-9)
                        fail(ErrorCode::NormError,
                             "orientation of channel " + std::to_string(rec.global_index) + " is not a unit quaternion",
                             chain.src.of("channel_orientations"));
                    rec.orientation = q;
                }
                map.channels.push_back(std::move(rec));
                ++row;
            }
        }
    }
    return map;
}

ResolvedExperiment resolve_experiment(const DescriptionDoc& doc, const Registry& registry, const FileAccess& files)
{
    if (doc.kind != DocKind::experiment)
        fail(ErrorCode::KindMismatch, "resolve_experiment needs an experiment document");
    const auto& x = doc.as<ExperimentDesc>();
    ResolvedExperiment out;
    out.experiment = x;

    for (std::size_t i = 0; i < x.testbeds.size(); ++i) {
        const auto* tb = registry.find(DocKind::testbed, x.testbeds[i]);
        if (!tb)
            fail(ErrorCode::UnresolvedRef, "testbed '" + x.testbeds[i] + "' is not defined",
                 x.src.of("testbeds") + "[" + std::to_string(i) + "]");
        ResolvedTestbed rt;
        rt.testbed = tb->as<TestbedDesc>();
        rt.offset = out.channel_count;
        const auto base = tb->source_path.empty() ? fs::path{} : tb->source_path.parent_path();
        for (const auto& chain : rt.testbed.data_chains) {
            if (const auto* src = find_source(chain, &registry))
                out.data_sources[chain.data_source.id] = *src;
            else
                fail(ErrorCode::UnresolvedRef, "data source '" + chain.data_source.id + "' is not defined",
                     chain.src.of("data_source"));
            for (const auto& r : chain.hardware_components) {
                if (r.inline_def) {
                    out.hardware_components[r.id] = *r.inline_def;
                } else if (const auto* c = registry.find(DocKind::hardware_component, r.id)) {
                    out.hardware_components[r.id] = c->as<HardwareComponentDesc>();
                } else {
                    fail(ErrorCode::UnresolvedRef, "hardware component '" + r.id + "' is not defined",
                         chain.src.of("hardware_components"));
                }
            }
        }
        rt.channels = expand_channels(rt.testbed, files, base, &registry);
        out.channel_count += rt.channels.channels.size();
        out.testbeds.push_back(std::move(rt));
    }
    if (x.environment) {
        const auto* env = registry.find(DocKind::environment, *x.environment);
        if (!env)
            fail(ErrorCode::UnresolvedRef, "environment '" + *x.environment + "' is not defined", x.src.of("environment"));
        out.environment = env->as<EnvironmentDesc>();
    }

    if (x.tx_rx_mapping) {
        const auto& m = *x.tx_rx_mapping;
        const auto total = out.channel_count;
        const auto p = x.src.of("tx_rx_mapping");
        auto check = [&](std::int64_t v) {
            if (v < 0 || static_cast<std::size_t>(v) >= total)
                fail(ErrorCode::MappingError,
                     "channel " + std::to_string(v) + " does not exist (experiment exposes " + std::to_string(total) +
                         " channels)",
                     p);
        };
        if (m.full) {
            auto channels = [&](const std::string& sel) {
                std::vector<std::size_t> idx;
                if (sel.empty()) {
                    for (std::size_t i = 0; i < total; ++i)
                        idx.push_back(i);
                    return idx;
                }
                try {
                    return parse_channel_selector(sel, total).indices;
                } catch (const Error& e) {
                    fail(ErrorCode::MappingError, e.detail(), p);
                }
            };
            for (const auto tx : channels(m.tx_channels))
                for (const auto rx : channels(m.rx_channels))
                    if (tx != rx)
                        out.pairs.push_back({static_cast<std::int64_t>(tx), static_cast<std::int64_t>(rx)});
        }
        for (const auto& pr : m.pairs) {
            check(pr.tx);
            check(pr.rx);
            out.pairs.push_back(pr);
        }
    }
    return out;
}

} // namespace dss
