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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace dss {

namespace {

using yaml::Entry;
using yaml::join;
using yaml::throw_at;

// ---------------------------------------------------------------------------
// scalar readers

std::string read_string(const YAML::Node& n, const std::string& path)
{
    if (!n.IsScalar())
        throw_at(ErrorCode::TypeError, "expected a string", path, n);
    return n.Scalar();
}

std::int64_t read_int(const YAML::Node& n, const std::string& path)
{
    if (!n.IsScalar() || yaml::is_quoted(n))
        throw_at(ErrorCode::TypeError, "expected an integer", path, n);
    const auto& s = n.Scalar();
    std::int64_t v = 0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || first == s.data() + s.size())
        throw_at(ErrorCode::TypeError, "expected an integer, got '" + s + "'", path, n);
    return v;
}

double read_double(const YAML::Node& n, const std::string& path)
{
    if (!n.IsScalar() || yaml::is_quoted(n))
        throw_at(ErrorCode::TypeError, "expected a number", path, n);
    try {
        return n.as<double>();
    } catch (const YAML::Exception&) {
        throw_at(ErrorCode::TypeError, "expected a number, got '" + n.Scalar() + "'", path, n);
    }
}

void expect_map(const YAML::Node& n, const std::string& path)
{
    if (!n.IsMap())
        throw_at(ErrorCode::TypeError, "expected a mapping", path, n);
}

void expect_seq(const YAML::Node& n, const std::string& path)
{
    if (!n.IsSequence())
        throw_at(ErrorCode::TypeError, "expected a sequence", path, n);
}

bool present(const YAML::Node& n) { return n.IsDefined() && !n.IsNull(); }

Quantity read_quantity(const YAML::Node& n, const std::string& path)
{
    Quantity q;
    if (n.IsMap()) {
        const auto entries = yaml::flatten(n);
        const auto value = yaml::lookup(entries, "value");
        if (!value.IsDefined())
            throw_at(ErrorCode::TypeError, "quantity mapping requires 'value'", path, n);
        for (const auto& e : entries)
            if (e.key != "value" && e.key != "unit")
                throw_at(ErrorCode::TypeError, "quantity mapping accepts only 'value' and 'unit'",
                         join(path, e.key), e.value);
        q.value = value.IsScalar() ? value.Scalar() : yaml::canonical(value);
        const auto unit = yaml::lookup(entries, "unit");
        if (unit.IsDefined())
            q.unit = unit.IsNull() ? std::string() : read_string(unit, join(path, "unit"));
        return q;
    }
    q.value = n.IsScalar() ? n.Scalar() : yaml::canonical(n);
    return q;
}

std::map<std::string, Quantity> read_quantity_map(const YAML::Node& n, const std::string& path)
{
    expect_map(n, path);
    std::map<std::string, Quantity> out;
    for (const auto& e : yaml::flatten(n))
        out[e.key] = read_quantity(e.value, join(path, e.key));
    return out;
}

// ---------------------------------------------------------------------------
// parse context

const std::set<std::string, std::less<>> kCommonKeys{"kind", "id", "dss_version", "name"};

const std::map<DocKind, std::set<std::string, std::less<>>> kShapeKeys{
    {DocKind::testbed, {"data_chains"}},
    {DocKind::experiment, {"measurements", "testbeds", "tx_rx_mapping"}},
    {DocKind::data_source, {"source_type", "num_channels"}},
    {DocKind::hardware_component, {"component_type", "ports", "attributes"}},
    {DocKind::environment, {"properties", "file_refs"}},
};

const std::map<DocKind, std::set<std::string, std::less<>>> kTopKeys{
    {DocKind::testbed, {"description", "url", "level", "data_chains"}},
    {DocKind::experiment,
     {"testbeds", "environment", "measurements", "tx_rx_mapping", "variables", "media", "sync_info"}},
    {DocKind::data_source, {"source_type", "num_channels", "parameters"}},
    {DocKind::hardware_component, {"component_type", "ports", "attributes"}},
    {DocKind::environment, {"properties", "file_refs"}},
};

struct Ctx {
    // keyed top-level entries of the current YAML document, for anchor identity
    std::vector<std::pair<std::string, YAML::Node>> top_entries;
    std::vector<Issue> issues;
};

std::optional<DocKind> infer_kind(const std::vector<Entry>& entries)
{
    std::optional<DocKind> found;
    for (const auto& [kind, keys] : kShapeKeys) {
        for (const auto& e : entries) {
            if (keys.count(e.key)) {
                if (found && *found != kind)
                    return std::nullopt;
                found = kind;
            }
        }
    }
    return found;
}

void put_extra(Extras& extras, const Entry& e) { extras[e.key] = yaml::canonical(e.value); }

void record(SourcePaths& src, const std::string& self, const std::vector<Entry>& entries)
{
    src.self = self;
    for (const auto& e : entries)
        src.fields[e.key] = join(self, e.key);
}

std::string merged_from(const Ctx& ctx, const std::vector<YAML::Node>& sources)
{
    for (const auto& s : sources)
        for (const auto& [key, body] : ctx.top_entries)
            if (s.is(body))
                return key;
    return {};
}

void check_body_kind(const std::vector<Entry>& entries, DocKind expected, const std::string& path)
{
    const auto k = yaml::lookup(entries, "kind");
    if (!present(k))
        return;
    const auto text = read_string(k, join(path, "kind"));
    const auto parsed = parse_doc_kind(text);
    if (!parsed || *parsed != expected)
        throw_at(ErrorCode::KindMismatch,
                 "expected a " + std::string(to_string(expected)) + " definition, found kind '" + text + "'",
                 join(path, "kind"), k);
}

// ---------------------------------------------------------------------------
// typed bodies

DataSourceDesc parse_data_source(const std::vector<Entry>& entries, const std::string& path);
HardwareComponentDesc parse_component(const std::vector<Entry>& entries, const std::string& path);

template <class T, class ParseFn>
Ref<T> parse_ref(const YAML::Node& n, const std::string& path, DocKind kind, Ctx& ctx, ParseFn parse_body)
{
    Ref<T> ref;
    if (n.IsScalar()) {
        ref.id = n.Scalar();
        return ref;
    }
    expect_map(n, path);
    std::vector<YAML::Node> sources;
    const auto entries = yaml::flatten(n, &sources);
    if (const auto r = yaml::lookup(entries, "ref"); r.IsDefined()) {
        ref.id = read_string(r, join(path, "ref"));
        for (const auto& e : entries)
            if (e.key != "ref")
                ctx.issues.push_back({Severity::warning, "ignored_key", join(path, e.key),
                                      "key '" + e.key + "' next to 'ref' is ignored", {}});
        return ref;
    }
    check_body_kind(entries, kind, path);
    auto body = parse_body(entries, path);
    ref.id = merged_from(ctx, sources);
    if (ref.id.empty())
        ref.id = body.id;
    if (body.id.empty())
        body.id = ref.id;
    ref.inline_def = std::make_shared<const T>(std::move(body));
    return ref;
}

DataSourceDesc parse_data_source(const std::vector<Entry>& entries, const std::string& path)
{
    DataSourceDesc d;
    record(d.src, path, entries);
    for (const auto& e : entries) {
        const auto p = join(path, e.key);
        if (e.key == "kind" || e.key == "dss_version")
            continue;
        if (e.key == "id")
            d.id = read_string(e.value, p);
        else if (e.key == "name")
            d.name = read_string(e.value, p);
        else if (e.key == "source_type")
            d.source_type = read_string(e.value, p);
        else if (e.key == "num_channels")
            d.num_channels = read_int(e.value, p);
        else if (e.key == "parameters")
            d.parameters = read_quantity_map(e.value, p);
        else
            put_extra(d.extras, e);
    }
    return d;
}

AttributeRef parse_attribute(const YAML::Node& n, const std::string& path)
{
    expect_map(n, path);
    const auto entries = yaml::flatten(n);
    AttributeRef a;
    record(a.src, path, entries);
    for (const auto& e : entries) {
        const auto p = join(path, e.key);
        if (e.key == "name") {
            a.name = read_string(e.value, p);
        } else if (e.key == "data_ref") {
            a.data_ref = read_string(e.value, p);
        } else if (e.key == "values") {
            expect_seq(e.value, p);
            std::size_t i = 0;
            for (const auto& item : e.value) {
                const auto ip = join(p, i++);
                if (item.IsSequence()) {
                    if (a.inline_columns == 0)
                        a.inline_columns = item.size();
                    if (item.size() != a.inline_columns || item.size() == 0)
                        throw_at(ErrorCode::TypeError, "inline rows must have equal length", ip, item);
                    std::size_t j = 0;
                    for (const auto& v : item)
                        a.inline_values.push_back(read_double(v, join(ip, j++)));
                } else {
                    if (a.inline_columns != 0)
                        throw_at(ErrorCode::TypeError, "mixed scalar and row entries", ip, item);
                    a.inline_values.push_back(read_double(item, ip));
                }
            }
        } else if (e.key == "axis_units") {
            expect_seq(e.value, p);
            std::size_t i = 0;
            for (const auto& item : e.value)
                a.axis_units.push_back(read_string(item, join(p, i++)));
        } else {
            put_extra(a.extras, e);
        }
    }
    return a;
}

HardwareComponentDesc parse_component(const std::vector<Entry>& entries, const std::string& path)
{
    HardwareComponentDesc c;
    record(c.src, path, entries);
    for (const auto& e : entries) {
        const auto p = join(path, e.key);
        if (e.key == "kind" || e.key == "dss_version")
            continue;
        if (e.key == "id") {
            c.id = read_string(e.value, p);
        } else if (e.key == "name") {
            c.name = read_string(e.value, p);
        } else if (e.key == "component_type") {
            const auto text = read_string(e.value, p);
            c.component_type = parse_component_type(text);
            if (!c.component_type)
                throw_at(ErrorCode::TypeError, "unknown component_type '" + text + "'", p, e.value);
        } else if (e.key == "ports") {
            c.ports = read_int(e.value, p);
        } else if (e.key == "attributes") {
            expect_seq(e.value, p);
            std::size_t i = 0;
            for (const auto& item : e.value) {
                c.attributes.push_back(parse_attribute(item, join(p, i)));
                ++i;
            }
        } else {
            put_extra(c.extras, e);
        }
    }
    return c;
}

ChannelLocations parse_locations(const YAML::Node& n, const std::string& path)
{
    expect_map(n, path);
    ChannelLocations loc;
    for (const auto& e : yaml::flatten(n)) {
        const auto p = join(path, e.key);
        if (e.key == "file")
            loc.file = read_string(e.value, p);
        else if (e.key == "loc_unit")
            loc.loc_unit = read_string(e.value, p);
        else
            throw_at(ErrorCode::TypeError, "channel_locations accepts only 'file' and 'loc_unit'", p, e.value);
    }
    return loc;
}

ChannelOrientations parse_orientations(const YAML::Node& n, const std::string& path)
{
    expect_map(n, path);
    ChannelOrientations o;
    for (const auto& e : yaml::flatten(n)) {
        const auto p = join(path, e.key);
        if (e.key == "file") {
            o.file = read_string(e.value, p);
        } else if (e.key == "format") {
            const auto f = read_string(e.value, p);
            if (f == "quaternion")
                o.format = OrientationFormat::quaternion;
            else if (f == "axis_angle")
                o.format = OrientationFormat::axis_angle;
            else
                throw_at(ErrorCode::TypeError, "format must be 'quaternion' or 'axis_angle'", p, e.value);
        } else {
            throw_at(ErrorCode::TypeError, "channel_orientations accepts only 'file' and 'format'", p, e.value);
        }
    }
    return o;
}

// Keys accepted inside `chain`, or directly on the list item in the flat
// layout.
bool parse_chain_key(DataChainDesc& c, const Entry& e, const std::string& p, Ctx& ctx)
{
    if (e.key == "data_source") {
        c.data_source = parse_ref<DataSourceDesc>(e.value, p, DocKind::data_source, ctx, parse_data_source);
    } else if (e.key == "num_data_source_chains") {
        c.num_data_source_chains = read_int(e.value, p);
    } else if (e.key == "channel_locations") {
        c.channel_locations = parse_locations(e.value, p);
    } else if (e.key == "channel_orientations") {
        c.channel_orientations = parse_orientations(e.value, p);
    } else if (e.key == "channel_chain") {
        expect_map(e.value, p);
        const auto inner = yaml::flatten(e.value);
        for (const auto& ie : inner) {
            const auto ip = join(p, ie.key);
            c.src.fields[ie.key] = ip;
            if (ie.key == "hardware_components") {
                expect_seq(ie.value, ip);
                std::size_t i = 0;
                for (const auto& item : ie.value) {
                    c.hardware_components.push_back(parse_ref<HardwareComponentDesc>(
                        item, join(ip, i), DocKind::hardware_component, ctx, parse_component));
                    ++i;
                }
            } else if (ie.key == "data_source_channel") {
                c.data_source_channel = read_string(ie.value, ip);
            } else {
                put_extra(c.channel_chain_extras, ie);
            }
        }
    } else {
        return false;
    }
    c.src.fields[e.key] = p;
    return true;
}

DataChainDesc parse_chain(const YAML::Node& n, const std::string& path, Ctx& ctx)
{
    expect_map(n, path);
    DataChainDesc c;
    c.src.self = path;
    const auto entries = yaml::flatten(n);
    std::set<std::string> chain_level;
    if (const auto chain = yaml::lookup(entries, "chain"); chain.IsDefined()) {
        const auto cp = join(path, "chain");
        expect_map(chain, cp);
        c.src.fields["chain"] = cp;
        for (const auto& e : yaml::flatten(chain)) {
            if (parse_chain_key(c, e, join(cp, e.key), ctx))
                chain_level.insert(e.key);
            else
                put_extra(c.chain_extras, e);
        }
    }
    for (const auto& e : entries) {
        const auto p = join(path, e.key);
        if (e.key == "chain")
            continue;
        if (e.key == "label") {
            c.label = read_string(e.value, p);
            c.src.fields["label"] = p;
        } else if (chain_level.count(e.key)) {
            ctx.issues.push_back({Severity::warning, "duplicate_field", p,
                                  "'" + e.key + "' given both on the chain and the list item; the chain value is used",
                                  {}});
        } else if (!parse_chain_key(c, e, p, ctx)) {
            put_extra(c.extras, e);
        }
    }
    return c;
}

TestbedDesc parse_testbed(const std::vector<Entry>& entries, const std::string& path, Ctx& ctx)
{
    TestbedDesc t;
    record(t.src, path, entries);
    for (const auto& e : entries) {
        const auto p = join(path, e.key);
        if (e.key == "kind" || e.key == "dss_version")
            continue;
        if (e.key == "id") {
            t.id = read_string(e.value, p);
        } else if (e.key == "name") {
            t.name = read_string(e.value, p);
        } else if (e.key == "description") {
            t.description = read_string(e.value, p);
        } else if (e.key == "url") {
            t.url = read_string(e.value, p);
        } else if (e.key == "level") {
            t.level = read_string(e.value, p);
        } else if (e.key == "data_chains") {
            expect_seq(e.value, p);
            std::size_t i = 0;
            for (const auto& item : e.value) {
                t.data_chains.push_back(parse_chain(item, join(p, i), ctx));
                ++i;
            }
        } else {
            put_extra(t.extras, e);
        }
    }
    return t;
}

EnvironmentDesc parse_environment(const std::vector<Entry>& entries, const std::string& path)
{
    EnvironmentDesc env;
    record(env.src, path, entries);
    for (const auto& e : entries) {
        const auto p = join(path, e.key);
        if (e.key == "kind" || e.key == "dss_version")
            continue;
        if (e.key == "id") {
            env.id = read_string(e.value, p);
        } else if (e.key == "name") {
            env.name = read_string(e.value, p);
        } else if (e.key == "properties") {
            env.properties = read_quantity_map(e.value, p);
        } else if (e.key == "file_refs") {
            expect_seq(e.value, p);
            std::size_t i = 0;
            for (const auto& item : e.value) {
                const auto ip = join(p, i++);
                expect_map(item, ip);
                FileRole fr;
                for (const auto& ie : yaml::flatten(item)) {
                    if (ie.key == "role")
                        fr.role = read_string(ie.value, join(ip, ie.key));
                    else if (ie.key == "path")
                        fr.path = read_string(ie.value, join(ip, ie.key));
                    else
                        throw_at(ErrorCode::TypeError, "file_refs entries accept only 'role' and 'path'",
                                 join(ip, ie.key), ie.value);
                }
                env.file_refs.push_back(fr);
            }
        } else {
            put_extra(env.extras, e);
        }
    }
    return env;
}

ChannelPair read_pair(const YAML::Node& n, const std::string& path)
{
    ChannelPair pr;
    if (n.IsSequence()) {
        if (n.size() != 2)
            throw_at(ErrorCode::TypeError, "a channel pair has exactly two entries", path, n);
        pr.tx = read_int(n[0], join(path, 0));
        pr.rx = read_int(n[1], join(path, 1));
        return pr;
    }
    expect_map(n, path);
    const auto entries = yaml::flatten(n);
    const auto tx = yaml::lookup(entries, "tx");
    const auto rx = yaml::lookup(entries, "rx");
    if (!tx.IsDefined() || !rx.IsDefined())
        throw_at(ErrorCode::TypeError, "a channel pair needs 'tx' and 'rx'", path, n);
    pr.tx = read_int(tx, join(path, "tx"));
    pr.rx = read_int(rx, join(path, "rx"));
    return pr;
}

TxRxMapping parse_mapping(const YAML::Node& n, const std::string& path)
{
    TxRxMapping m;
    m.src.self = path;
    if (n.IsScalar()) {
        if (n.Scalar() != "full")
            throw_at(ErrorCode::TypeError, "tx_rx_mapping must be 'full', a pair list, or a mapping", path, n);
        m.full = true;
        return m;
    }
    if (n.IsSequence()) {
        m.src.fields["pairs"] = path;
        std::size_t i = 0;
        for (const auto& item : n) {
            m.pairs.push_back(read_pair(item, join(path, i)));
            ++i;
        }
        return m;
    }
    expect_map(n, path);
    for (const auto& e : yaml::flatten(n)) {
        const auto p = join(path, e.key);
        m.src.fields[e.key] = p;
        if (e.key == "mode") {
            const auto mode = read_string(e.value, p);
            if (mode != "full" && mode != "explicit")
                throw_at(ErrorCode::TypeError, "mode must be 'full' or 'explicit'", p, e.value);
            m.full = mode == "full";
        } else if (e.key == "tx") {
            m.tx_channels = read_string(e.value, p);
        } else if (e.key == "rx") {
            m.rx_channels = read_string(e.value, p);
        } else if (e.key == "pairs") {
            expect_seq(e.value, p);
            std::size_t i = 0;
            for (const auto& item : e.value) {
                m.pairs.push_back(read_pair(item, join(p, i)));
                ++i;
            }
        } else {
            throw_at(ErrorCode::TypeError, "unknown tx_rx_mapping key '" + e.key + "'", p, e.value);
        }
    }
    return m;
}

ExperimentDesc parse_experiment(const std::vector<Entry>& entries, const std::string& path)
{
    ExperimentDesc x;
    record(x.src, path, entries);
    for (const auto& e : entries) {
        const auto p = join(path, e.key);
        if (e.key == "kind" || e.key == "dss_version")
            continue;
        if (e.key == "id") {
            x.id = read_string(e.value, p);
        } else if (e.key == "name") {
            x.name = read_string(e.value, p);
        } else if (e.key == "testbeds") {
            expect_seq(e.value, p);
            std::size_t i = 0;
            for (const auto& item : e.value) {
                const auto ip = join(p, i++);
                if (item.IsMap()) {
                    const auto ref = yaml::lookup(yaml::flatten(item), "ref");
                    if (!ref.IsDefined())
                        throw_at(ErrorCode::TypeError, "testbed references are ids or {ref: id}", ip, item);
                    x.testbeds.push_back(read_string(ref, join(ip, "ref")));
                } else {
                    x.testbeds.push_back(read_string(item, ip));
                }
            }
        } else if (e.key == "environment") {
            if (present(e.value))
                x.environment = read_string(e.value, p);
        } else if (e.key == "measurements") {
            expect_seq(e.value, p);
            std::size_t i = 0;
            for (const auto& item : e.value) {
                const auto ip = join(p, i++);
                expect_map(item, ip);
                const auto ientries = yaml::flatten(item);
                MeasurementDesc m;
                record(m.src, ip, ientries);
                for (const auto& ie : ientries) {
                    const auto mp = join(ip, ie.key);
                    if (ie.key == "id")
                        m.id = read_string(ie.value, mp);
                    else if (ie.key == "file")
                        m.file = read_string(ie.value, mp);
                    else if (ie.key == "dataset_type")
                        m.dataset_type = read_string(ie.value, mp);
                    else if (ie.key == "parameters")
                        m.parameters = read_quantity_map(ie.value, mp);
                    else
                        put_extra(m.extras, ie);
                }
                x.measurements.push_back(std::move(m));
            }
        } else if (e.key == "tx_rx_mapping") {
            x.tx_rx_mapping = parse_mapping(e.value, p);
        } else if (e.key == "variables") {
            x.variables = read_quantity_map(e.value, p);
        } else if (e.key == "media") {
            expect_seq(e.value, p);
            std::size_t i = 0;
            for (const auto& item : e.value) {
                const auto ip = join(p, i++);
                expect_map(item, ip);
                MediaRef mr;
                bool has_kind = false;
                for (const auto& ie : yaml::flatten(item)) {
                    const auto mp = join(ip, ie.key);
                    if (ie.key == "kind") {
                        const auto k = read_string(ie.value, mp);
                        has_kind = true;
                        if (k == "photo")
                            mr.kind = MediaKind::photo;
                        else if (k == "video")
                            mr.kind = MediaKind::video;
                        else if (k == "scan")
                            mr.kind = MediaKind::scan;
                        else
                            throw_at(ErrorCode::TypeError, "media kind must be photo, video or scan", mp, ie.value);
                    } else if (ie.key == "path") {
                        mr.path = read_string(ie.value, mp);
                    } else {
                        throw_at(ErrorCode::TypeError, "media entries accept only 'kind' and 'path'", mp, ie.value);
                    }
                }
                if (!has_kind)
                    throw_at(ErrorCode::TypeError, "media entry needs 'kind'", ip, item);
                x.media.push_back(mr);
            }
        } else if (e.key == "sync_info") {
            expect_map(e.value, p);
            x.sync_info = yaml::canonical(e.value);
        } else {
            put_extra(x.extras, e);
        }
    }
    return x;
}

// ---------------------------------------------------------------------------
// documents

DescriptionDoc parse_body(DocKind kind, const std::vector<Entry>& entries, const std::string& path,
                          const std::string& default_id, Ctx& ctx)
{
    DescriptionDoc doc;
    doc.kind = kind;
    if (const auto v = yaml::lookup(entries, "dss_version"); present(v))
        doc.dss_version = read_string(v, join(path, "dss_version"));
    ctx.issues.clear();
    switch (kind) {
    case DocKind::testbed: {
        auto t = parse_testbed(entries, path, ctx);
        if (t.id.empty())
            t.id = default_id;
        doc.id = t.id;
        doc.body = std::move(t);
        break;
    }
    case DocKind::data_source: {
        auto d = parse_data_source(entries, path);
        if (d.id.empty())
            d.id = default_id;
        doc.id = d.id;
        doc.body = std::move(d);
        break;
    }
    case DocKind::hardware_component: {
        auto c = parse_component(entries, path);
        if (c.id.empty())
            c.id = default_id;
        doc.id = c.id;
        doc.body = std::move(c);
        break;
    }
    case DocKind::environment: {
        auto e = parse_environment(entries, path);
        if (e.id.empty())
            e.id = default_id;
        doc.id = e.id;
        doc.body = std::move(e);
        break;
    }
    case DocKind::experiment: {
        auto x = parse_experiment(entries, path);
        if (x.id.empty())
            x.id = default_id;
        doc.id = x.id;
        doc.body = std::move(x);
        break;
    }
    }
    doc.parse_issues = std::move(ctx.issues);
    ctx.issues.clear();
    return doc;
}

std::optional<DocKind> declared_kind(const std::vector<Entry>& entries, const std::string& path)
{
    const auto k = yaml::lookup(entries, "kind");
    if (!present(k))
        return std::nullopt;
    const auto text = read_string(k, join(path, "kind"));
    const auto kind = parse_doc_kind(text);
    if (!kind)
        throw_at(ErrorCode::KindMismatch, "unknown document kind '" + text + "'", join(path, "kind"), k);
    return kind;
}

bool is_flat(const YAML::Node& root)
{
    for (auto it = root.begin(); it != root.end(); ++it) {
        const auto& key = it->first.Scalar();
        if (!it->second.IsMap() || kCommonKeys.count(key))
            return true;
        for (const auto& [kind, keys] : kTopKeys)
            if (keys.count(key))
                return true;
    }
    return false;
}

bool is_stub(const std::vector<Entry>& entries)
{
    return entries.size() == 1 && entries.front().key == "ref";
}

DocKind pick_kind(const std::vector<Entry>& entries, const std::string& path, std::optional<DocKind> hint,
                  const YAML::Node& node)
{
    if (auto declared = declared_kind(entries, path))
        return *declared;
    if (auto inferred = infer_kind(entries))
        return *inferred;
    if (hint)
        return *hint;
    throw_at(ErrorCode::KindMismatch, "cannot determine the document kind; add a 'kind:' field", path, node);
}

std::vector<YAML::Node> load_stream(std::string_view text)
{
    std::vector<YAML::Node> docs;
    try {
        docs = YAML::LoadAll(std::string(text));
    } catch (const YAML::Exception& ex) {
        Error err(ErrorCode::SyntaxError, ex.msg);
        if (!ex.mark.is_null()) {
            err.line = ex.mark.line + 1;
            err.column = ex.mark.column + 1;
        }
        throw err;
    }
    docs.erase(std::remove_if(docs.begin(), docs.end(), [](const YAML::Node& n) { return !n.IsDefined() || n.IsNull(); }),
               docs.end());
    if (docs.empty()) {
        Error err(ErrorCode::SyntaxError, "empty document");
        err.line = 1;
        err.column = 1;
        throw err;
    }
    return docs;
}

} // namespace

std::vector<DescriptionDoc> parse_documents(std::string_view text, std::optional<DocKind> hint,
                                            const std::filesystem::path& source_path)
{
    const auto stream = load_stream(text);
    std::vector<DescriptionDoc> out;
    for (std::size_t si = 0; si < stream.size(); ++si) {
        const auto& root = stream[si];
        if (!root.IsMap())
            throw_at(ErrorCode::KindMismatch, "a description document must be a mapping", "", root);
        Ctx ctx;
        auto finish = [&](DescriptionDoc doc) {
            doc.source_text = std::string(text);
            doc.source_path = source_path;
            doc.stream_index = si;
            out.push_back(std::move(doc));
        };
        if (is_flat(root)) {
            const auto entries = yaml::flatten(root);
            const auto kind = pick_kind(entries, "", hint, root);
            finish(parse_body(kind, entries, "", "", ctx));
            continue;
        }
        for (auto it = root.begin(); it != root.end(); ++it)
            ctx.top_entries.emplace_back(it->first.Scalar(), it->second);
        for (const auto& [key, body] : ctx.top_entries) {
            const auto entries = yaml::flatten(body);
            if (is_stub(entries))
                continue;
            const auto kind = pick_kind(entries, key, hint, body);
            finish(parse_body(kind, entries, key, key, ctx));
        }
    }
    return out;
}

DescriptionDoc parse_description(std::string_view text, DocKind kind)
{
    auto docs = parse_documents(text, kind);
    std::vector<DescriptionDoc> matching;
    std::string others;
    for (auto& d : docs) {
        if (d.kind == kind) {
            matching.push_back(std::move(d));
        } else {
            if (!others.empty())
                others += ", ";
            others += d.label();
        }
    }
    if (matching.size() == 1)
        return std::move(matching.front());
    if (matching.empty())
        fail(ErrorCode::KindMismatch,
             "no " + std::string(to_string(kind)) + " document found" + (others.empty() ? "" : " (found " + others + ")"));
    fail(ErrorCode::KindMismatch,
         "text holds " + std::to_string(matching.size()) + " " + std::string(to_string(kind)) + " documents");
}

// ---------------------------------------------------------------------------

std::optional<SourcePosition> locate(std::string_view text, std::string_view path, std::size_t stream_index)
{
    std::vector<YAML::Node> stream;
    try {
        stream = load_stream(text);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (stream_index >= stream.size())
        return std::nullopt;
    YAML::Node cur = stream[stream_index];
    std::size_t pos = 0;
    const std::string p(path);
    while (pos < p.size()) {
        if (p[pos] == '.') {
            ++pos;
            continue;
        }
        if (p[pos] == '[') {
            const auto close = p.find(']', pos);
            if (close == std::string::npos || !cur.IsSequence())
                return std::nullopt;
            const auto idx = std::stoul(p.substr(pos + 1, close - pos - 1));
            if (idx >= cur.size())
                return std::nullopt;
            cur = cur[idx];
            pos = close + 1;
            continue;
        }
        auto end = p.find_first_of(".[", pos);
        if (end == std::string::npos)
            end = p.size();
        const auto key = p.substr(pos, end - pos);
        if (!cur.IsMap())
            return std::nullopt;
        const auto next = yaml::lookup(yaml::flatten(cur), key);
        if (!next.IsDefined())
            return std::nullopt;
        cur = next;
        pos = end;
    }
    const auto [line, col] = yaml::position(cur);
    if (line == 0)
        return std::nullopt;
    return SourcePosition{line, col};
}

} // namespace dss
