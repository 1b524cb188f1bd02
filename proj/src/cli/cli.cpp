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

#include "dss/cli.hpp"

#include "dss/analysis.hpp"
#include "dss/descfiles.hpp"
#include "dss/storage.hpp"
#include "dss/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <unistd.h>

namespace dss {

namespace fs = std::filesystem;
using json = nlohmann::json;

int exit_code_for(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::SyntaxError:
    case ErrorCode::KindMismatch:
    case ErrorCode::TypeError:
    case ErrorCode::UnresolvedRef:
    case ErrorCode::MappingError:
        return kExitValidation;
    case ErrorCode::GrammarError:
    case ErrorCode::RangeError:
    case ErrorCode::UnknownType:
    case ErrorCode::ProfileViolation:
    case ErrorCode::AxisError:
    case ErrorCode::IndexError:
    case ErrorCode::DuplicateType:
    case ErrorCode::ReservedName:
    case ErrorCode::ShapeError:
    case ErrorCode::NormError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::DomainError:
    case ErrorCode::NonUniformGrid:
    case ErrorCode::SelectionError:
    case ErrorCode::ProfileError:
    case ErrorCode::WindowError:
        return kExitUsage;
    case ErrorCode::IoError:
    case ErrorCode::FormatError:
    case ErrorCode::VersionError:
    case ErrorCode::UnsupportedFeature:
        return kExitIo;
    }
    return kExitIo;
}

namespace {

bool is_yaml(const fs::path& p)
{
    const auto ext = p.extension().string();
    return ext == ".yaml" || ext == ".yml";
}

// Files named directly plus *.yaml/*.yml directly inside named directories.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs)
{
    std::vector<fs::path> out;
    for (const auto& in : inputs) {
        const fs::path p(in);
        std::error_code ec;
        if (fs::is_directory(p, ec)) {
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(p))
                if (e.is_regular_file() && is_yaml(e.path()))
                    files.push_back(fs::weakly_canonical(e.path()));
            std::sort(files.begin(), files.end());
            out.insert(out.end(), files.begin(), files.end());
        } else if (fs::is_regular_file(p, ec)) {
            out.push_back(fs::weakly_canonical(p));
        } else {
            fail(ErrorCode::IoError, "no such file or directory", in);
        }
    }
    return out;
}

void write_atomic(const fs::path& path, const std::string& bytes)
{
    static std::atomic<unsigned> counter{0};
    const auto parent = path.parent_path().empty() ? fs::path(".") : path.parent_path();
    const auto tmp = parent / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()) + "-" +
                               std::to_string(counter++));
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            fail(ErrorCode::IoError, "cannot write file", path.string());
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!f)
            fail(ErrorCode::IoError, "cannot write file", path.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(ErrorCode::IoError, "cannot move file into place", path.string());
    }
}

void refuse_overwrite(const std::string& src, const std::string& dst)
{
    std::error_code ec;
    if (fs::equivalent(src, dst, ec))
        fail(ErrorCode::InvalidArgument, "destination is the source file; write to a new path", dst);
}

StorageFormat format_for(const std::string& flag, const fs::path& path)
{
    if (!flag.empty()) {
        if (auto f = parse_storage_format(flag))
            return *f;
        fail(ErrorCode::InvalidArgument, "unknown format '" + flag + "' (expected hdf5 or netcdf4)");
    }
    return path.extension() == ".nc" ? StorageFormat::netcdf4 : StorageFormat::hdf5;
}

std::string severity_name(Severity s)
{
    return s == Severity::error ? "error" : "warning";
}

json issue_json(const Issue& i)
{
    return json{{"severity", severity_name(i.severity)},
                {"code", i.code},
                {"path", i.path},
                {"document", i.document},
                {"message", i.message}};
}

std::vector<Issue> by_path_then_code(std::vector<Issue> items)
{
    std::stable_sort(items.begin(), items.end(), [](const Issue& a, const Issue& b) {
        return std::tie(a.path, a.code, a.document, a.severity, a.message) <
               std::tie(b.path, b.code, b.document, b.severity, b.message);
    });
    return items;
}

std::string registry_from_env(const std::string& flag)
{
    if (!flag.empty())
        return flag;
    if (const char* env = std::getenv("DSS_REGISTRY"); env && *env)
        return env;
    return {};
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
    std::vector<std::string> paths;
    std::string registry;
    std::string format = "text";
};

bool is_dataset_file(const fs::path& p)
{
    const auto ext = p.extension().string();
    return ext == ".h5" || ext == ".hdf5" || ext == ".nc" || ext == ".nc4";
}

int cmd_validate(const ValidateArgs& a, std::ostream& out)
{
    std::vector<fs::path> targets, datasets;
    for (const auto& p : expand_inputs(a.paths))
        (is_dataset_file(p) ? datasets : targets).push_back(p);
    std::vector<fs::path> all = targets;
    std::vector<fs::path> registry_datasets;
    const auto reg_dir = registry_from_env(a.registry);
    if (!reg_dir.empty()) {
        const fs::path rp(reg_dir);
        std::error_code ec;
        if (fs::is_regular_file(rp, ec) && is_dataset_file(rp))
            registry_datasets.push_back(rp);
        else
            for (const auto& p : expand_inputs({reg_dir}))
                all.push_back(p);
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    const std::set<fs::path> target_set(targets.begin(), targets.end());
    std::set<std::string> target_names;
    for (const auto& t : targets)
        target_names.insert(t.filename().string());

    auto registry = Registry::load_paths(all);
    // a dataset file given as registry contributes its embedded documents
    for (const auto& p : registry_datasets) {
        const auto embedded = embedded_registry(open(p).dataset);
        for (const auto& d : embedded.documents())
            if (!registry.find(d->kind, d->id))
                registry.add(*d);
    }
    const auto files = dataset_file_access();
    ValidationReport report;
    std::vector<const DescriptionDoc*> docs;
    for (const auto& d : registry.documents()) {
        if (!target_set.count(fs::weakly_canonical(d->source_path)))
            continue;
        docs.push_back(d.get());
        report.merge(validate(*d, registry, files));
    }
    for (const auto& i : registry.load_issues().items)
        if (target_names.count(i.document)) {
            report.items.push_back(i);
        }

    // dataset files: their embedded metadata is validated on its own
    std::vector<std::shared_ptr<const DescriptionDoc>> embedded_docs;
    for (const auto& p : datasets) {
        const auto opened = open(p);
        report.merge(opened.report);
        const auto embedded = embedded_registry(opened.dataset);
        for (const auto& d : embedded.documents())
            embedded_docs.push_back(d);
    }
    for (const auto& d : embedded_docs)
        docs.push_back(d.get());
    report.canonicalize();

    json channels = json::object();
    for (const auto* d : docs) {
        if (d->kind != DocKind::testbed)
            continue;
        const auto own = validate(*d, registry, files);
        if (!own.valid())
            continue;
        const auto map = expand_channels(d->as<TestbedDesc>(), files, d->source_path.parent_path(), &registry);
        json chains = json::object();
        for (const auto& ch : map.channels)
            chains[ch.chain_label] = chains.value(ch.chain_label, 0) + 1;
        channels[d->id] = json{{"total", map.channels.size()}, {"chains", chains}};
    }

    const auto issues = by_path_then_code(report.items);
    if (a.format == "json") {
        json j;
        j["valid"] = report.valid();
        j["errors"] = report.error_count();
        j["warnings"] = report.warning_count();
        j["documents"] = json::array();
        for (const auto* d : docs)
            j["documents"].push_back(
                json{{"kind", std::string(to_string(d->kind))}, {"id", d->id}, {"file", d->source_path.string()}});
        j["issues"] = json::array();
        for (const auto& i : issues)
            j["issues"].push_back(issue_json(i));
        j["channels"] = channels;
        out << j.dump(2) << "\n";
    } else {
        for (const auto& i : issues) {
            out << severity_name(i.severity) << " " << i.code << " ";
            if (!i.document.empty())
                out << i.document << " ";
            out << (i.path.empty() ? "<root>" : i.path) << ": " << i.message << "\n";
        }
        for (auto it = channels.begin(); it != channels.end(); ++it) {
            out << "testbed " << it.key() << ": " << it.value()["total"].get<std::size_t>() << " channels (";
            bool first = true;
            for (auto c = it.value()["chains"].begin(); c != it.value()["chains"].end(); ++c) {
                out << (first ? "" : ", ") << c.key() << " " << c.value().get<std::size_t>();
                first = false;
            }
            out << ")\n";
        }
        out << docs.size() << " documents, " << report.error_count() << " errors, " << report.warning_count()
            << " warnings\n";
    }
    return report.valid() ? kExitOk : kExitValidation;
}

// ---------------------------------------------------------------------------

std::string axes_summary(const DssDataset& ds)
{
    std::string s;
    for (const auto& a : ds.axes())
        s += (s.empty() ? "" : " ") + a.name + ":" + std::to_string(a.length);
    return s;
}

json attr_json(const AttrValue& v)
{
    if (const auto* i = std::get_if<std::int64_t>(&v))
        return *i;
    if (const auto* d = std::get_if<double>(&v))
        return *d;
    return std::get<std::string>(v);
}

int cmd_info(const std::string& path, const std::string& format, std::ostream& out)
{
    const auto opened = open(path);
    const auto& ds = opened.dataset;
    json j;
    j["file"] = path;
    j["format"] = std::string(to_string(opened.format));
    j["dataset_type"] = ds.dataset_type();
    j["domain"] = std::string(to_string(ds.domain()));
    j["value_kind"] = std::string(to_string(ds.value_kind()));
    j["axes"] = json::array();
    for (const auto& a : ds.axes()) {
        json ax{{"name", a.name}, {"kind", std::string(to_string(a.kind))}, {"length", a.length}};
        if (a.coordinate)
            ax["coordinate"] = json{{"unit", a.coordinate->unit},
                                    {"semantics", std::string(to_string(a.coordinate->semantics))}};
        if (auto it = ds.channel_coords().find(a.name); it != ds.channel_coords().end())
            ax["channel_coords"] = it->second.orientations ? "positions+orientations" : "positions";
        j["axes"].push_back(ax);
    }
    j["attrs"] = json::object();
    for (const auto& [k, v] : ds.attrs())
        j["attrs"][k] = attr_json(v);
    j["metadata"] = json::array();
    for (const auto& m : ds.metadata())
        j["metadata"].push_back(m.kind + "/" + m.id);
    j["metadata_report"] = json{{"valid", opened.report.valid()},
                                {"errors", opened.report.error_count()},
                                {"warnings", opened.report.warning_count()}};
    j["series"] = json::array();
    for (const auto& s : ds.series())
        j["series"].push_back(json{{"run", s.run}, {"metric", s.metric}, {"points", s.points.size()}, {"unit", s.unit}});
    j["hardware_attributes"] = json::array();
    for (const auto& [comp, attrs] : ds.hardware_attributes())
        for (const auto& [name, m] : attrs)
            j["hardware_attributes"].push_back(comp + "/" + name);

    if (format == "json") {
        out << j.dump(2) << "\n";
        return kExitOk;
    }
    out << "file: " << path << " (" << to_string(opened.format) << ")\n";
    out << "dataset_type: " << ds.dataset_type() << "\n";
    out << "domain: " << to_string(ds.domain()) << "\n";
    out << "value_kind: " << to_string(ds.value_kind()) << "\n";
    if (!ds.axes().empty())
        out << "axes: " << axes_summary(ds) << "\n";
    for (const auto& a : ds.axes()) {
        if (a.coordinate)
            out << "coordinate " << a.name << ": " << a.coordinate->unit << ", "
                << to_string(a.coordinate->semantics) << "\n";
        if (auto it = ds.channel_coords().find(a.name); it != ds.channel_coords().end())
            out << "channel coordinates " << a.name << ": "
                << (it->second.orientations ? "positions, orientations" : "positions") << "\n";
    }
    for (const auto& [k, v] : ds.attrs())
        out << "attr " << k << " = " << attr_to_string(v) << "\n";
    for (const auto& s : ds.series())
        out << "series run" << s.run << "/" << s.metric << ": " << s.points.size() << " points [" << s.unit << "]\n";
    for (const auto& [comp, attrs] : ds.hardware_attributes())
        for (const auto& [name, m] : attrs)
            out << "hardware attribute " << comp << "/" << name << ": " << m.rows << "x" << m.cols << "\n";
    out << "metadata:";
    if (ds.metadata().empty())
        out << " none";
    for (const auto& m : ds.metadata())
        out << " " << m.kind << "/" << m.id;
    out << "\n";
    out << "metadata validation: " << (opened.report.valid() ? "valid" : "invalid") << " ("
        << opened.report.error_count() << " errors, " << opened.report.warning_count() << " warnings)\n";
    for (const auto& i : by_path_then_code(opened.report.items))
        out << "  " << severity_name(i.severity) << " " << i.code << " " << i.document << " " << i.path << ": "
            << i.message << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct PlotArgs {
    std::string src, op, select, out, format;
    bool unwrap = false;
};

int cmd_plot(const PlotArgs& a, std::ostream& out)
{
    const fs::path dst(a.out);
    RenderFormat rf;
    const std::string f = !a.format.empty() ? a.format : dst.extension().string().substr(dst.has_extension() ? 1 : 0);
    if (f == "svg")
        rf = RenderFormat::svg;
    else if (f == "csv")
        rf = RenderFormat::csv;
    else
        fail(ErrorCode::InvalidArgument, "cannot tell the plot format from '" + a.out + "'; use --format svg|csv");
    const auto sel = parse_slice_selector(a.select);
    const auto opened = open(a.src);
    RenderOptions opt;
    opt.unwrap_phase = a.unwrap;
    if (a.op == "cr") {
        write_atomic(dst, render(plot_cr(opened.dataset, sel), rf, opt));
        out << dst.string() << "\n";
    } else if (a.op == "rir") {
        write_atomic(dst, render(plot_rir(opened.dataset, sel), rf, opt));
        out << dst.string() << "\n";
    } else {
        const auto [mag, phase] = plot_tf(opened.dataset, sel);
        const auto phase_path = dst.parent_path() / (dst.stem().string() + "_phase" + dst.extension().string());
        const auto mag_bytes = render(mag, rf, opt);
        const auto phase_bytes = render(phase, rf, opt);
        write_atomic(dst, mag_bytes);
        write_atomic(phase_path, phase_bytes);
        out << dst.string() << "\n" << phase_path.string() << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
    std::string profile = "cs";
    std::string preset;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out, to, registry;
    double fs = 0, fc = 0, noise = -1;
    std::size_t samples = 0, time = 0, channels = 0;
    std::size_t num_tx = 0, num_rx = 0;
    std::string tx_pos, rx_pos;
};

std::vector<Position> parse_positions(const std::string& text, const char* what)
{
    std::vector<Position> out;
    std::stringstream rows(text);
    std::string row;
    while (std::getline(rows, row, ';')) {
        std::stringstream cols(row);
        std::string c;
        Position p{};
        std::size_t k = 0;
        while (std::getline(cols, c, ',')) {
            if (k >= 3)
                fail(ErrorCode::InvalidArgument, std::string(what) + " position '" + row + "' needs x,y,z");
            std::size_t used = 0;
            try {
                p[k] = std::stod(c, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0)
                fail(ErrorCode::InvalidArgument, std::string(what) + " position '" + row + "' is not numeric");
            ++k;
        }
        if (k != 3)
            fail(ErrorCode::InvalidArgument, std::string(what) + " position '" + row + "' needs x,y,z");
        out.push_back(p);
    }
    if (out.empty())
        fail(ErrorCode::InvalidArgument, std::string("no ") + what + " positions given");
    return out;
}

// Default layouts: sources on a line at x = 0, receivers on a parallel line.
std::vector<Position> line(std::size_t n, double x, double spacing, double z)
{
    std::vector<Position> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(Position{x, spacing * static_cast<double>(i), z});
    return out;
}

std::vector<Position> resolve_nodes(std::size_t num, const std::string& pos, std::size_t dflt, double x,
                                    double spacing, double z, const char* what, const char* num_flag,
                                    const char* pos_flag)
{
    if (num && !pos.empty())
        fail(ErrorCode::InvalidArgument, std::string(num_flag) + " and " + pos_flag + " are mutually exclusive");
    if (!pos.empty())
        return parse_positions(pos, what);
    return line(num ? num : dflt, x, spacing, z);
}

int cmd_synth(const SynthArgs& a, std::ostream& out)
{
    const fs::path dst(a.out);
    DssDataset ds;
    const bool custom_geometry = a.num_tx || a.num_rx || !a.tx_pos.empty() || !a.rx_pos.empty();
    if (a.profile == "cs" || a.profile == "channel_sounding") {
        ChannelSoundingSpec spec;
        if (a.preset == "fig4") {
            if (custom_geometry || a.fs || a.fc || a.samples)
                fail(ErrorCode::InvalidArgument, "--preset fig4 fixes geometry, fs, fc and samples");
            spec = fig4_preset(a.seed);
        } else if (!a.preset.empty() && a.preset != "custom") {
            fail(ErrorCode::InvalidArgument, "unknown preset '" + a.preset + "'");
        } else {
            spec.tx = resolve_nodes(a.num_tx, a.tx_pos, 1, 0.0, 0.5, 1.0, "tx", "--num-tx", "--tx-pos");
            spec.rx = resolve_nodes(a.num_rx, a.rx_pos, 4, 3.0, 0.02, 1.0, "rx", "--num-rx", "--rx-pos");
            spec.fs = a.fs ? a.fs : 1e9;
            spec.fc = a.fc ? a.fc : 6.95e9;
            spec.n_samples = a.samples ? a.samples : 1024;
            spec.model.seed = a.seed;
        }
        if (a.channels)
            fail(ErrorCode::InvalidArgument, "--channels applies to acoustic datasets only");
        if (a.time)
            spec.n_time = a.time;
        if (a.noise >= 0)
            spec.model.noise_std = a.noise;
        ds = gen_channel_sounding(spec);
    } else if (a.profile == "acoustic") {
        if (!a.preset.empty() && a.preset != "custom")
            fail(ErrorCode::InvalidArgument, "preset '" + a.preset + "' is not available for acoustic datasets");
        if (a.fc || a.time)
            fail(ErrorCode::InvalidArgument, "--fc and --time apply to channel-sounding datasets only");
        AcousticSpec spec;
        spec.speakers = resolve_nodes(a.num_tx, a.tx_pos, 1, 0.0, 1.0, 1.5, "speaker", "--num-tx", "--tx-pos");
        spec.microphones = resolve_nodes(a.num_rx, a.rx_pos, 1, 3.43, 0.05, 1.5, "microphone", "--num-rx", "--rx-pos");
        spec.fs = a.fs ? a.fs : 48e3;
        spec.n_samples = a.samples ? a.samples : 4800;
        spec.n_channels = a.channels ? a.channels : 1;
        spec.model.seed = a.seed;
        if (a.noise >= 0)
            spec.model.noise_std = a.noise;
        ds = gen_acoustic(spec);
    } else {
        fail(ErrorCode::InvalidArgument, "unknown profile '" + a.profile + "' (expected cs or acoustic)");
    }
    if (const auto reg = registry_from_env(a.registry); !reg.empty())
        embed_documents(ds, Registry::load_paths(expand_inputs({reg})));
    save(ds, dst, format_for(a.to, dst));
    out << dst.string() << ": " << ds.dataset_type() << " " << axes_summary(ds) << "\n";
    return kExitOk;
}

int cmd_locations(const std::string& src, const std::string& dst, std::ostream& out)
{
    const auto [file, object] = split_data_ref(src);
    const auto m = dataset_file_access().load_matrix(file, object);
    if (m.cols != 3)
        fail(ErrorCode::ShapeError, "location table must have 3 columns, got " + std::to_string(m.cols), src);
    const auto tmp = fs::path(dst).parent_path() / ("." + fs::path(dst).filename().string() + ".loc");
    write_csv_matrix(tmp, m);
    std::error_code ec;
    fs::rename(tmp, dst, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(ErrorCode::IoError, "cannot write file", dst);
    }
    out << dst << ": " << m.rows << " locations\n";
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"dss: validate, inspect, convert, slice, plot and synthesize DSS datasets", "dss"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "dss 1.0 (layout " + std::string(kLayoutVersion) + ")");

    ValidateArgs va;
    auto* validate_cmd = app.add_subcommand("validate", "Validate description files");
    validate_cmd->add_option("paths", va.paths, "Description files or directories")->required();
    validate_cmd->add_option("--registry", va.registry, "Directory of referenced documents (default: $DSS_REGISTRY)");
    validate_cmd->add_option("--format", va.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    std::string info_path, info_format = "text";
    auto* info_cmd = app.add_subcommand("info", "Summarize a dataset file");
    info_cmd->add_option("file", info_path)->required();
    info_cmd->add_option("--format", info_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    std::string conv_src, conv_dst, conv_to;
    auto* convert_cmd = app.add_subcommand("convert", "Convert between HDF5 and NetCDF-4");
    convert_cmd->add_option("src", conv_src)->required();
    convert_cmd->add_option("dst", conv_dst)->required();
    convert_cmd->add_option("--to", conv_to, "hdf5 or netcdf4 (default: from the dst extension)");

    std::string slice_src, slice_dst, slice_sel, slice_to;
    auto* slice_cmd = app.add_subcommand("slice", "Write a sliced copy of a dataset");
    slice_cmd->add_option("src", slice_src)->required();
    slice_cmd->add_option("dst", slice_dst)->required();
    slice_cmd->add_option("--select", slice_sel, "e.g. tx=0,rx=0:4,t=0");
    slice_cmd->add_option("--to", slice_to, "hdf5 or netcdf4 (default: source format)");

    PlotArgs pa;
    auto* plot_cmd = app.add_subcommand("plot", "Render a channel response, transfer function or RIR");
    plot_cmd->add_option("src", pa.src)->required();
    plot_cmd->add_option("--op", pa.op, "cr, tf or rir")->required()->check(CLI::IsMember({"cr", "tf", "rir"}));
    plot_cmd->add_option("--select", pa.select, "e.g. tx=0,rx=[0,1,2,3],t=0");
    plot_cmd->add_option("--out", pa.out, "Output .svg or .csv")->required();
    plot_cmd->add_option("--format", pa.format, "svg or csv (default: from --out)")
        ->check(CLI::IsMember({"svg", "csv"}));
    plot_cmd->add_flag("--unwrap", pa.unwrap, "Unwrap phase plots");

    SynthArgs sa;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
    synth_cmd->add_option("--profile", sa.profile, "cs or acoustic");
    synth_cmd->add_option("--preset", sa.preset, "fig4 or custom");
    synth_cmd->add_option("--seed", sa.seed, "Noise seed");
    synth_cmd->add_option("--out", sa.out, "Output file")->required();
    synth_cmd->add_option("--to", sa.to, "hdf5 or netcdf4 (default: from the extension)");
    synth_cmd->add_option("--registry", sa.registry, "Description files to embed");
    synth_cmd->add_option("--fs", sa.fs, "Sampling rate / bandwidth [Hz]");
    synth_cmd->add_option("--fc", sa.fc, "Carrier frequency [Hz]");
    synth_cmd->add_option("--samples", sa.samples, "Samples per response");
    synth_cmd->add_option("--time", sa.time, "Snapshots (channel sounding)");
    synth_cmd->add_option("--channels", sa.channels, "Channels per microphone (acoustic)");
    synth_cmd->add_option("--noise", sa.noise, "Noise standard deviation");
    synth_cmd->add_option("--num-tx,--num-speakers", sa.num_tx, "Transmitters or speakers on a default line");
    synth_cmd->add_option("--num-rx,--num-mics", sa.num_rx, "Receivers or microphones on a default line");
    synth_cmd->add_option("--tx-pos,--speaker-pos", sa.tx_pos, "Positions 'x,y,z;x,y,z' in m");
    synth_cmd->add_option("--rx-pos,--mic-pos", sa.rx_pos, "Positions 'x,y,z;x,y,z' in m");

    std::string loc_src, loc_dst;
    auto* loc_cmd = app.add_subcommand("locations", "Convert a location table (.npy, .csv, file#/object) to CSV");
    loc_cmd->add_option("src", loc_src)->required();
    loc_cmd->add_option("dst", loc_dst)->required();

    std::vector<std::string> argv_store{"dss"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store)
        argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << "run 'dss --help' for usage\n";
        return kExitUsage;
    }

    try {
        if (*validate_cmd)
            return cmd_validate(va, out);
        if (*info_cmd)
            return cmd_info(info_path, info_format, out);
        if (*convert_cmd) {
            refuse_overwrite(conv_src, conv_dst);
            convert(conv_src, conv_dst, format_for(conv_to, conv_dst));
            out << conv_dst << "\n";
            return kExitOk;
        }
        if (*slice_cmd) {
            refuse_overwrite(slice_src, slice_dst);
            const auto sel = parse_slice_selector(slice_sel);
            const auto opened = open(slice_src);
            const auto fmt = slice_to.empty() ? opened.format : format_for(slice_to, slice_dst);
            const auto sub = slice(opened.dataset, sel);
            save(sub, slice_dst, fmt);
            out << slice_dst << ": " << axes_summary(sub) << "\n";
            return kExitOk;
        }
        if (*plot_cmd)
            return cmd_plot(pa, out);
        if (*synth_cmd) {
            sa.seed_set = synth_cmd->count("--seed") > 0;
            return cmd_synth(sa, out);
        }
        if (*loc_cmd)
            return cmd_locations(loc_src, loc_dst, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const fs::filesystem_error& e) {
        err << "error: IoError: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}

} // namespace dss
