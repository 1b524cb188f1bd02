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

// Runs every acceptance criterion and prints one PASS/FAIL line for each.

#include "generators.hpp"
#include "support.hpp"

#include "dss/analysis.hpp"
#include "dss/cli.hpp"
#include "dss/descfiles.hpp"
#include "dss/storage.hpp"
#include "dss/synth.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

using namespace dss;
using dss::test::fixture;
using dss::test::read_file;
using dss::test::Rng;
using dss::test::TempDir;
namespace gen = dss::test;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what)
    {
        if (!ok) {
            if (pass)
                detail = what;
            pass = false;
        }
    }
};

std::optional<ErrorCode> code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

int cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    return run_cli(args, out, err);
}

std::string num(double v)
{
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

// ---------------------------------------------------------------------------

Outcome fig2_conformance()
{
    Outcome o;
    const auto t0 = Clock::now();
    const auto reg = Registry::load_dir(fixture("techtile"));
    const auto report = validate_all(reg);
    const auto* tb = reg.find(DocKind::testbed, "Techtile");
    o.check(tb != nullptr, "Techtile testbed missing");
    if (!tb)
        return o;
    const auto map = expand_channels(tb->as<TestbedDesc>(), default_file_access(), fixture("techtile"), &reg);
    const double dt = seconds_since(t0);
    std::size_t rf = 0, ac = 0;
    for (const auto& c : map.channels) {
        rf += c.chain_label == "RF";
        ac += c.chain_label == "Acoustic";
    }
    o.check(report.error_count() == 0, std::to_string(report.error_count()) + " validation errors");
    o.check(rf == 140, "RF channels " + std::to_string(rf));
    o.check(ac == 100, "Acoustic channels " + std::to_string(ac));
    o.check(dt < 1.0, "runtime " + num(dt) + " s");
    if (o.pass)
        o.detail = "0 errors, RF 140, Acoustic 100, " + num(dt) + " s";
    return o;
}

Outcome selector_semantics()
{
    Outcome o;
    o.check(parse_channel_selector("0:100", 240).indices.size() == 100, "\"0:100\" size");
    Rng rng(2024);
    std::size_t failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto n = gen::uniform_size(rng, 1, 5000);
        const auto b = gen::uniform_size(rng, 1, n);
        const auto a = gen::uniform_size(rng, 0, b - 1);
        const auto sel = parse_channel_selector(std::to_string(a) + ":" + std::to_string(b), n);
        bool ok = sel.indices.size() == b - a;
        for (std::size_t k = 0; ok && k < sel.indices.size(); ++k)
            ok = sel.indices[k] == a + k;
        failures += !ok;
    }
    o.check(failures == 0, std::to_string(failures) + " failures");
    if (o.pass)
        o.detail = "\"0:100\" -> 100, 1000/1000 random ranges";
    return o;
}

Outcome storage_round_trip()
{
    Outcome o;
    TempDir tmp;
    Rng rng(31337);
    const auto t0 = Clock::now();
    std::map<std::string, int> per_type;
    for (std::size_t i = 0; i < 200 && o.pass; ++i) {
        const auto ds = gen::random_dataset(rng, i);
        ++per_type[ds.dataset_type()];
        const auto h5 = tmp / ("d" + std::to_string(i) + ".h5");
        const auto nc = tmp / ("d" + std::to_string(i) + ".nc");
        const auto h5b = tmp / ("d" + std::to_string(i) + "b.h5");
        save(ds, h5, StorageFormat::hdf5);
        save(ds, nc, StorageFormat::netcdf4);
        o.check(open(h5).dataset == ds, "hdf5 round-trip, dataset " + std::to_string(i));
        o.check(open(nc).dataset == ds, "netcdf4 round-trip, dataset " + std::to_string(i));
        convert(h5, nc, StorageFormat::netcdf4);
        convert(nc, h5b, StorageFormat::hdf5);
        o.check(open(h5b).dataset == ds, "triple conversion, dataset " + std::to_string(i));
        std::filesystem::remove(h5);
        std::filesystem::remove(nc);
        std::filesystem::remove(h5b);
    }
    const double dt = seconds_since(t0);
    o.check(per_type.size() == 3, "profiles covered " + std::to_string(per_type.size()));
    o.check(dt < 60.0, "runtime " + num(dt) + " s");
    if (o.pass)
        o.detail = "200 datasets (cs " + std::to_string(per_type["channel_sounding"]) + ", acoustic " +
                   std::to_string(per_type["acoustic"]) + ", simulation " + std::to_string(per_type["simulation"]) +
                   ") x 2 formats + triple conversion, " + num(dt) + " s";
    return o;
}

Outcome transform_correctness()
{
    Outcome o;
    Rng rng(4242);
    std::normal_distribution<double> g;
    double worst_parseval = 0, worst_rt = 0;
    for (int i = 0; i < 100; ++i) {
        const auto n = gen::uniform_size(rng, 1, 2048);
        const auto rx = gen::uniform_size(rng, 1, 4);
        const auto t = gen::uniform_size(rng, 1, 3);
        const double dt = gen::uniform_real(rng, 0.2e-9, 5e-9);
        std::vector<double> tau(n);
        for (std::size_t k = 0; k < n; ++k)
            tau[k] = static_cast<double>(k) * dt;
        auto ds = new_dataset("channel_sounding",
                              {make_axis(AxisKind::tx, 1), make_axis(AxisKind::rx, rx), make_axis(AxisKind::time, t),
                               make_axis(AxisKind::sample, n, CoordinateVec{tau, "s", CoordSemantics::delay_seconds})},
                              Domain::delay,
                              {{"center_frequency", gen::uniform_real(rng, 1e9, 30e9)}, {"bandwidth", 1.0 / dt}});
        double e = 0;
        for (auto& v : ds.complex_data()) {
            v = Complex(g(rng), g(rng));
            e += std::norm(v);
        }
        const auto tf = cir_to_tf(ds);
        double etf = 0;
        for (const auto& v : tf.complex_data())
            etf += std::norm(v);
        worst_parseval = std::max(worst_parseval, std::abs(etf - e) / e);
        const auto back = tf_to_cir(tf);
        double err = 0;
        for (std::size_t k = 0; k < ds.size(); ++k)
            err += std::norm(back.complex_data()[k] - ds.complex_data()[k]);
        worst_rt = std::max(worst_rt, std::sqrt(err / e));
    }
    o.check(worst_parseval <= 1e-9, "Parseval " + num(worst_parseval));
    o.check(worst_rt <= 1e-9, "round-trip " + num(worst_rt));

    auto spec = fig4_preset();
    spec.rx = {{3.0 + 0.0123, 0.0, 1.0}};
    spec.model.noise_std = 0.0;
    const double tau0 = 3.0123 / kSpeedOfLight;
    const auto [mag, phase] = plot_tf(gen_channel_sounding(spec), parse_slice_selector("tx=0,rx=0,t=0"));
    const auto un = unwrap(phase.series[0].values);
    const auto& f = phase.x.values;
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        mx += f[k];
        my += un[k];
    }
    mx /= static_cast<double>(f.size());
    my /= static_cast<double>(f.size());
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        sxy += (f[k] - mx) * (un[k] - my);
        sxx += (f[k] - mx) * (f[k] - mx);
    }
    const double slope_err = std::abs(sxy / sxx / (-2.0 * std::numbers::pi * tau0) - 1.0);
    o.check(slope_err <= 1e-6, "phase slope " + num(slope_err));
    if (o.pass)
        o.detail = "Parseval " + num(worst_parseval) + ", round-trip " + num(worst_rt) + ", phase slope " +
                   num(slope_err) + " (relative)";
    return o;
}

Outcome geometry_oracle()
{
    Outcome o;
    const auto spec = fig4_preset();
    const auto ds = oversample(gen_channel_sounding(spec), 8);
    const auto& tau = ds.axis("sample").coordinate->values;
    const std::size_t n = ds.axis("sample").length;
    const double step = 1.0 / spec.fs / 8.0;
    std::vector<double> peaks;
    double worst = 0;
    for (std::size_t r = 0; r < spec.rx.size(); ++r) {
        const auto row = ds.complex_data().subspan(r * n, n);
        std::size_t best = 0;
        for (std::size_t k = 1; k < n; ++k)
            if (std::abs(row[k]) > std::abs(row[best]))
                best = k;
        peaks.push_back(tau[best]);
        const auto& a = spec.tx[0];
        const auto& b = spec.rx[r];
        const double truth = std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]) / kSpeedOfLight;
        worst = std::max(worst, std::abs(tau[best] - truth));
        o.check(std::abs(tau[best] - truth) <= step, "rx " + std::to_string(r) + " delay error " +
                                                         num(std::abs(tau[best] - truth)) + " s");
    }
    double worst_diff = 0;
    for (std::size_t r = 1; r < peaks.size(); ++r) {
        const double d = std::abs((peaks[r] - peaks[r - 1]) - 0.02 / kSpeedOfLight);
        worst_diff = std::max(worst_diff, d);
        o.check(d <= step, "adjacent difference " + std::to_string(r) + " off by " + num(d) + " s");
    }
    if (o.pass)
        o.detail = "max delay error " + num(worst) + " s, max spacing error " + num(worst_diff) + " s (bound " +
                   num(step) + " s)";
    return o;
}

Outcome acoustic_oracle()
{
    Outcome o;
    AcousticSpec spec;
    spec.speakers = {{0.0, 0.0, 1.5}};
    spec.microphones = {{3.43, 0.0, 1.5}};
    spec.fs = 48e3;
    const auto ds = gen_acoustic(spec);
    const auto d = ds.real_data();
    std::size_t best = 0;
    for (std::size_t k = 1; k < d.size(); ++k)
        if (std::abs(d[k]) > std::abs(d[best]))
            best = k;
    o.check(best == 480, "peak at sample " + std::to_string(best));
    if (o.pass)
        o.detail = "peak at sample 480";
    return o;
}

Outcome plot_determinism()
{
    Outcome o;
    TempDir tmp;
    const auto src = tmp / "fig4.h5";
    o.check(cli({"synth", "--preset", "fig4", "--seed", "7", "--out", src.string()}) == 0, "synth failed");
    std::size_t rows = 0;
    for (const auto* ext : {".svg", ".csv"})
        for (const auto* op : {"cr", "tf"}) {
            const auto a = tmp / (std::string(op) + "_a" + ext);
            const auto b = tmp / (std::string(op) + "_b" + ext);
            for (const auto& out : {a, b})
                o.check(cli({"plot", src.string(), "--op", op, "--select", "tx=0,rx=0:4,t=0", "--out", out.string()}) ==
                            0,
                        std::string("plot ") + op + ext + " failed");
            o.check(read_file(a) == read_file(b), std::string(op) + ext + " differs between runs");
            if (std::string(op) == "tf") {
                const auto pa = tmp / (std::string(op) + "_a_phase" + ext);
                const auto pb = tmp / (std::string(op) + "_b_phase" + ext);
                o.check(read_file(pa) == read_file(pb), std::string(op) + " phase" + ext + " differs between runs");
            }
            if (std::string(ext) == ".csv") {
                const auto text = read_file(a);
                rows = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
                o.check(rows == 1024 + 1, std::string(op) + " CSV rows " + std::to_string(rows));
            }
        }
    // acoustic RIR plot
    const auto ac = tmp / "ac.h5";
    o.check(cli({"synth", "--profile", "acoustic", "--num-speakers", "2", "--num-mics", "16", "--out", ac.string()}) == 0,
            "acoustic synth failed");
    const auto r1 = tmp / "rir1.csv", r2 = tmp / "rir2.csv";
    for (const auto& out : {r1, r2})
        o.check(cli({"plot", ac.string(), "--op", "rir", "--select", "sp=1,mic=14,ch=0", "--out", out.string()}) == 0,
                "rir plot failed");
    const auto rir = read_file(r1);
    o.check(rir == read_file(r2), "rir CSV differs between runs");
    o.check(std::count(rir.begin(), rir.end(), '\n') == 4800 + 1, "rir CSV rows");
    if (o.pass)
        o.detail = "cr/tf/rir SVG+CSV byte-identical, CSV rows = N + 1";
    return o;
}

// ---------------------------------------------------------------------------

struct ErrorCase {
    ErrorCode code;
    int exit_code; // expected CLI exit code
    std::function<void()> trigger;
    std::vector<std::string> cli_args; // empty: no CLI path
};

Outcome error_matrix()
{
    Outcome o;
    TempDir tmp;
    const auto cs = tmp / "cs.h5";
    const auto ac = tmp / "ac.h5";
    cli({"synth", "--preset", "fig4", "--out", cs.string()});
    cli({"synth", "--profile", "acoustic", "--out", ac.string()});
    const auto techtile = fixture("techtile").string();
    const auto fig4 = gen_channel_sounding(fig4_preset());
    const auto with_exp = [](const char* file) {
        return Registry::load_paths({fixture("techtile"), fixture(std::string("experiments/") + file)});
    };

    const std::vector<ErrorCase> cases{
        {ErrorCode::SyntaxError, 1,
         [] { parse_description(read_file(fixture("bad/syntax.testbed.yaml")), DocKind::testbed); },
         {"validate", fixture("bad/syntax.testbed.yaml").string()}},
        {ErrorCode::KindMismatch, 1,
         [] { parse_description(read_file(fixture("bad/mismatch.data_source.yaml")), DocKind::data_source); },
         {"validate", fixture("bad/unknown_kind.testbed.yaml").string()}},
        {ErrorCode::TypeError, 1,
         [] { parse_description(read_file(fixture("bad/many.testbed.yaml")), DocKind::testbed); },
         {"validate", fixture("bad/many.testbed.yaml").string()}},
        {ErrorCode::GrammarError, 2, [] { parse_channel_selector("0-1", 2); },
         {"slice", cs.string(), (tmp / "g.h5").string(), "--select", "rx=[0"}},
        {ErrorCode::RangeError, 2, [] { parse_channel_selector("0:3", 2); }, {}},
        {ErrorCode::UnresolvedRef, 1,
         [&] {
             const auto r = with_exp("missing_testbed.experiment.yaml");
             resolve_experiment(*r.find(DocKind::experiment, "elsewhere"), r);
         },
         {"validate", fixture("dangling").string()}},
        {ErrorCode::MappingError, 1,
         [&] {
             const auto r = with_exp("bad_pair.experiment.yaml");
             resolve_experiment(*r.find(DocKind::experiment, "techtile-bad-pair"), r);
         },
         {"validate", fixture("experiments/bad_pair.experiment.yaml").string(), "--registry", techtile}},
        {ErrorCode::UnknownType, 2, [] { new_dataset("radar_cube", {make_axis(AxisKind::tx, 1)}, Domain::none); },
         {}},
        {ErrorCode::ProfileViolation, 2,
         [] { new_dataset("channel_sounding", {make_axis(AxisKind::tx, 1)}, Domain::delay); }, {}},
        {ErrorCode::AxisError, 2, [&] { slice(fig4, parse_slice_selector("beam=0")); },
         {"slice", cs.string(), (tmp / "a.h5").string(), "--select", "beam=0"}},
        {ErrorCode::IndexError, 2, [&] { slice(fig4, parse_slice_selector("rx=200")); },
         {"slice", cs.string(), (tmp / "i.h5").string(), "--select", "rx=200"}},
        {ErrorCode::DuplicateType, 2,
         [] {
             const DatasetProfile p{{{AxisKind::custom, "range"}}, ValueKind::complex, {}, {}, false};
             register_type(register_type(DatasetTypeRegistry(), "radar_cube", p), "radar_cube", p);
         },
         {}},
        {ErrorCode::ReservedName, 2,
         [] { register_type(DatasetTypeRegistry(), "acoustic", DatasetProfile{}); }, {}},
        {ErrorCode::ShapeError, 2, [&] { attach_channel_coords(fig4, "rx", Matrix(3, 3)); },
         {"locations", fixture("bad/two_columns.csv").string(), (tmp / "l.csv").string()}},
        {ErrorCode::NormError, 2,
         [&] { attach_channel_coords(fig4, "rx", Matrix(4, 3), Matrix(4, 4)); }, {}},
        {ErrorCode::InvalidArgument, 2, [&] { oversample(fig4, 0); }, {"convert", cs.string(), cs.string()}},
        {ErrorCode::IoError, 3, [&] { open(tmp / "missing.h5"); }, {"info", (tmp / "missing.h5").string()}},
        {ErrorCode::FormatError, 3, [] { open(fixture("bad/not_a_dataset.h5")); },
         {"info", fixture("bad/not_a_dataset.h5").string()}},
        {ErrorCode::VersionError, 3, [] { open(fixture("bad/classic.nc")); },
         {"info", fixture("bad/classic.nc").string()}},
        {ErrorCode::UnsupportedFeature, 3,
         [&] {
             auto ds = fig4;
             ds.set_hardware_attribute("pa", "gain__rows", Matrix(1, 1));
             save(ds, tmp / "u.h5");
         },
         {}},
        {ErrorCode::DomainError, 2, [&] { tf_to_cir(fig4); }, {}},
        {ErrorCode::NonUniformGrid, 2,
         [&] {
             auto ds = fig4;
             auto c = *ds.axis("sample").coordinate;
             c.values[10] += 0.3e-9;
             ds.set_coordinate("sample", c);
             cir_to_tf(ds);
         },
         {}},
        {ErrorCode::SelectionError, 2, [&] { plot_cr(fig4, parse_slice_selector("sample=0:3")); },
         {"plot", cs.string(), "--op", "cr", "--select", "sample=0:3", "--out", (tmp / "s.svg").string()}},
        {ErrorCode::ProfileError, 2, [&] { plot_rir(fig4, SliceSelector()); },
         {"plot", ac.string(), "--op", "tf", "--out", (tmp / "p.svg").string()}},
        {ErrorCode::WindowError, 2,
         [] {
             auto spec = fig4_preset();
             spec.rx = {{900.0, 0.0, 1.0}};
             gen_channel_sounding(spec);
         },
         {"synth", "--preset", "custom", "--rx-pos", "900,0,0", "--out", (tmp / "w.h5").string()}},
    };

    std::size_t cli_checked = 0;
    std::map<ErrorCode, bool> covered;
    for (const auto& c : cases) {
        const auto name = std::string(to_string(c.code));
        const auto got = code_of(c.trigger);
        o.check(got && *got == c.code, name + " trigger raised " + (got ? std::string(to_string(*got)) : "nothing"));
        o.check(exit_code_for(c.code) == c.exit_code, name + " maps to exit " + std::to_string(exit_code_for(c.code)));
        if (!c.cli_args.empty()) {
            const int rc = cli(c.cli_args);
            o.check(rc == c.exit_code, name + " CLI exit " + std::to_string(rc));
            ++cli_checked;
        }
        covered[c.code] = true;
    }
    for (int k = 0; k <= static_cast<int>(ErrorCode::WindowError); ++k)
        o.check(covered.count(static_cast<ErrorCode>(k)) == 1,
                "no case for " + std::string(to_string(static_cast<ErrorCode>(k))));
    if (o.pass)
        o.detail = std::to_string(cases.size()) + " error classes, " + std::to_string(cli_checked) +
                   " through the CLI, zero deviations";
    return o;
}

} // namespace

int main()
{
    ::unsetenv("DSS_REGISTRY");
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"fig2-conformance", fig2_conformance},     {"selector-semantics", selector_semantics},
        {"storage-round-trip", storage_round_trip}, {"transform-correctness", transform_correctness},
        {"geometry-oracle", geometry_oracle},       {"acoustic-oracle", acoustic_oracle},
        {"plot-determinism", plot_determinism},     {"error-matrix", error_matrix},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("unexpected exception: ") + e.what();
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
        failed += !o.pass;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
