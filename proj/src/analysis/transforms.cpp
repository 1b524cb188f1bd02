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

#include "detail.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace dss {

namespace detail {

void dft_rows(Complex* data, std::size_t n, std::size_t howmany, int sign)
{
    if (n == 0 || howmany == 0)
        return;
    static std::mutex planner;
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    const int len = static_cast<int>(n);
    fftw_plan plan;
    {
        std::lock_guard lock(planner);
        plan = fftw_plan_many_dft(1, &len, static_cast<int>(howmany), buf, nullptr, 1, len, buf, nullptr, 1, len,
                                  sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(planner);
    fftw_destroy_plan(plan);
}

Complex twiddle(long long m, std::size_t k, std::size_t n, int sign)
{
    const auto nn = static_cast<long long>(n);
    long long r = m % nn;
    if (r < 0)
        r += nn;
    const auto prod = static_cast<long long>((static_cast<unsigned __int128>(r) * k) % n);
    if (prod == 0)
        return {1.0, 0.0};
    const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(prod) / static_cast<double>(n);
    return std::polar(1.0, angle);
}

std::size_t sample_axis(const DssDataset& ds)
{
    const auto& axes = ds.axes();
    for (std::size_t i = 0; i < axes.size(); ++i) {
        if (axes[i].kind != AxisKind::sample)
            continue;
        if (i + 1 != axes.size())
            fail(ErrorCode::ProfileError, "the sample axis must be the last axis");
        return i;
    }
    fail(ErrorCode::ProfileError, "'" + ds.dataset_type() + "' dataset has no sample axis");
}

double uniform_step(const std::vector<double>& v, std::string_view what)
{
    const auto n = v.size();
    const double step = (v[n - 1] - v[0]) / static_cast<double>(n - 1);
    if (!(step > 0.0) || !std::isfinite(step))
        fail(ErrorCode::NonUniformGrid, std::string(what) + " coordinate is not increasing");
    for (std::size_t i = 1; i < n; ++i)
        if (!(std::abs((v[i] - v[i - 1]) - step) <= 1e-9 * step))
            fail(ErrorCode::NonUniformGrid, std::string(what) + " coordinate is not uniform at index " +
                                                std::to_string(i));
    return step;
}

double required_attr(const DssDataset& ds, const std::string& key)
{
    const auto v = attr_number(ds.attrs(), key);
    if (!v)
        fail(ErrorCode::ProfileError, "dataset has no numeric '" + key + "' attribute");
    return *v;
}

std::vector<double> time_grid(const DssDataset& ds)
{
    const auto& a = ds.axes()[sample_axis(ds)];
    if (a.coordinate)
        return a.coordinate->values;
    double step;
    if (auto fs = attr_number(ds.attrs(), "sampling_rate"))
        step = 1.0 / *fs;
    else
        step = 1.0 / required_attr(ds, "bandwidth");
    double origin = attr_number(ds.attrs(), "delay_origin").value_or(0.0);
    std::vector<double> out(a.length);
    for (std::size_t i = 0; i < a.length; ++i)
        out[i] = origin + static_cast<double>(i) * step;
    return out;
}

std::vector<double> frequency_grid(const DssDataset& ds)
{
    const auto& a = ds.axes()[sample_axis(ds)];
    if (a.coordinate) {
        if (a.length >= 2)
            uniform_step(a.coordinate->values, "frequency");
        return a.coordinate->values;
    }
    const double fc = required_attr(ds, "center_frequency");
    const double df = required_attr(ds, "bandwidth") / static_cast<double>(a.length);
    const auto h = static_cast<long long>(a.length / 2);
    std::vector<double> out(a.length);
    for (std::size_t j = 0; j < a.length; ++j)
        out[j] = fc + static_cast<double>(static_cast<long long>(j) - h) * df;
    return out;
}

} // namespace detail

using namespace detail;

namespace {

std::vector<Complex> complex_copy(const DssDataset& ds, const char* op)
{
    if (!ds.is_complex())
        fail(ErrorCode::ProfileError, std::string(op) + " needs complex-valued data");
    const auto src = ds.complex_data();
    return {src.begin(), src.end()};
}

double delay_step(const DssDataset& ds, const std::vector<double>& tau)
{
    if (tau.size() >= 2)
        return uniform_step(tau, "delay");
    if (auto fs = attr_number(ds.attrs(), "sampling_rate"))
        return 1.0 / *fs;
    return 1.0 / required_attr(ds, "bandwidth");
}

double frequency_step(const DssDataset& ds, const std::vector<double>& f)
{
    if (f.size() >= 2)
        return uniform_step(f, "frequency");
    return required_attr(ds, "bandwidth");
}

DssDataset rebuild(const DssDataset& ds, std::size_t axis, std::size_t length, CoordinateVec coord, TensorData data)
{
    auto axes = ds.axes();
    axes[axis].length = length;
    axes[axis].coordinate = std::move(coord);
    DssDataset out = ds;
    out.reshape(std::move(axes), std::move(data));
    return out;
}

} // namespace

DssDataset cir_to_tf(const DssDataset& ds)
{
    if (ds.domain() != Domain::delay)
        fail(ErrorCode::DomainError, "cir_to_tf needs a delay-domain dataset, got " +
                                         std::string(to_string(ds.domain())));
    const auto axis = sample_axis(ds);
    auto x = complex_copy(ds, "cir_to_tf");
    const auto tau = time_grid(ds);
    const std::size_t n = tau.size();
    const double dtau = delay_step(ds, tau);
    const double tau0 = tau.front();
    const double fref = attr_number(ds.attrs(), "reference_frequency")
                            .value_or(required_attr(ds, "center_frequency"));
    const double df = 1.0 / (static_cast<double>(n) * dtau);
    const auto h = static_cast<long long>(n / 2);
    const std::size_t rows = x.size() / n;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    std::vector<Complex> pre(n), post(n, Complex(1.0, 0.0));
    for (std::size_t k = 0; k < n; ++k)
        pre[k] = twiddle(h, k, n, +1) * scale;
    if (tau0 != 0.0)
        for (std::size_t j = 0; j < n; ++j)
            post[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(static_cast<long long>(j) - h) *
                                          df * tau0);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = 0; k < n; ++k)
            x[r * n + k] *= pre[k];
    dft_rows(x.data(), n, rows, -1);
    if (tau0 != 0.0)
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t j = 0; j < n; ++j)
                x[r * n + j] *= post[j];

    CoordinateVec f{std::vector<double>(n), "Hz", CoordSemantics::frequency_hz_absolute};
    for (std::size_t j = 0; j < n; ++j)
        f.values[j] = fref + static_cast<double>(static_cast<long long>(j) - h) * df;
    auto out = rebuild(ds, axis, n, std::move(f), std::move(x));
    out.set_domain(Domain::frequency);
    out.erase_attr("reference_frequency");
    if (tau0 != 0.0)
        out.set_attr("delay_origin", tau0);
    else
        out.erase_attr("delay_origin");
    return out;
}

DssDataset tf_to_cir(const DssDataset& ds)
{
    if (ds.domain() != Domain::frequency)
        fail(ErrorCode::DomainError, "tf_to_cir needs a frequency-domain dataset, got " +
                                         std::string(to_string(ds.domain())));
    const auto axis = sample_axis(ds);
    auto x = complex_copy(ds, "tf_to_cir");
    const auto f = frequency_grid(ds);
    const std::size_t n = f.size();
    const double df = frequency_step(ds, f);
    const auto h = static_cast<long long>(n / 2);
    const double fref = f[static_cast<std::size_t>(h)];
    const double tau0 = attr_number(ds.attrs(), "delay_origin").value_or(0.0);
    const double dtau = 1.0 / (static_cast<double>(n) * df);
    const std::size_t rows = x.size() / n;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    if (tau0 != 0.0) {
        std::vector<Complex> pre(n);
        for (std::size_t j = 0; j < n; ++j)
            pre[j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(static_cast<long long>(j) - h) *
                                         df * tau0);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t j = 0; j < n; ++j)
                x[r * n + j] *= pre[j];
    }
    dft_rows(x.data(), n, rows, +1);
    std::vector<Complex> post(n);
    for (std::size_t k = 0; k < n; ++k)
        post[k] = twiddle(h, k, n, -1) * scale;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = 0; k < n; ++k)
            x[r * n + k] *= post[k];

    CoordinateVec tau{std::vector<double>(n), "s", CoordSemantics::delay_seconds};
    for (std::size_t k = 0; k < n; ++k)
        tau.values[k] = tau0 + static_cast<double>(k) * dtau;
    auto out = rebuild(ds, axis, n, std::move(tau), std::move(x));
    out.set_domain(Domain::delay);
    out.erase_attr("delay_origin");
    const auto fc = attr_number(ds.attrs(), "center_frequency");
    if (!fc || *fc != fref)
        out.set_attr("reference_frequency", fref);
    else
        out.erase_attr("reference_frequency");
    return out;
}

DssDataset select_band(const DssDataset& ds, double f_lo, double f_hi)
{
    if (ds.domain() != Domain::frequency)
        fail(ErrorCode::DomainError, "select_band needs a frequency-domain dataset");
    if (!(f_lo < f_hi))
        fail(ErrorCode::RangeError, "select_band needs f_lo < f_hi");
    const auto axis = sample_axis(ds);
    const auto f = frequency_grid(ds);
    const double df = frequency_step(ds, f);
    const double tol = 1e-6 * df;
    if (f_lo > f.back() + tol || f_hi < f.front() - tol || f_lo < f.front() - df - tol || f_hi > f.back() + df + tol)
        fail(ErrorCode::RangeError, "band [" + attr_to_string(f_lo) + ", " + attr_to_string(f_hi) +
                                        "] Hz is outside the frequency coordinate [" + attr_to_string(f.front()) +
                                        ", " + attr_to_string(f.back()) + "] Hz");
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < f.size(); ++j)
        if (f[j] >= f_lo - tol && f[j] <= f_hi + tol)
            keep.push_back(j);
    if (keep.empty())
        fail(ErrorCode::RangeError, "no frequency bin lies inside the requested band");

    DssDataset with_coord = ds;
    if (!ds.axes()[axis].coordinate)
        with_coord.set_coordinate(ds.axes()[axis].name,
                                  CoordinateVec{f, "Hz", CoordSemantics::frequency_hz_absolute});
    auto out = keep.size() == f.size()
                   ? with_coord
                   : slice(with_coord, SliceSelector{}.set(ds.axes()[axis].name, std::move(keep)));
    out.set_attr("center_frequency", (f_lo + f_hi) / 2.0);
    out.set_attr("bandwidth", f_hi - f_lo);
    return out;
}

DssDataset reduce_bandwidth(const DssDataset& ds, double new_bandwidth)
{
    const double bw = required_attr(ds, "bandwidth");
    if (!(new_bandwidth > 0.0) || new_bandwidth > bw * (1.0 + 1e-12))
        fail(ErrorCode::RangeError, "new bandwidth must lie in (0, " + attr_to_string(bw) + "] Hz");
    const double fc = required_attr(ds, "center_frequency");
    switch (ds.domain()) {
    case Domain::frequency:
        return select_band(ds, fc - new_bandwidth / 2.0, fc + new_bandwidth / 2.0);
    case Domain::delay:
        return tf_to_cir(select_band(cir_to_tf(ds), fc - new_bandwidth / 2.0, fc + new_bandwidth / 2.0));
    default:
        fail(ErrorCode::DomainError, "reduce_bandwidth needs a delay- or frequency-domain dataset");
    }
}

DssDataset oversample(const DssDataset& ds, std::size_t factor)
{
    if (factor == 0)
        fail(ErrorCode::InvalidArgument, "oversampling factor must be at least 1");
    if (ds.domain() != Domain::delay && ds.domain() != Domain::time)
        fail(ErrorCode::DomainError, "oversample needs a delay- or time-domain dataset");
    const auto axis = sample_axis(ds);
    if (factor == 1)
        return ds;
    const auto& a = ds.axes()[axis];
    const std::size_t n = a.length;
    const std::size_t m = n * factor;
    const std::size_t rows = ds.size() / n;

    std::vector<Complex> x(ds.size());
    if (ds.is_complex()) {
        const auto src = ds.complex_data();
        std::copy(src.begin(), src.end(), x.begin());
    } else {
        const auto src = ds.real_data();
        std::copy(src.begin(), src.end(), x.begin());
    }
    dft_rows(x.data(), n, rows, -1);
    std::vector<Complex> y(rows * m);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t r = 0; r < rows; ++r) {
        const Complex* X = &x[r * n];
        Complex* Y = &y[r * m];
        for (std::size_t k = 0; k < n; ++k) {
            if (n % 2 == 0 && k == n / 2) {
                Y[k] = X[k] * 0.5 * inv_n;
                Y[m - n / 2] = X[k] * 0.5 * inv_n;
            } else if (2 * k < n) {
                Y[k] = X[k] * inv_n;
            } else {
                Y[m - (n - k)] = X[k] * inv_n;
            }
        }
    }
    dft_rows(y.data(), m, rows, +1);

    TensorData data;
    if (ds.is_complex()) {
        data = std::move(y);
    } else {
        std::vector<double> re(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            re[i] = y[i].real();
        data = std::move(re);
    }
    std::optional<CoordinateVec> coord;
    if (a.coordinate) {
        const double step = delay_step(ds, a.coordinate->values) / static_cast<double>(factor);
        coord = CoordinateVec{std::vector<double>(m), a.coordinate->unit, a.coordinate->semantics};
        for (std::size_t i = 0; i < m; ++i)
            coord->values[i] = a.coordinate->values.front() + static_cast<double>(i) * step;
    }
    auto axes = ds.axes();
    axes[axis].length = m;
    axes[axis].coordinate = std::move(coord);
    DssDataset out = ds;
    out.reshape(std::move(axes), std::move(data));
    if (auto fs = attr_number(ds.attrs(), "sampling_rate"))
        out.set_attr("sampling_rate", *fs * static_cast<double>(factor));
    return out;
}

std::string_view to_string(PulseKind k) noexcept
{
    switch (k) {
    case PulseKind::raised_cosine:
        return "raised_cosine";
    case PulseKind::root_raised_cosine:
        return "root_raised_cosine";
    case PulseKind::rectangular:
        return "rectangular";
    }
    return "?";
}

std::optional<PulseKind> parse_pulse_kind(std::string_view s) noexcept
{
    if (s == "raised_cosine" || s == "rc")
        return PulseKind::raised_cosine;
    if (s == "root_raised_cosine" || s == "rrc")
        return PulseKind::root_raised_cosine;
    if (s == "rectangular" || s == "rect")
        return PulseKind::rectangular;
    return std::nullopt;
}

double pulse_response(const PulseShape& shape, double f)
{
    const double a = std::abs(f);
    const double half = shape.bandwidth / 2.0;
    if (shape.kind == PulseKind::rectangular)
        return a <= half * (1.0 + 1e-12) ? 1.0 : 0.0;
    const double beta = shape.rolloff;
    const double rs = shape.bandwidth / (1.0 + beta);
    const double f1 = (1.0 - beta) * rs / 2.0;
    double rc;
    if (a <= f1)
        rc = 1.0;
    else if (a > half)
        rc = 0.0;
    else
        rc = 0.5 * (1.0 + std::cos(std::numbers::pi / (beta * rs) * (a - f1)));
    return shape.kind == PulseKind::root_raised_cosine ? std::sqrt(rc) : rc;
}

DssDataset apply_pulse_shaping(const DssDataset& ds, const PulseShape& shape)
{
    if (ds.domain() != Domain::frequency)
        fail(ErrorCode::DomainError, "apply_pulse_shaping needs a frequency-domain dataset");
    if (!(shape.rolloff >= 0.0 && shape.rolloff <= 1.0))
        fail(ErrorCode::RangeError, "rolloff must lie in [0, 1]");
    const double bw = required_attr(ds, "bandwidth");
    if (!(shape.bandwidth > 0.0) || shape.bandwidth > bw * (1.0 + 1e-12))
        fail(ErrorCode::RangeError, "pulse bandwidth must lie in (0, " + attr_to_string(bw) + "] Hz");
    const double fc = required_attr(ds, "center_frequency");
    sample_axis(ds);
    const auto f = frequency_grid(ds);
    auto x = complex_copy(ds, "apply_pulse_shaping");
    const std::size_t n = f.size();
    std::vector<double> p(n);
    for (std::size_t j = 0; j < n; ++j)
        p[j] = pulse_response(shape, f[j] - fc);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] *= p[i % n];
    DssDataset out = ds;
    std::copy(x.begin(), x.end(), out.complex_data().begin());
    out.set_attr("pulse_shape", std::string(to_string(shape.kind)));
    out.set_attr("pulse_rolloff", shape.rolloff);
    out.set_attr("pulse_bandwidth", shape.bandwidth);
    return out;
}

DssDataset deembed(const DssDataset& ds, const std::vector<std::string>& component_ids)
{
    if (ds.domain() != Domain::frequency)
        fail(ErrorCode::DomainError, "deembed needs a frequency-domain dataset");
    sample_axis(ds);
    const auto f = frequency_grid(ds);
    auto x = complex_copy(ds, "deembed");
    const std::size_t n = f.size();
    std::string applied;
    for (const auto& id : component_ids) {
        const auto comp = ds.hardware_attributes().find(id);
        if (comp == ds.hardware_attributes().end() || !comp->second.count("frequency_response"))
            fail(ErrorCode::InvalidArgument, "component '" + id + "' has no stored frequency_response");
        const auto& r = comp->second.at("frequency_response");
        if (r.cols < 3 || r.rows < 2)
            fail(ErrorCode::InvalidArgument, "frequency_response of '" + id + "' needs >= 2 rows of f, re, im");
        for (std::size_t i = 1; i < r.rows; ++i)
            if (!(r(i, 0) > r(i - 1, 0)))
                fail(ErrorCode::InvalidArgument, "frequency_response of '" + id + "' is not sorted by frequency");
        const double lo = r(0, 0), hi = r(r.rows - 1, 0);
        const double tol = 1e-9 * std::max(std::abs(lo), std::abs(hi));
        std::vector<double> fcol(r.rows);
        for (std::size_t i = 0; i < r.rows; ++i)
            fcol[i] = r(i, 0);
        std::vector<Complex> resp(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (f[j] < lo - tol || f[j] > hi + tol)
                fail(ErrorCode::RangeError, "frequency_response of '" + id + "' does not cover " +
                                                attr_to_string(f[j]) + " Hz");
            const auto up = std::upper_bound(fcol.begin(), fcol.end(), f[j]);
            const std::size_t i = std::min<std::size_t>(
                static_cast<std::size_t>(std::max<std::ptrdiff_t>(up - fcol.begin() - 1, 0)), r.rows - 2);
            const double t = std::clamp((f[j] - r(i, 0)) / (r(i + 1, 0) - r(i, 0)), 0.0, 1.0);
            resp[j] = Complex(r(i, 1) + t * (r(i + 1, 1) - r(i, 1)), r(i, 2) + t * (r(i + 1, 2) - r(i, 2)));
            if (resp[j] == Complex(0.0, 0.0))
                fail(ErrorCode::RangeError, "frequency_response of '" + id + "' vanishes at " +
                                                attr_to_string(f[j]) + " Hz");
        }
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] /= resp[i % n];
        applied += (applied.empty() ? "" : ",") + id;
    }
    DssDataset out = ds;
    std::copy(x.begin(), x.end(), out.complex_data().begin());
    if (!applied.empty())
        out.set_attr("deembedded", applied);
    return out;
}

} // namespace dss
