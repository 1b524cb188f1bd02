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

#include "dss/storage.hpp"

#include <hdf5.h>
#include <hdf5_hl.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <mutex>
#include <set>
#include <unistd.h>

namespace dss {

namespace fs = std::filesystem;

std::string_view to_string(StorageFormat f) noexcept
{
    return f == StorageFormat::hdf5 ? "hdf5" : "netcdf4";
}

std::optional<StorageFormat> parse_storage_format(std::string_view s) noexcept
{
    if (s == "hdf5" || s == "h5")
        return StorageFormat::hdf5;
    if (s == "netcdf4" || s == "netcdf" || s == "nc")
        return StorageFormat::netcdf4;
    return std::nullopt;
}

namespace {

// The serial HDF5 build is not thread-safe; every library call goes through
// this lock.
std::recursive_mutex& h5_lock()
{
    static std::recursive_mutex m;
    static std::once_flag quiet;
    std::call_once(quiet, [] { H5Eset_auto2(H5E_DEFAULT, nullptr, nullptr); });
    return m;
}

class Hid {
public:
    Hid() = default;
    Hid(hid_t id, herr_t (*close)(hid_t)) : id_(id), close_(close) {}
    Hid(Hid&& o) noexcept : id_(std::exchange(o.id_, H5I_INVALID_HID)), close_(o.close_) {}
    Hid& operator=(Hid&& o) noexcept
    {
        reset();
        id_ = std::exchange(o.id_, H5I_INVALID_HID);
        close_ = o.close_;
        return *this;
    }
    ~Hid() { reset(); }
    operator hid_t() const noexcept { return id_; }
    bool valid() const noexcept { return id_ >= 0; }

private:
    void reset() noexcept
    {
        if (id_ >= 0 && close_)
            close_(id_);
        id_ = H5I_INVALID_HID;
    }
    hid_t id_ = H5I_INVALID_HID;
    herr_t (*close_)(hid_t) = nullptr;
};

constexpr const char* kNcProperties = "_NCProperties";
constexpr const char* kDimLabel = "This is a netCDF dimension but not a netCDF variable.%10d";
constexpr const char* kComplexType = "complex128";
constexpr const char* kPointType = "series_point";

struct PointRec {
    double t;
    double value;
};

Hid string_type()
{
    Hid t(H5Tcopy(H5T_C_S1), H5Tclose);
    H5Tset_size(t, H5T_VARIABLE);
    H5Tset_cset(t, H5T_CSET_UTF8);
    return t;
}

Hid complex_mem_type()
{
    Hid t(H5Tcreate(H5T_COMPOUND, sizeof(Complex)), H5Tclose);
    H5Tinsert(t, "r", 0, H5T_NATIVE_DOUBLE);
    H5Tinsert(t, "i", sizeof(double), H5T_NATIVE_DOUBLE);
    return t;
}

Hid point_mem_type()
{
    Hid t(H5Tcreate(H5T_COMPOUND, sizeof(PointRec)), H5Tclose);
    H5Tinsert(t, "t", offsetof(PointRec, t), H5T_NATIVE_DOUBLE);
    H5Tinsert(t, "value", offsetof(PointRec, value), H5T_NATIVE_DOUBLE);
    return t;
}

// ---------------------------------------------------------------------------
// writing

class Writer {
public:
    Writer(const fs::path& path, StorageFormat fmt) : nc_(fmt == StorageFormat::netcdf4), path_(path.string())
    {
        Hid fcpl(H5Pcreate(H5P_FILE_CREATE), H5Pclose);
        H5Pset_link_creation_order(fcpl, H5P_CRT_ORDER_TRACKED | H5P_CRT_ORDER_INDEXED);
        H5Pset_attr_creation_order(fcpl, H5P_CRT_ORDER_TRACKED | H5P_CRT_ORDER_INDEXED);
        H5Pset_obj_track_times(fcpl, false);
        file_ = Hid(H5Fcreate(path_.c_str(), H5F_ACC_TRUNC, fcpl, H5P_DEFAULT), H5Fclose);
        ok(file_, "cannot create file");
    }

    void close()
    {
        if (H5Fflush(file_, H5F_SCOPE_LOCAL) < 0)
            fail(ErrorCode::IoError, "cannot flush file", path_);
        file_ = Hid();
    }

    void write(const DssDataset& ds)
    {
        if (nc_) {
            const std::string props = "version=2,dss=" + std::string(kLayoutVersion) + ",hdf5=" +
                                      std::to_string(H5_VERS_MAJOR) + "." + std::to_string(H5_VERS_MINOR) + "." +
                                      std::to_string(H5_VERS_RELEASE);
            fixed_string_attr(file_, kNcProperties, props);
        }
        string_attr(file_, "dss_version", std::string(kLayoutVersion));
        string_attr(file_, "dataset_type", ds.dataset_type());
        string_attr(file_, "domain", std::string(to_string(ds.domain())));
        for (const auto& [key, value] : ds.attrs())
            user_attr(file_, key, value);

        complex_t_ = Hid(H5Tcreate(H5T_COMPOUND, 16), H5Tclose);
        H5Tinsert(complex_t_, "r", 0, H5T_IEEE_F64LE);
        H5Tinsert(complex_t_, "i", 8, H5T_IEEE_F64LE);
        ok(H5Tcommit2(file_, kComplexType, complex_t_, H5P_DEFAULT, H5P_DEFAULT, H5P_DEFAULT), "/complex128");
        point_t_ = Hid(H5Tcreate(H5T_COMPOUND, 16), H5Tclose);
        H5Tinsert(point_t_, "t", 0, H5T_IEEE_F64LE);
        H5Tinsert(point_t_, "value", 8, H5T_IEEE_F64LE);
        ok(H5Tcommit2(file_, kPointType, point_t_, H5P_DEFAULT, H5P_DEFAULT, H5P_DEFAULT), "/series_point");

        if (ds.axes().empty())
            write_series(ds);
        else
            write_tensor(ds);
        write_metadata(ds);
        write_hardware(ds);
    }

private:
    void ok(herr_t status, const std::string& what) const
    {
        if (status < 0)
            fail(ErrorCode::IoError, what, path_);
    }
    void ok(const Hid& h, const std::string& what) const
    {
        if (!h.valid())
            fail(ErrorCode::IoError, what, path_);
    }

    Hid group(hid_t loc, const std::string& name)
    {
        Hid gcpl(H5Pcreate(H5P_GROUP_CREATE), H5Pclose);
        H5Pset_link_creation_order(gcpl, H5P_CRT_ORDER_TRACKED | H5P_CRT_ORDER_INDEXED);
        H5Pset_obj_track_times(gcpl, false);
        H5Pset_attr_creation_order(gcpl, H5P_CRT_ORDER_TRACKED | H5P_CRT_ORDER_INDEXED);
        Hid g(H5Gcreate2(loc, name.c_str(), H5P_DEFAULT, gcpl, H5P_DEFAULT), H5Gclose);
        ok(g, "cannot create group " + name);
        return g;
    }

    Hid dcpl()
    {
        Hid p(H5Pcreate(H5P_DATASET_CREATE), H5Pclose);
        H5Pset_obj_track_times(p, false);
        H5Pset_attr_creation_order(p, H5P_CRT_ORDER_TRACKED | H5P_CRT_ORDER_INDEXED);
        return p;
    }

    Hid dimension(hid_t loc, const std::string& name, hsize_t len)
    {
        Hid space(H5Screate_simple(1, &len, nullptr), H5Sclose);
        Hid plist = dcpl();
        Hid d(H5Dcreate2(loc, name.c_str(), H5T_IEEE_F32BE, space, H5P_DEFAULT, plist, H5P_DEFAULT), H5Dclose);
        ok(d, "cannot create dimension " + name);
        char label[96];
        std::snprintf(label, sizeof label, kDimLabel, static_cast<int>(len));
        ok(H5DSset_scale(d, label), "cannot mark dimension " + name);
        if (nc_) {
            const int id = next_dimid_++;
            Hid s(H5Screate(H5S_SCALAR), H5Sclose);
            Hid a(H5Acreate2(d, "_Netcdf4Dimid", H5T_STD_I32LE, s, H5P_DEFAULT, H5P_DEFAULT), H5Aclose);
            ok(H5Awrite(a, H5T_NATIVE_INT, &id), "cannot write _Netcdf4Dimid");
        }
        return d;
    }

    Hid variable(hid_t loc, const std::string& name, hid_t type, const std::vector<hid_t>& dims,
                 const std::vector<hsize_t>& shape, bool chunked = false)
    {
        Hid space(H5Screate_simple(static_cast<int>(shape.size()), shape.data(), nullptr), H5Sclose);
        Hid plist = dcpl();
        std::size_t n = 1;
        for (auto s : shape)
            n *= s;
        if (chunked && n > 0) {
            std::vector<hsize_t> chunk(shape.size(), 1);
            chunk.back() = shape.back();
            H5Pset_chunk(plist, static_cast<int>(chunk.size()), chunk.data());
            H5Pset_deflate(plist, 4);
        }
        Hid d(H5Dcreate2(loc, name.c_str(), type, space, H5P_DEFAULT, plist, H5P_DEFAULT), H5Dclose);
        ok(d, "cannot create variable " + name);
        for (std::size_t i = 0; i < dims.size(); ++i)
            ok(H5DSattach_scale(d, dims[i], static_cast<unsigned>(i)), "cannot attach dimension to " + name);
        return d;
    }

    void string_attr(hid_t obj, const std::string& name, const std::string& value)
    {
        Hid t = string_type();
        Hid s(H5Screate(H5S_SCALAR), H5Sclose);
        Hid a(H5Acreate2(obj, name.c_str(), t, s, H5P_DEFAULT, H5P_DEFAULT), H5Aclose);
        const char* p = value.c_str();
        ok(a, "cannot create attribute " + name);
        ok(H5Awrite(a, t, &p), "cannot write attribute " + name);
    }

    void string_array_attr(hid_t obj, const std::string& name, const std::vector<std::string>& values)
    {
        Hid t = string_type();
        const hsize_t n = values.size();
        Hid s(H5Screate_simple(1, &n, nullptr), H5Sclose);
        Hid a(H5Acreate2(obj, name.c_str(), t, s, H5P_DEFAULT, H5P_DEFAULT), H5Aclose);
        std::vector<const char*> ptrs;
        for (const auto& v : values)
            ptrs.push_back(v.c_str());
        ok(a, "cannot create attribute " + name);
        ok(H5Awrite(a, t, ptrs.data()), "cannot write attribute " + name);
    }

    void fixed_string_attr(hid_t obj, const std::string& name, const std::string& value)
    {
        Hid t(H5Tcopy(H5T_C_S1), H5Tclose);
        H5Tset_size(t, value.size());
        H5Tset_strpad(t, H5T_STR_NULLTERM);
        Hid s(H5Screate(H5S_SCALAR), H5Sclose);
        Hid a(H5Acreate2(obj, name.c_str(), t, s, H5P_DEFAULT, H5P_DEFAULT), H5Aclose);
        ok(a, "cannot create attribute " + name);
        ok(H5Awrite(a, t, value.data()), "cannot write attribute " + name);
    }

    void user_attr(hid_t obj, const std::string& key, const AttrValue& value)
    {
        if (const auto* s = std::get_if<std::string>(&value)) {
            string_attr(obj, key, *s);
            return;
        }
        Hid sp(H5Screate(H5S_SCALAR), H5Sclose);
        if (const auto* i = std::get_if<std::int64_t>(&value)) {
            Hid a(H5Acreate2(obj, key.c_str(), H5T_STD_I64LE, sp, H5P_DEFAULT, H5P_DEFAULT), H5Aclose);
            ok(a, "cannot create attribute " + key);
            ok(H5Awrite(a, H5T_NATIVE_INT64, i), "cannot write attribute " + key);
        } else {
            const double d = std::get<double>(value);
            Hid a(H5Acreate2(obj, key.c_str(), H5T_IEEE_F64LE, sp, H5P_DEFAULT, H5P_DEFAULT), H5Aclose);
            ok(a, "cannot create attribute " + key);
            ok(H5Awrite(a, H5T_NATIVE_DOUBLE, &d), "cannot write attribute " + key);
        }
    }

    void write_tensor(const DssDataset& ds)
    {
        std::vector<Hid> dims;
        std::vector<hid_t> dim_ids;
        std::vector<hsize_t> shape;
        std::vector<std::string> names, kinds;
        for (const auto& a : ds.axes()) {
            if (a.name == "data" || a.name == "coords" || a.name == "metadata" || a.name == "hardware_attributes" ||
                a.name == "simulation" || a.name == kComplexType || a.name == kPointType)
                fail(ErrorCode::UnsupportedFeature, "axis name '" + a.name + "' collides with the file layout");
            dims.push_back(dimension(file_, a.name, a.length));
            dim_ids.push_back(dims.back());
            shape.push_back(a.length);
            names.push_back(a.name);
            kinds.push_back(std::string(to_string(a.kind)));
        }
        {
            const bool cx = ds.is_complex();
            Hid d = variable(file_, "data", cx ? hid_t(complex_t_) : H5T_IEEE_F64LE, dim_ids, shape, true);
            string_array_attr(d, "axes", names);
            string_array_attr(d, "axis_kinds", kinds);
            if (cx) {
                Hid mt = complex_mem_type();
                ok(H5Dwrite(d, mt, H5S_ALL, H5S_ALL, H5P_DEFAULT, ds.complex_data().data()), "cannot write /data");
            } else {
                ok(H5Dwrite(d, H5T_NATIVE_DOUBLE, H5S_ALL, H5S_ALL, H5P_DEFAULT, ds.real_data().data()),
                   "cannot write /data");
            }
        }

        bool any_coords = !ds.channel_coords().empty();
        for (const auto& a : ds.axes())
            any_coords = any_coords || a.coordinate.has_value();
        if (!any_coords)
            return;
        Hid coords = group(file_, "coords");
        Hid xyz, wxyz;
        for (const auto& [axis, cc] : ds.channel_coords()) {
            if (!xyz.valid())
                xyz = dimension(coords, "xyz", 3);
            if (cc.orientations && !wxyz.valid())
                wxyz = dimension(coords, "wxyz", 4);
        }
        for (std::size_t i = 0; i < ds.axes().size(); ++i) {
            const auto& a = ds.axes()[i];
            if (a.name == "xyz" || a.name == "wxyz")
                fail(ErrorCode::UnsupportedFeature, "axis name '" + a.name + "' is reserved by the coordinate group");
            if (a.coordinate) {
                Hid v = variable(coords, a.name, H5T_IEEE_F64LE, {dim_ids[i]}, {a.length});
                ok(H5Dwrite(v, H5T_NATIVE_DOUBLE, H5S_ALL, H5S_ALL, H5P_DEFAULT, a.coordinate->values.data()),
                   "cannot write /coords/" + a.name);
                string_attr(v, "unit", a.coordinate->unit);
                string_attr(v, "semantics", std::string(to_string(a.coordinate->semantics)));
            }
            const auto it = ds.channel_coords().find(a.name);
            if (it == ds.channel_coords().end())
                continue;
            Hid p = variable(coords, a.name + "_positions", H5T_IEEE_F64LE, {dim_ids[i], xyz}, {a.length, 3});
            ok(H5Dwrite(p, H5T_NATIVE_DOUBLE, H5S_ALL, H5S_ALL, H5P_DEFAULT, it->second.positions.values.data()),
               "cannot write positions");
            string_attr(p, "unit", "m");
            if (it->second.orientations) {
                Hid o = variable(coords, a.name + "_orientations", H5T_IEEE_F64LE, {dim_ids[i], wxyz}, {a.length, 4});
                ok(H5Dwrite(o, H5T_NATIVE_DOUBLE, H5S_ALL, H5S_ALL, H5P_DEFAULT,
                            it->second.orientations->values.data()),
                   "cannot write orientations");
                string_attr(o, "unit", "1");
                string_attr(o, "convention", "unit quaternion w,x,y,z");
            }
        }
    }

    void write_series(const DssDataset& ds)
    {
        Hid sim = group(file_, "simulation");
        std::map<std::int64_t, Hid> runs;
        for (const auto& s : ds.series()) {
            if (s.metric.find("__") != std::string::npos)
                fail(ErrorCode::UnsupportedFeature, "metric name '" + s.metric + "' must not contain '__'");
            auto it = runs.find(s.run);
            if (it == runs.end())
                it = runs.emplace(s.run, group(sim, "run" + std::to_string(s.run))).first;
            Hid dim = dimension(it->second, s.metric + "__n", s.points.size());
            Hid v = variable(it->second, s.metric, point_t_, {dim}, {s.points.size()});
            if (!s.points.empty()) {
                std::vector<PointRec> recs;
                for (const auto& p : s.points)
                    recs.push_back({p.t, p.value});
                Hid mt = point_mem_type();
                ok(H5Dwrite(v, mt, H5S_ALL, H5S_ALL, H5P_DEFAULT, recs.data()), "cannot write series " + s.metric);
            }
            string_attr(v, "unit", s.unit);
        }
    }

    void write_metadata(const DssDataset& ds)
    {
        if (ds.metadata().empty())
            return;
        Hid meta = group(file_, "metadata");
        std::map<std::string, Hid> kinds;
        Hid t = string_type();
        for (const auto& doc : ds.metadata()) {
            auto it = kinds.find(doc.kind);
            if (it == kinds.end())
                it = kinds.emplace(doc.kind, group(meta, doc.kind)).first;
            Hid s(H5Screate(H5S_SCALAR), H5Sclose);
            Hid plist = dcpl();
            Hid d(H5Dcreate2(it->second, doc.id.c_str(), t, s, H5P_DEFAULT, plist, H5P_DEFAULT), H5Dclose);
            ok(d, "cannot create /metadata/" + doc.kind + "/" + doc.id);
            const char* p = doc.text.c_str();
            ok(H5Dwrite(d, t, H5S_ALL, H5S_ALL, H5P_DEFAULT, &p), "cannot write metadata text");
        }
    }

    void write_hardware(const DssDataset& ds)
    {
        if (ds.hardware_attributes().empty())
            return;
        Hid hw = group(file_, "hardware_attributes");
        for (const auto& [comp, attrs] : ds.hardware_attributes()) {
            Hid g = group(hw, comp);
            for (const auto& [name, m] : attrs) {
                if (name.find("__") != std::string::npos)
                    fail(ErrorCode::UnsupportedFeature, "attribute name '" + name + "' must not contain '__'");
                Hid r = dimension(g, name + "__rows", m.rows);
                Hid c = dimension(g, name + "__cols", m.cols);
                Hid v = variable(g, name, H5T_IEEE_F64LE, {r, c}, {m.rows, m.cols});
                if (!m.values.empty())
                    ok(H5Dwrite(v, H5T_NATIVE_DOUBLE, H5S_ALL, H5S_ALL, H5P_DEFAULT, m.values.data()),
                       "cannot write hardware attribute " + name);
            }
        }
    }

    bool nc_;
    std::string path_;
    Hid file_;
    Hid complex_t_, point_t_;
    int next_dimid_ = 0;
};

// ---------------------------------------------------------------------------
// reading

[[noreturn]] void bad(const std::string& object, const std::string& why)
{
    fail(ErrorCode::FormatError, why, object);
}

bool exists(hid_t loc, const std::string& path)
{
    // H5Lexists needs every intermediate link to exist.
    std::size_t pos = 0;
    while (true) {
        pos = path.find('/', pos + 1);
        const auto prefix = path.substr(0, pos);
        if (!prefix.empty() && prefix != "/" && H5Lexists(loc, prefix.c_str(), H5P_DEFAULT) <= 0)
            return false;
        if (pos == std::string::npos)
            return true;
    }
}

std::vector<std::string> children(hid_t group)
{
    std::vector<std::string> names;
    auto cb = [](hid_t, const char* name, const H5L_info_t*, void* data) -> herr_t {
        static_cast<std::vector<std::string>*>(data)->push_back(name);
        return 0;
    };
    H5Literate(group, H5_INDEX_NAME, H5_ITER_INC, nullptr, cb, &names);
    return names;
}

H5I_type_t object_type(hid_t loc, const std::string& name)
{
    Hid o(H5Oopen(loc, name.c_str(), H5P_DEFAULT), H5Oclose);
    return o.valid() ? H5Iget_type(o) : H5I_BADID;
}

std::string read_string_attr(hid_t obj, const std::string& name, const std::string& where)
{
    Hid a(H5Aopen(obj, name.c_str(), H5P_DEFAULT), H5Aclose);
    if (!a.valid())
        bad(where, "missing attribute '" + name + "'");
    Hid ft(H5Aget_type(a), H5Tclose);
    if (H5Tget_class(ft) != H5T_STRING)
        bad(where, "attribute '" + name + "' is not a string");
    Hid sp(H5Aget_space(a), H5Sclose);
    if (H5Sget_simple_extent_npoints(sp) != 1)
        bad(where, "attribute '" + name + "' is not a single string");
    if (H5Tis_variable_str(ft) > 0) {
        Hid mt = string_type();
        char* p = nullptr;
        if (H5Aread(a, mt, &p) < 0)
            bad(where, "cannot read attribute '" + name + "'");
        std::string out = p ? p : "";
        H5free_memory(p);
        return out;
    }
    const std::size_t n = H5Tget_size(ft);
    std::string buf(n, '\0');
    Hid mt(H5Tcopy(H5T_C_S1), H5Tclose);
    H5Tset_size(mt, n);
    if (H5Aread(a, mt, buf.data()) < 0)
        bad(where, "cannot read attribute '" + name + "'");
    if (auto z = buf.find('\0'); z != std::string::npos)
        buf.resize(z);
    return buf;
}

std::vector<std::string> read_string_array_attr(hid_t obj, const std::string& name, const std::string& where)
{
    Hid a(H5Aopen(obj, name.c_str(), H5P_DEFAULT), H5Aclose);
    if (!a.valid())
        bad(where, "missing attribute '" + name + "'");
    Hid ft(H5Aget_type(a), H5Tclose);
    if (H5Tget_class(ft) != H5T_STRING || H5Tis_variable_str(ft) <= 0)
        bad(where, "attribute '" + name + "' is not a string array");
    Hid sp(H5Aget_space(a), H5Sclose);
    const auto n = H5Sget_simple_extent_npoints(sp);
    std::vector<char*> ptrs(static_cast<std::size_t>(std::max<hssize_t>(n, 0)), nullptr);
    Hid mt = string_type();
    if (n > 0 && H5Aread(a, mt, ptrs.data()) < 0)
        bad(where, "cannot read attribute '" + name + "'");
    std::vector<std::string> out;
    for (auto* p : ptrs)
        out.emplace_back(p ? p : "");
    if (n > 0)
        H5Dvlen_reclaim(mt, sp, H5P_DEFAULT, ptrs.data());
    return out;
}

std::optional<AttrValue> read_user_attr(hid_t obj, const std::string& name)
{
    Hid a(H5Aopen(obj, name.c_str(), H5P_DEFAULT), H5Aclose);
    Hid ft(H5Aget_type(a), H5Tclose);
    Hid sp(H5Aget_space(a), H5Sclose);
    if (H5Sget_simple_extent_npoints(sp) != 1)
        bad("/" + name, "attribute is not a scalar");
    switch (H5Tget_class(ft)) {
    case H5T_INTEGER: {
        std::int64_t v = 0;
        if (H5Aread(a, H5T_NATIVE_INT64, &v) < 0)
            bad("/" + name, "cannot read attribute");
        return v;
    }
    case H5T_FLOAT: {
        double v = 0;
        if (H5Aread(a, H5T_NATIVE_DOUBLE, &v) < 0)
            bad("/" + name, "cannot read attribute");
        return v;
    }
    case H5T_STRING:
        return read_string_attr(obj, name, "/" + name);
    default:
        bad("/" + name, "attribute has an unsupported type");
    }
}

std::vector<hsize_t> extent(hid_t dset)
{
    Hid sp(H5Dget_space(dset), H5Sclose);
    const int rank = H5Sget_simple_extent_ndims(sp);
    std::vector<hsize_t> dims(static_cast<std::size_t>(std::max(rank, 0)));
    if (rank > 0)
        H5Sget_simple_extent_dims(sp, dims.data(), nullptr);
    return dims;
}

Hid open_dataset(hid_t loc, const std::string& path)
{
    if (!exists(loc, path))
        bad(path, "missing object");
    Hid d(H5Dopen2(loc, path.c_str(), H5P_DEFAULT), H5Dclose);
    if (!d.valid())
        bad(path, "object is not a dataset");
    return d;
}

std::vector<double> read_doubles(hid_t loc, const std::string& path, const std::vector<hsize_t>& shape)
{
    Hid d = open_dataset(loc, path);
    if (extent(d) != shape)
        bad(path, "unexpected shape");
    Hid ft(H5Dget_type(d), H5Tclose);
    const auto cls = H5Tget_class(ft);
    if (cls != H5T_FLOAT && cls != H5T_INTEGER)
        bad(path, "expected numeric values");
    std::size_t n = 1;
    for (auto s : shape)
        n *= s;
    std::vector<double> v(n);
    if (n > 0 && H5Dread(d, H5T_NATIVE_DOUBLE, H5S_ALL, H5S_ALL, H5P_DEFAULT, v.data()) < 0)
        bad(path, "cannot read values");
    return v;
}

Matrix make_matrix(hsize_t rows, hsize_t cols, std::vector<double> values)
{
    return Matrix{static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(values)};
}

bool is_compound_pair(hid_t t, const char* a, const char* b)
{
    if (H5Tget_class(t) != H5T_COMPOUND || H5Tget_nmembers(t) != 2)
        return false;
    return H5Tget_member_index(t, a) >= 0 && H5Tget_member_index(t, b) >= 0;
}

class Reader {
public:
    explicit Reader(const fs::path& path) : path_(path.string())
    {
        file_ = Hid(H5Fopen(path_.c_str(), H5F_ACC_RDONLY, H5P_DEFAULT), H5Fclose);
        if (!file_.valid())
            fail(ErrorCode::FormatError, "not a readable HDF5/NetCDF-4 file", path_);
    }

    StorageFormat format() const
    {
        return H5Aexists(file_, kNcProperties) > 0 ? StorageFormat::netcdf4 : StorageFormat::hdf5;
    }

    DssDataset read()
    {
        const auto version = read_string_attr(file_, "dss_version", "/dss_version");
        if (version != kLayoutVersion)
            fail(ErrorCode::VersionError, "dss_version '" + version + "' is not supported (expected " +
                                              std::string(kLayoutVersion) + ")",
                 "/dss_version");
        DssDataset::Parts p;
        p.dataset_type = read_string_attr(file_, "dataset_type", "/dataset_type");
        const auto domain = read_string_attr(file_, "domain", "/domain");
        const auto dom = parse_domain(domain);
        if (!dom)
            bad("/domain", "unknown domain '" + domain + "'");
        p.domain = *dom;

        std::vector<std::string> attr_names;
        auto cb = [](hid_t, const char* name, const H5A_info_t*, void* data) -> herr_t {
            static_cast<std::vector<std::string>*>(data)->push_back(name);
            return 0;
        };
        H5Aiterate2(file_, H5_INDEX_NAME, H5_ITER_INC, nullptr, cb, &attr_names);
        for (const auto& n : attr_names)
            if (!is_reserved_attr(n))
                p.attrs[n] = *read_user_attr(file_, n);

        if (exists(file_, "/data"))
            read_tensor(p);
        else if (exists(file_, "/simulation"))
            read_series(p);
        else
            bad("/data", "missing object");
        read_metadata(p);
        read_hardware(p);
        try {
            return DssDataset::from_parts(std::move(p));
        } catch (const Error& e) {
            bad("/", "stored dataset is inconsistent: " + e.detail());
        }
    }

private:
    void read_tensor(DssDataset::Parts& p)
    {
        Hid d = open_dataset(file_, "/data");
        const auto names = read_string_array_attr(d, "axes", "/data");
        const auto kinds = read_string_array_attr(d, "axis_kinds", "/data");
        const auto shape = extent(d);
        if (names.size() != shape.size() || kinds.size() != shape.size())
            bad("/data", "axes attribute does not match the tensor rank");
        std::size_t n = 1;
        for (std::size_t i = 0; i < shape.size(); ++i) {
            const auto kind = parse_axis_kind(kinds[i]);
            if (!kind)
                bad("/data", "unknown axis kind '" + kinds[i] + "'");
            if (shape[i] == 0)
                bad("/data", "axis '" + names[i] + "' has length 0");
            p.axes.push_back(AxisDef{names[i], *kind, static_cast<std::size_t>(shape[i]), std::nullopt});
            n *= shape[i];
        }
        Hid ft(H5Dget_type(d), H5Tclose);
        if (is_compound_pair(ft, "r", "i")) {
            std::vector<Complex> v(n);
            Hid mt = complex_mem_type();
            if (H5Dread(d, mt, H5S_ALL, H5S_ALL, H5P_DEFAULT, v.data()) < 0)
                bad("/data", "cannot read tensor");
            p.data = std::move(v);
        } else if (H5Tget_class(ft) == H5T_FLOAT) {
            std::vector<double> v(n);
            if (H5Dread(d, H5T_NATIVE_DOUBLE, H5S_ALL, H5S_ALL, H5P_DEFAULT, v.data()) < 0)
                bad("/data", "cannot read tensor");
            p.data = std::move(v);
        } else {
            bad("/data", "tensor must hold float64 or {r,i} compound values");
        }

        for (auto& a : p.axes) {
            const std::string base = "/coords/" + a.name;
            if (exists(file_, base)) {
                auto values = read_doubles(file_, base, {a.length});
                Hid v = open_dataset(file_, base);
                const auto sem_text = read_string_attr(v, "semantics", base);
                const auto sem = parse_coord_semantics(sem_text);
                if (!sem)
                    bad(base, "unknown coordinate semantics '" + sem_text + "'");
                a.coordinate = CoordinateVec{std::move(values), read_string_attr(v, "unit", base), *sem};
            }
            if (exists(file_, base + "_positions")) {
                ChannelCoords cc;
                cc.positions = Matrix{a.length, 3, read_doubles(file_, base + "_positions", {a.length, 3})};
                if (exists(file_, base + "_orientations"))
                    cc.orientations =
                        Matrix{a.length, 4, read_doubles(file_, base + "_orientations", {a.length, 4})};
                p.channel_coords[a.name] = std::move(cc);
            }
        }
    }

    void read_series(DssDataset::Parts& p)
    {
        p.data = std::vector<double>{};
        Hid sim(H5Gopen2(file_, "/simulation", H5P_DEFAULT), H5Gclose);
        if (!sim.valid())
            bad("/simulation", "not a group");
        for (const auto& run_name : children(sim)) {
            const std::string gpath = "/simulation/" + run_name;
            if (run_name.size() < 4 || run_name.compare(0, 3, "run") != 0 ||
                run_name.find_first_not_of("0123456789", 3) != std::string::npos)
                bad(gpath, "expected a run<k> group");
            const std::int64_t run = std::stoll(run_name.substr(3));
            Hid g(H5Gopen2(sim, run_name.c_str(), H5P_DEFAULT), H5Gclose);
            if (!g.valid())
                bad(gpath, "not a group");
            for (const auto& metric : children(g)) {
                const std::string vpath = gpath + "/" + metric;
                Hid d(H5Dopen2(g, metric.c_str(), H5P_DEFAULT), H5Dclose);
                if (!d.valid())
                    bad(vpath, "expected a dataset");
                if (H5DSis_scale(d) > 0)
                    continue;
                Hid ft(H5Dget_type(d), H5Tclose);
                if (!is_compound_pair(ft, "t", "value"))
                    bad(vpath, "series must hold {t,value} compound records");
                const auto shape = extent(d);
                if (shape.size() != 1)
                    bad(vpath, "series must be one-dimensional");
                std::vector<PointRec> recs(shape[0]);
                Hid mt = point_mem_type();
                if (!recs.empty() && H5Dread(d, mt, H5S_ALL, H5S_ALL, H5P_DEFAULT, recs.data()) < 0)
                    bad(vpath, "cannot read series");
                RaggedSeries s;
                s.run = run;
                s.metric = metric;
                s.unit = read_string_attr(d, "unit", vpath);
                for (const auto& r : recs)
                    s.points.push_back({r.t, r.value});
                try {
                    check_series(s);
                } catch (const Error& e) {
                    bad(vpath, e.detail());
                }
                p.series.push_back(std::move(s));
            }
        }
    }

    void read_metadata(DssDataset::Parts& p)
    {
        if (!exists(file_, "/metadata"))
            return;
        Hid meta(H5Gopen2(file_, "/metadata", H5P_DEFAULT), H5Gclose);
        if (!meta.valid())
            bad("/metadata", "not a group");
        Hid st = string_type();
        for (const auto& kind : children(meta)) {
            Hid g(H5Gopen2(meta, kind.c_str(), H5P_DEFAULT), H5Gclose);
            if (!g.valid())
                bad("/metadata/" + kind, "not a group");
            for (const auto& id : children(g)) {
                const auto path = "/metadata/" + kind + "/" + id;
                Hid d(H5Dopen2(g, id.c_str(), H5P_DEFAULT), H5Dclose);
                if (!d.valid())
                    bad(path, "expected a string dataset");
                Hid ft(H5Dget_type(d), H5Tclose);
                if (H5Tget_class(ft) != H5T_STRING || H5Tis_variable_str(ft) <= 0 || !extent(d).empty())
                    bad(path, "expected a scalar variable-length string");
                char* text = nullptr;
                if (H5Dread(d, st, H5S_ALL, H5S_ALL, H5P_DEFAULT, &text) < 0)
                    bad(path, "cannot read text");
                p.metadata.push_back(EmbeddedDocument{kind, id, text ? text : ""});
                H5free_memory(text);
            }
        }
    }

    void read_hardware(DssDataset::Parts& p)
    {
        if (!exists(file_, "/hardware_attributes"))
            return;
        Hid hw(H5Gopen2(file_, "/hardware_attributes", H5P_DEFAULT), H5Gclose);
        if (!hw.valid())
            bad("/hardware_attributes", "not a group");
        for (const auto& comp : children(hw)) {
            Hid g(H5Gopen2(hw, comp.c_str(), H5P_DEFAULT), H5Gclose);
            if (!g.valid())
                bad("/hardware_attributes/" + comp, "not a group");
            for (const auto& name : children(g)) {
                const auto path = "/hardware_attributes/" + comp + "/" + name;
                Hid d(H5Dopen2(g, name.c_str(), H5P_DEFAULT), H5Dclose);
                if (!d.valid())
                    bad(path, "expected a dataset");
                if (H5DSis_scale(d) > 0)
                    continue;
                const auto shape = extent(d);
                if (shape.size() != 2)
                    bad(path, "hardware attributes must be two-dimensional");
                p.hardware_attributes[comp][name] = make_matrix(shape[0], shape[1], read_doubles(g, name, shape));
            }
        }
    }

    std::string path_;
    Hid file_;
};

std::string temp_name(const fs::path& dst)
{
    static std::atomic<unsigned> counter{0};
    return "." + dst.filename().string() + ".tmp" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
}

} // namespace

StorageFormat sniff_format(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in || fs::is_directory(path))
        fail(ErrorCode::IoError, "cannot read file", path.string());
    char magic[8] = {};
    in.read(magic, sizeof magic);
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got >= 4 && std::memcmp(magic, "CDF", 3) == 0 && (magic[3] == 1 || magic[3] == 2 || magic[3] == 5))
        fail(ErrorCode::VersionError, "classic NetCDF files are not supported; NetCDF-4 is required", path.string());
    if (got < 8 || std::memcmp(magic, "\x89HDF\r\n\x1a\n", 8) != 0)
        fail(ErrorCode::FormatError, "not an HDF5 or NetCDF-4 file", path.string());
    std::lock_guard lock(h5_lock());
    return Reader(path).format();
}

void save(const DssDataset& ds, const fs::path& path, StorageFormat format, const DatasetTypeRegistry& types)
{
    if (const auto* prof = types.find(ds.dataset_type()); prof && !prof->ragged_series && !ds.series().empty())
        fail(ErrorCode::UnsupportedFeature, "'" + ds.dataset_type() + "' does not store ragged series");
    if (!ds.axes().empty() && !ds.series().empty())
        fail(ErrorCode::UnsupportedFeature, "a file holds either a dense tensor or ragged series, not both");
    validate_profile(ds, types);

    const auto parent = path.parent_path().empty() ? fs::path(".") : path.parent_path();
    std::error_code ec;
    if (!fs::is_directory(parent, ec))
        fail(ErrorCode::IoError, "directory does not exist", parent.string());
    if (fs::is_directory(path, ec))
        fail(ErrorCode::IoError, "destination is a directory", path.string());
    const auto tmp = parent / temp_name(path);
    try {
        std::lock_guard lock(h5_lock());
        Writer w(tmp, format);
        w.write(ds);
        w.close();
    } catch (...) {
        fs::remove(tmp, ec);
        throw;
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(ErrorCode::IoError, "cannot move file into place", path.string());
    }
}

OpenedDataset open(const fs::path& path, const DatasetTypeRegistry& types)
{
    const auto fmt = sniff_format(path);
    OpenedDataset out;
    out.format = fmt;
    {
        std::lock_guard lock(h5_lock());
        out.dataset = Reader(path).read();
    }
    try {
        validate_profile(out.dataset, types);
    } catch (const Error& e) {
        fail(ErrorCode::FormatError, e.detail(), "/data");
    }
    out.report = validate_embedded(out.dataset);
    return out;
}

void convert(const fs::path& src, const fs::path& dst, StorageFormat format, const DatasetTypeRegistry& types)
{
    const auto opened = open(src, types);
    save(opened.dataset, dst, format, types);
}

Matrix read_matrix_object(const fs::path& file, const std::string& object)
{
    sniff_format(file);
    std::lock_guard lock(h5_lock());
    Hid f(H5Fopen(file.string().c_str(), H5F_ACC_RDONLY, H5P_DEFAULT), H5Fclose);
    if (!f.valid())
        fail(ErrorCode::IoError, "cannot open file", file.string());
    if (!exists(f, object))
        fail(ErrorCode::IoError, "no object '" + object + "' in file", file.string());
    Hid d(H5Dopen2(f, object.c_str(), H5P_DEFAULT), H5Dclose);
    if (!d.valid())
        fail(ErrorCode::IoError, "'" + object + "' is not a dataset", file.string());
    const auto shape = extent(d);
    if (shape.empty() || shape.size() > 2)
        fail(ErrorCode::ShapeError, "'" + object + "' must be one- or two-dimensional", file.string());
    try {
        auto values = read_doubles(f, object, shape);
        return make_matrix(shape[0], shape.size() == 2 ? shape[1] : 1, std::move(values));
    } catch (const Error& e) {
        fail(ErrorCode::IoError, e.detail(), file.string());
    }
}

bool has_object(const fs::path& file, const std::string& object)
{
    try {
        sniff_format(file);
    } catch (const Error&) {
        return false;
    }
    std::lock_guard lock(h5_lock());
    Hid f(H5Fopen(file.string().c_str(), H5F_ACC_RDONLY, H5P_DEFAULT), H5Fclose);
    return f.valid() && exists(f, object) && object_type(f, object) == H5I_DATASET;
}

FileAccess dataset_file_access()
{
    FileAccess fa = default_file_access();
    auto base = fa.load_matrix;
    fa.load_matrix = [base](const fs::path& path, const std::string& object) {
        return object.empty() ? base(path, object) : read_matrix_object(path, object);
    };
    fa.has_object = [](const fs::path& path, const std::string& object) { return has_object(path, object); };
    return fa;
}

void embed_documents(DssDataset& ds, const Registry& registry)
{
    for (const auto& doc : registry.documents())
        ds.add_metadata(EmbeddedDocument{std::string(to_string(doc->kind)), doc->id,
                                          doc->source_text.empty() ? serialize(*doc) : doc->source_text});
}

Registry embedded_registry(const DssDataset& ds)
{
    Registry reg;
    std::set<std::string> seen;
    for (const auto& doc : ds.metadata()) {
        if (!seen.insert(doc.text).second)
            continue;
        reg.add_text(doc.text, "/metadata/" + doc.kind + "/" + doc.id, parse_doc_kind(doc.kind));
    }
    return reg;
}

ValidationReport validate_embedded(const DssDataset& ds)
{
    FileAccess fa = default_file_access();
    fa.check_files = false;
    return validate_all(embedded_registry(ds), fa);
}

} // namespace dss
