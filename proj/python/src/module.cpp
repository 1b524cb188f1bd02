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

// Python module: read-only dataset access, plots and validation. Every call
// delegates to the C++ library.

#include "dss/analysis.hpp"
#include "dss/cli.hpp"
#include "dss/model.hpp"
#include "dss/storage.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

namespace py = pybind11;

namespace {

class BoundDataset {
public:
    explicit BoundDataset(dss::OpenedDataset opened)
        : opened_(std::make_shared<const dss::OpenedDataset>(std::move(opened)))
    {
    }

    const dss::DssDataset& core() const { return opened_->dataset; }
    const dss::OpenedDataset& opened() const { return *opened_; }

private:
    std::shared_ptr<const dss::OpenedDataset> opened_;
};

template <class T>
py::array readonly_view(const T* ptr, const std::vector<std::size_t>& shape, py::handle owner)
{
    std::vector<py::ssize_t> dims(shape.begin(), shape.end());
    py::array a(py::dtype::of<T>(), dims, {}, ptr, owner);
    py::detail::array_proxy(a.ptr())->flags &= ~py::detail::npy_api::NPY_ARRAY_WRITEABLE_;
    return a;
}

py::array copy_vector(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::object attr_value(const dss::AttrValue& v)
{
    return std::visit([](const auto& x) -> py::object { return py::cast(x); }, v);
}

py::dict plot_to_py(const dss::PlotSeries& s)
{
    py::list lines;
    for (const auto& l : s.series) {
        py::dict d;
        d["label"] = l.label;
        d["values"] = copy_vector(l.values);
        d["imag"] = l.imag.empty() ? py::object(py::none()) : py::object(copy_vector(l.imag));
        lines.append(d);
    }
    py::dict x;
    x["label"] = s.x.label;
    x["unit"] = s.x.unit;
    x["values"] = copy_vector(s.x.values);
    py::dict out;
    out["title"] = s.title;
    out["kind"] = std::string(dss::to_string(s.kind));
    out["x"] = x;
    out["series"] = lines;
    return out;
}

dss::SliceSelector selector_from_kwargs(const py::kwargs& kw)
{
    dss::SliceSelector sel;
    for (const auto& [key, value] : kw) {
        const auto axis = dss::canonical_axis_name(py::cast<std::string>(key));
        if (py::isinstance<py::int_>(value) && !py::isinstance<py::bool_>(value)) {
            const auto i = py::cast<long long>(value);
            if (i < 0)
                dss::fail(dss::ErrorCode::IndexError, "negative index " + std::to_string(i), axis);
            sel.set(axis, static_cast<std::size_t>(i));
        } else if (py::isinstance<py::sequence>(value) && !py::isinstance<py::str>(value)) {
            std::vector<std::size_t> idx;
            for (const auto& item : py::cast<py::sequence>(value)) {
                const auto i = py::cast<long long>(item);
                if (i < 0)
                    dss::fail(dss::ErrorCode::IndexError, "negative index " + std::to_string(i), axis);
                idx.push_back(static_cast<std::size_t>(i));
            }
            sel.set(axis, std::move(idx));
        } else if (value.is_none()) {
            sel.set(axis, dss::SelectAll{});
        } else {
            dss::fail(dss::ErrorCode::GrammarError, "selection must be an int, a list of ints or None", axis);
        }
    }
    return sel;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "DSS dataset access";
    m.attr("layout_version") = std::string(dss::kLayoutVersion);

    py::exception<dss::Error>(m, "DssError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const dss::Error& e) {
            const py::object type = py::module_::import("dss._core").attr("DssError");
            py::object inst = type(e.what());
            inst.attr("code") = std::string(dss::to_string(e.code()));
            inst.attr("path") = e.path();
            inst.attr("detail") = e.detail();
            PyErr_SetObject(type.ptr(), inst.ptr());
        }
    });

    py::class_<BoundDataset>(m, "BoundDataset")
        .def_property_readonly("dataset_type", [](const BoundDataset& b) { return b.core().dataset_type(); })
        .def_property_readonly("domain",
                               [](const BoundDataset& b) { return std::string(dss::to_string(b.core().domain())); })
        .def_property_readonly("format",
                               [](const BoundDataset& b) { return std::string(dss::to_string(b.opened().format)); })
        .def_property_readonly("axes",
                               [](const BoundDataset& b) {
                                   py::dict d;
                                   for (const auto& a : b.core().axes())
                                       d[py::str(a.name)] = a.length;
                                   return d;
                               })
        .def_property_readonly("axis_kinds",
                               [](const BoundDataset& b) {
                                   py::dict d;
                                   for (const auto& a : b.core().axes())
                                       d[py::str(a.name)] = std::string(dss::to_string(a.kind));
                                   return d;
                               })
        .def_property_readonly("attrs",
                               [](const BoundDataset& b) {
                                   py::dict d;
                                   for (const auto& [k, v] : b.core().attrs())
                                       d[py::str(k)] = attr_value(v);
                                   return d;
                               })
        .def_property_readonly("data",
                               [](py::object self) -> py::object {
                                   const auto& ds = self.cast<const BoundDataset&>().core();
                                   if (ds.axes().empty())
                                       return py::none();
                                   if (ds.is_complex())
                                       return readonly_view(ds.complex_data().data(), ds.shape(), self);
                                   return readonly_view(ds.real_data().data(), ds.shape(), self);
                               })
        .def(
            "coords",
            [](py::object self, const std::string& axis) -> py::object {
                const auto& ds = self.cast<const BoundDataset&>().core();
                const auto& c = ds.axis(dss::canonical_axis_name(axis)).coordinate;
                if (!c)
                    return py::none();
                return readonly_view(c->values.data(), {c->values.size()}, self);
            },
            py::arg("axis"))
        .def(
            "coord_unit",
            [](const BoundDataset& b, const std::string& axis) -> py::object {
                const auto& c = b.core().axis(dss::canonical_axis_name(axis)).coordinate;
                return c ? py::object(py::str(c->unit)) : py::object(py::none());
            },
            py::arg("axis"))
        .def_property_readonly("series",
                               [](const BoundDataset& b) {
                                   py::list out;
                                   for (const auto& s : b.core().series()) {
                                       std::vector<double> t, v;
                                       for (const auto& p : s.points) {
                                           t.push_back(p.t);
                                           v.push_back(p.value);
                                       }
                                       py::dict d;
                                       d["run"] = s.run;
                                       d["metric"] = s.metric;
                                       d["unit"] = s.unit;
                                       d["t"] = copy_vector(t);
                                       d["value"] = copy_vector(v);
                                       out.append(d);
                                   }
                                   return out;
                               })
        .def_property_readonly("metadata",
                               [](const BoundDataset& b) {
                                   py::list out;
                                   for (const auto& doc : b.core().metadata())
                                       out.append(py::make_tuple(doc.kind, doc.id, doc.text));
                                   return out;
                               })
        .def_property_readonly("report_valid", [](const BoundDataset& b) { return b.opened().report.valid(); })
        .def("__repr__", [](const BoundDataset& b) {
            std::ostringstream os;
            os << "<dss.BoundDataset " << b.core().dataset_type() << " (";
            bool first = true;
            for (const auto& a : b.core().axes()) {
                os << (first ? "" : ", ") << a.name << "=" << a.length;
                first = false;
            }
            os << ")>";
            return os.str();
        });

    m.def(
        "open", [](const std::string& path) { return BoundDataset(dss::open(path)); }, py::arg("path"),
        "Opens a DSS file (HDF5 or NetCDF-4) read-only.");

    m.def(
        "plot_cr",
        [](const BoundDataset& b, const py::kwargs& kw) { return plot_to_py(dss::plot_cr(b.core(), selector_from_kwargs(kw))); },
        py::arg("ds"));
    m.def(
        "plot_tf",
        [](const BoundDataset& b, const py::kwargs& kw) {
            auto [mag, phase] = dss::plot_tf(b.core(), selector_from_kwargs(kw));
            return py::make_tuple(plot_to_py(mag), plot_to_py(phase));
        },
        py::arg("ds"));
    m.def(
        "plot_rir",
        [](const BoundDataset& b, const py::kwargs& kw) { return plot_to_py(dss::plot_rir(b.core(), selector_from_kwargs(kw))); },
        py::arg("ds"));

    m.def(
        "_run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int rc = dss::run_cli(args, out, err);
            return py::make_tuple(rc, out.str(), err.str());
        },
        py::arg("args"));
}
