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

#include "dss/model.hpp"

#include <algorithm>

namespace dss {

std::string AxisSpec::effective_name() const
{
    return name.empty() ? std::string(to_string(kind)) : name;
}

namespace {

std::vector<AxisSpec> specs(std::initializer_list<AxisKind> kinds)
{
    std::vector<AxisSpec> out;
    for (auto k : kinds)
        out.push_back(AxisSpec{k, {}});
    return out;
}

std::string describe(const std::vector<AxisSpec>& axes)
{
    std::string s = "(";
    for (std::size_t i = 0; i < axes.size(); ++i) {
        if (i)
            s += ", ";
        s += axes[i].effective_name();
        if (axes[i].kind == AxisKind::custom)
            s += ":custom";
    }
    return s + ")";
}

std::string describe(const std::vector<AxisDef>& axes)
{
    std::string s = "(";
    for (std::size_t i = 0; i < axes.size(); ++i) {
        if (i)
            s += ", ";
        s += axes[i].name + ":" + std::to_string(axes[i].length);
    }
    return s + ")";
}

void check_against(const DssDataset::Parts& p, std::string_view type, const DatasetProfile& prof, ValueKind vk)
{
    const std::string t(type);
    if (prof.ragged_series) {
        if (!p.axes.empty())
            fail(ErrorCode::ProfileViolation, "'" + t + "' datasets hold ragged series only, not a dense tensor");
    } else {
        bool ok = p.axes.size() == prof.axes.size();
        for (std::size_t i = 0; ok && i < p.axes.size(); ++i)
            ok = p.axes[i].kind == prof.axes[i].kind && p.axes[i].name == prof.axes[i].effective_name();
        if (!ok)
            fail(ErrorCode::ProfileViolation,
                 "'" + t + "' requires axes " + describe(prof.axes) + " in this order, got " + describe(p.axes));
        if (vk != prof.value_kind)
            fail(ErrorCode::ProfileViolation, "'" + t + "' holds " + std::string(to_string(prof.value_kind)) +
                                                  " values, got " + std::string(to_string(vk)));
        if (!p.series.empty())
            fail(ErrorCode::ProfileViolation, "'" + t + "' does not hold ragged series");
    }
    if (!prof.domains.empty() && std::find(prof.domains.begin(), prof.domains.end(), p.domain) == prof.domains.end())
        fail(ErrorCode::ProfileViolation,
             "domain '" + std::string(to_string(p.domain)) + "' is not allowed for '" + t + "'");
    for (const auto& key : prof.required_attrs)
        if (!p.attrs.count(key))
            fail(ErrorCode::ProfileViolation, "'" + t + "' requires attribute '" + key + "'");
}

} // namespace

DatasetTypeRegistry::DatasetTypeRegistry()
{
    entries_.emplace(std::string(kChannelSounding),
                     DatasetProfile{specs({AxisKind::tx, AxisKind::rx, AxisKind::time, AxisKind::sample}),
                                    ValueKind::complex,
                                    {"center_frequency", "bandwidth"},
                                    {Domain::delay, Domain::frequency},
                                    false});
    entries_.emplace(std::string(kAcoustic),
                     DatasetProfile{specs({AxisKind::speaker, AxisKind::microphone, AxisKind::channel, AxisKind::sample}),
                                    ValueKind::real,
                                    {"sampling_rate"},
                                    {Domain::time},
                                    false});
    entries_.emplace(std::string(kSimulation),
                     DatasetProfile{{}, ValueKind::real, {}, {Domain::time, Domain::none}, true});
}

const DatasetProfile* DatasetTypeRegistry::find(std::string_view name) const noexcept
{
    const auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
}

bool DatasetTypeRegistry::is_builtin(std::string_view name) const noexcept
{
    return name == kChannelSounding || name == kAcoustic || name == kSimulation;
}

std::vector<std::string> DatasetTypeRegistry::names() const
{
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_)
        out.push_back(k);
    return out;
}

DatasetTypeRegistry DatasetTypeRegistry::with_type(std::string name, DatasetProfile profile) const
{
    if (is_builtin(name))
        fail(ErrorCode::ReservedName, "'" + name + "' is a built-in dataset type");
    if (entries_.count(name))
        fail(ErrorCode::DuplicateType, "dataset type '" + name + "' is already registered");
    if (name.empty() || name.find('/') != std::string::npos)
        fail(ErrorCode::InvalidArgument, "dataset type name '" + name + "' is not usable");
    for (std::size_t i = 0; i < profile.axes.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (profile.axes[i].effective_name() == profile.axes[j].effective_name())
                fail(ErrorCode::InvalidArgument, "profile for '" + name + "' names axis '" +
                                                     profile.axes[i].effective_name() + "' twice");
    if (profile.ragged_series && !profile.axes.empty())
        fail(ErrorCode::InvalidArgument, "a ragged-series profile cannot declare tensor axes");
    if (!profile.ragged_series && profile.axes.empty())
        fail(ErrorCode::InvalidArgument, "profile for '" + name + "' declares no axes");
    DatasetTypeRegistry out = *this;
    out.entries_.emplace(std::move(name), std::move(profile));
    return out;
}

DatasetTypeRegistry register_type(const DatasetTypeRegistry& registry, std::string name, DatasetProfile profile)
{
    return registry.with_type(std::move(name), std::move(profile));
}

DssDataset new_dataset(std::string_view dataset_type, std::vector<AxisDef> axes, Domain domain, Attributes attrs,
                       const DatasetTypeRegistry& registry, std::optional<ValueKind> value_kind)
{
    const auto* prof = registry.find(dataset_type);
    if (!prof)
        fail(ErrorCode::UnknownType, "dataset type '" + std::string(dataset_type) + "' is not registered");
    const ValueKind vk = value_kind.value_or(prof->value_kind);

    DssDataset::Parts p;
    p.dataset_type = std::string(dataset_type);
    p.axes = std::move(axes);
    p.domain = domain;
    p.attrs = std::move(attrs);
    check_against(p, dataset_type, *prof, vk);

    std::size_t n = p.axes.empty() ? 0 : 1;
    for (const auto& a : p.axes)
        n *= a.length;
    if (vk == ValueKind::complex)
        p.data = std::vector<Complex>(n);
    else
        p.data = std::vector<double>(n);
    return DssDataset::from_parts(std::move(p));
}

void validate_profile(const DssDataset& ds, const DatasetTypeRegistry& registry)
{
    if (const auto* prof = registry.find(ds.dataset_type()))
        check_against(ds.parts(), ds.dataset_type(), *prof, ds.value_kind());
}

} // namespace dss
