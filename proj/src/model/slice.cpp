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

#include <charconv>

namespace dss {

std::string canonical_axis_name(std::string_view name)
{
    if (name == "t")
        return "time";
    if (name == "sp")
        return "speaker";
    if (name == "mic")
        return "microphone";
    if (name == "ch")
        return "channel";
    return std::string(name);
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

[[noreturn]] void grammar(std::string_view text, const std::string& why)
{
    fail(ErrorCode::GrammarError, "bad selector '" + std::string(text) + "': " + why);
}

std::size_t parse_index(std::string_view s, std::string_view text)
{
    s = trim(s);
    std::size_t v = 0;
    const auto* end = s.data() + s.size();
    const auto r = std::from_chars(s.data(), end, v);
    if (s.empty() || r.ec != std::errc{} || r.ptr != end)
        grammar(text, "'" + std::string(s) + "' is not a non-negative integer");
    return v;
}

// Appends "k" or "a:b" (half-open) to out.
void parse_item(std::string_view item, std::string_view text, std::vector<std::size_t>& out, bool& single)
{
    item = trim(item);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
        out.push_back(parse_index(item, text));
        single = true;
        return;
    }
    const auto a = parse_index(item.substr(0, colon), text);
    const auto b = parse_index(item.substr(colon + 1), text);
    if (a >= b)
        grammar(text, "empty range '" + std::string(item) + "'");
    for (auto i = a; i < b; ++i)
        out.push_back(i);
    single = false;
}

std::vector<std::string_view> split_top(std::string_view s, std::string_view text)
{
    std::vector<std::string_view> parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '[')
            ++depth;
        else if (s[i] == ']' && --depth < 0)
            grammar(text, "unbalanced ']'");
        else if (s[i] == ',' && depth == 0) {
            parts.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    if (depth != 0)
        grammar(text, "unbalanced '['");
    parts.push_back(s.substr(start));
    return parts;
}

} // namespace

SliceSelector parse_slice_selector(std::string_view text)
{
    auto body = trim(text);
    if (!body.empty() && body.front() == '(') {
        if (body.back() != ')')
            grammar(text, "unbalanced '('");
        body = trim(body.substr(1, body.size() - 2));
    }
    SliceSelector sel;
    if (body.empty())
        return sel;
    for (auto part : split_top(body, text)) {
        part = trim(part);
        const auto eq = part.find('=');
        if (eq == std::string_view::npos)
            grammar(text, "expected axis=selection in '" + std::string(part) + "'");
        const auto name = trim(part.substr(0, eq));
        auto value = trim(part.substr(eq + 1));
        if (name.empty())
            grammar(text, "missing axis name");
        const auto axis = canonical_axis_name(name);
        if (sel.axes.count(axis))
            grammar(text, "axis '" + axis + "' selected twice");
        if (value == "all" || value == ":" || value == "*") {
            sel.axes[axis] = SelectAll{};
            continue;
        }
        std::vector<std::size_t> idx;
        bool single = false;
        if (!value.empty() && value.front() == '[') {
            if (value.back() != ']')
                grammar(text, "unterminated list for axis '" + axis + "'");
            const auto inner = trim(value.substr(1, value.size() - 2));
            if (inner.empty())
                grammar(text, "empty list for axis '" + axis + "'");
            for (auto item : split_top(inner, text)) {
                if (item.find('[') != std::string_view::npos)
                    grammar(text, "nested list for axis '" + axis + "'");
                parse_item(item, text, idx, single);
            }
            sel.axes[axis] = std::move(idx);
        } else {
            parse_item(value, text, idx, single);
            if (single)
                sel.axes[axis] = idx.front();
            else
                sel.axes[axis] = std::move(idx);
        }
    }
    return sel;
}

std::vector<std::size_t> selected_indices(const AxisSelection& sel, std::size_t length, std::string_view axis)
{
    std::vector<std::size_t> out;
    if (std::holds_alternative<SelectAll>(sel)) {
        out.resize(length);
        for (std::size_t i = 0; i < length; ++i)
            out[i] = i;
        return out;
    }
    if (const auto* k = std::get_if<std::size_t>(&sel))
        out.push_back(*k);
    else
        out = std::get<std::vector<std::size_t>>(sel);
    if (out.empty())
        fail(ErrorCode::IndexError, "empty index list for axis '" + std::string(axis) + "'");
    for (auto i : out)
        if (i >= length)
            fail(ErrorCode::IndexError, "index " + std::to_string(i) + " out of range for axis '" +
                                            std::string(axis) + "' of length " + std::to_string(length));
    return out;
}

namespace {

template <class T>
std::vector<T> gather(const std::vector<T>& src, const std::vector<std::size_t>& shape,
                      const std::vector<std::vector<std::size_t>>& pick)
{
    const std::size_t rank = shape.size();
    std::vector<std::size_t> stride(rank, 1);
    for (std::size_t d = rank; d-- > 1;)
        stride[d - 1] = stride[d] * shape[d];
    std::size_t total = 1;
    for (const auto& p : pick)
        total *= p.size();
    std::vector<T> out;
    out.reserve(total);
    std::vector<std::size_t> pos(rank, 0);
    const auto& inner = pick[rank - 1];
    while (true) {
        std::size_t base = 0;
        for (std::size_t d = 0; d + 1 < rank; ++d)
            base += pick[d][pos[d]] * stride[d];
        for (auto i : inner)
            out.push_back(src[base + i]);
        std::size_t d = rank - 1;
        while (d-- > 0) {
            if (++pos[d] < pick[d].size())
                break;
            pos[d] = 0;
        }
        if (d == static_cast<std::size_t>(-1))
            break;
    }
    return out;
}

Matrix gather_rows(const Matrix& m, const std::vector<std::size_t>& rows)
{
    Matrix out;
    out.rows = rows.size();
    out.cols = m.cols;
    out.values.reserve(out.rows * out.cols);
    for (auto r : rows)
        for (std::size_t c = 0; c < m.cols; ++c)
            out.values.push_back(m(r, c));
    return out;
}

} // namespace

DssDataset slice(const DssDataset& ds, const SliceSelector& sel)
{
    for (const auto& [name, s] : sel.axes)
        ds.axis_index(name);
    const auto& axes = ds.axes();
    if (axes.empty()) {
        if (!sel.axes.empty())
            fail(ErrorCode::AxisError, "dataset has no tensor axes to slice");
        return ds;
    }
    std::vector<std::vector<std::size_t>> pick(axes.size());
    for (std::size_t d = 0; d < axes.size(); ++d) {
        AxisSelection s = SelectAll{};
        for (const auto& [name, v] : sel.axes)
            if (ds.axis_index(name) == d)
                s = v;
        pick[d] = selected_indices(s, axes[d].length, axes[d].name);
    }

    DssDataset::Parts p = ds.parts();
    const auto shape = ds.shape();
    for (std::size_t d = 0; d < p.axes.size(); ++d) {
        auto& a = p.axes[d];
        a.length = pick[d].size();
        if (a.coordinate) {
            std::vector<double> v;
            v.reserve(pick[d].size());
            for (auto i : pick[d])
                v.push_back(a.coordinate->values[i]);
            a.coordinate->values = std::move(v);
        }
        if (auto it = p.channel_coords.find(a.name); it != p.channel_coords.end()) {
            it->second.positions = gather_rows(it->second.positions, pick[d]);
            if (it->second.orientations)
                it->second.orientations = gather_rows(*it->second.orientations, pick[d]);
        }
    }
    std::visit([&](const auto& v) { p.data = gather(v, shape, pick); }, ds.parts().data);
    return DssDataset::from_parts(std::move(p));
}

} // namespace dss
