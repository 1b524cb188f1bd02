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

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <regex>
#include <sstream>

namespace dss {

namespace fs = std::filesystem;

namespace {

std::string read_all(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::IoError, "cannot open file", path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class T>
T load_le(const char* p)
{
    T v;
    std::memcpy(&v, p, sizeof v);
    return v;
}

} // namespace

Matrix read_csv_matrix(const fs::path& path)
{
    const auto text = read_all(path);
    std::istringstream in(text);
    std::string line;
    Matrix m;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        for (auto& c : line)
            if (c == ',' || c == ';' || c == '\t' || c == '\r')
                c = ' ';
        std::istringstream ls(line);
        std::vector<double> row;
        std::string tok;
        while (ls >> tok) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(tok, &used));
                if (used != tok.size())
                    throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                if (m.rows == 0 && row.empty() && !header_seen) {
                    header_seen = true;
                    row.clear();
                    ls.setstate(std::ios::failbit);
                    break;
                }
                fail(ErrorCode::FormatError, "non-numeric value '" + tok + "' on line " + std::to_string(lineno),
                     path.string());
            }
        }
        if (row.empty())
            continue;
        if (m.rows == 0)
            m.cols = row.size();
        else if (row.size() != m.cols)
            fail(ErrorCode::ShapeError,
                 "line " + std::to_string(lineno) + " has " + std::to_string(row.size()) + " columns, expected " +
                     std::to_string(m.cols),
                 path.string());
        m.values.insert(m.values.end(), row.begin(), row.end());
        ++m.rows;
    }
    if (m.rows == 0)
        fail(ErrorCode::FormatError, "no numeric rows", path.string());
    return m;
}

Matrix read_npy_matrix(const fs::path& path)
{
    const auto raw = read_all(path);
    if (raw.size() < 10 || std::memcmp(raw.data(), "\x93NUMPY", 6) != 0)
        fail(ErrorCode::FormatError, "not a .npy file", path.string());
    const auto major = static_cast<unsigned char>(raw[6]);
    std::size_t header_len = 0;
    std::size_t offset = 0;
    if (major == 1) {
        header_len = load_le<std::uint16_t>(raw.data() + 8);
        offset = 10;
    } else {
        if (raw.size() < 12)
            fail(ErrorCode::FormatError, "truncated .npy header", path.string());
        header_len = load_le<std::uint32_t>(raw.data() + 8);
        offset = 12;
    }
    if (raw.size() < offset + header_len)
        fail(ErrorCode::FormatError, "truncated .npy header", path.string());
    const std::string header = raw.substr(offset, header_len);
    std::smatch m;
    static const std::regex descr_re(R"('descr'\s*:\s*'([<>|=])([a-z])(\d+)')");
    static const std::regex order_re(R"('fortran_order'\s*:\s*(True|False))");
    static const std::regex shape_re(R"('shape'\s*:\s*\(([^)]*)\))");
    if (!std::regex_search(header, m, descr_re))
        fail(ErrorCode::FormatError, "unsupported .npy dtype", path.string());
    const char endian = m[1].str()[0];
    const char type = m[2].str()[0];
    const auto width = static_cast<std::size_t>(std::stoul(m[3].str()));
    if (endian == '>')
        fail(ErrorCode::FormatError, "big-endian .npy arrays are not supported", path.string());
    if (!std::regex_search(header, m, order_re))
        fail(ErrorCode::FormatError, "missing fortran_order in .npy header", path.string());
    const bool fortran = m[1] == "True";
    if (!std::regex_search(header, m, shape_re))
        fail(ErrorCode::FormatError, "missing shape in .npy header", path.string());
    std::vector<std::size_t> shape;
    {
        std::string dims = m[1];
        std::istringstream ds(dims);
        std::string tok;
        while (std::getline(ds, tok, ',')) {
            if (tok.find_first_not_of(" ") == std::string::npos)
                continue;
            shape.push_back(static_cast<std::size_t>(std::stoul(tok)));
        }
    }
    if (shape.empty() || shape.size() > 2)
        fail(ErrorCode::ShapeError, "only 1-D and 2-D .npy arrays are supported", path.string());
    Matrix out(shape[0], shape.size() == 2 ? shape[1] : 1);
    const std::size_t count = out.rows * out.cols;
    const std::size_t data_off = offset + header_len;
    if (raw.size() < data_off + count * width)
        fail(ErrorCode::FormatError, "truncated .npy payload", path.string());
    for (std::size_t i = 0; i < count; ++i) {
        const char* p = raw.data() + data_off + i * width;
        double v = 0;
        if (type == 'f' && width == 8)
            v = load_le<double>(p);
        else if (type == 'f' && width == 4)
            v = load_le<float>(p);
        else if (type == 'i' && width == 8)
            v = static_cast<double>(load_le<std::int64_t>(p));
        else if (type == 'i' && width == 4)
            v = load_le<std::int32_t>(p);
        else
            fail(ErrorCode::FormatError, "unsupported .npy dtype", path.string());
        if (fortran) {
            const std::size_t r = i % out.rows;
            const std::size_t c = i / out.rows;
            out(r, c) = v;
        } else {
            out.values[i] = v;
        }
    }
    return out;
}

void write_csv_matrix(const fs::path& path, const Matrix& m)
{
    std::ofstream out(path);
    if (!out)
        fail(ErrorCode::IoError, "cannot write file", path.string());
    out << std::setprecision(17);
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            if (c)
                out << ',';
            out << m(r, c);
        }
        out << '\n';
    }
    if (!out)
        fail(ErrorCode::IoError, "write failed", path.string());
}

std::pair<std::string, std::string> split_data_ref(std::string_view ref)
{
    const auto hash = ref.find('#');
    if (hash == std::string_view::npos)
        return {std::string(ref), {}};
    return {std::string(ref.substr(0, hash)), std::string(ref.substr(hash + 1))};
}

FileAccess default_file_access()
{
    FileAccess fa;
    fa.load_matrix = [](const fs::path& path, const std::string& object) -> Matrix {
        if (!object.empty())
            fail(ErrorCode::IoError, "reading arrays from dataset files requires the storage module", path.string());
        if (!fs::exists(path))
            fail(ErrorCode::IoError, "file not found", path.string());
        if (path.extension() == ".npy")
            return read_npy_matrix(path);
        return read_csv_matrix(path);
    };
    return fa;
}

std::optional<DocKind> kind_from_filename(const fs::path& path)
{
    const auto stem = path.stem();     // "name.testbed"
    const auto suffix = stem.extension().string();
    if (suffix.size() < 2)
        return std::nullopt;
    return parse_doc_kind(suffix.substr(1));
}

} // namespace dss
