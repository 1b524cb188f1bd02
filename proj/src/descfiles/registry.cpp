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

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace dss {

namespace fs = std::filesystem;

namespace {

bool is_yaml(const fs::path& p)
{
    const auto ext = p.extension();
    return ext == ".yaml" || ext == ".yml";
}

} // namespace

void Registry::add(DescriptionDoc doc)
{
    docs_.push_back(std::make_shared<const DescriptionDoc>(std::move(doc)));
}

void Registry::add_text(std::string_view text, const fs::path& source_path, std::optional<DocKind> hint)
{
    try {
        for (auto& d : parse_documents(text, hint, source_path))
            add(std::move(d));
    } catch (const Error& e) {
        std::string where = e.path();
        if (e.line > 0)
            where += (where.empty() ? "" : " ") + std::string("(line ") + std::to_string(e.line) + ", column " +
                     std::to_string(e.column) + ")";
        std::string code(to_string(e.code()));
        // report codes are snake_case
        std::string snake;
        for (std::size_t i = 0; i < code.size(); ++i) {
            const char c = code[i];
            if (std::isupper(static_cast<unsigned char>(c))) {
                if (i)
                    snake += '_';
                snake += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            } else {
                snake += c;
            }
        }
        load_issues_.error(snake, e.path(), e.detail() + (where.empty() ? "" : " " + where),
                           source_path.filename().string());
    }
}

Registry Registry::load_dir(const fs::path& dir)
{
    return load_paths({dir});
}

Registry Registry::load_paths(const std::vector<fs::path>& paths)
{
    Registry reg;
    auto load_file = [&](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        if (!in)
            fail(ErrorCode::IoError, "cannot read file", p.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        reg.add_text(ss.str(), p, kind_from_filename(p));
    };
    for (const auto& path : paths) {
        std::error_code ec;
        if (fs::is_directory(path, ec)) {
            std::vector<fs::path> files;
            for (const auto& entry : fs::directory_iterator(path))
                if (entry.is_regular_file() && is_yaml(entry.path()))
                    files.push_back(entry.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files)
                load_file(f);
        } else if (fs::is_regular_file(path, ec)) {
            load_file(path);
        } else {
            fail(ErrorCode::IoError, "no such file or directory", path.string());
        }
    }
    return reg;
}

const DescriptionDoc* Registry::find(DocKind kind, std::string_view id) const
{
    for (const auto& d : docs_)
        if (d->kind == kind && d->id == id)
            return d.get();
    return nullptr;
}

} // namespace dss
