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

// Persistence of DssDataset values in HDF5 and NetCDF-4 files. Both formats
// share one layout; see docs/layout.md.

#pragma once

#include "dss/descfiles.hpp"
#include "dss/model.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace dss {

enum class StorageFormat { hdf5, netcdf4 };

std::string_view to_string(StorageFormat f) noexcept;
/// Accepts "hdf5", "h5", "netcdf4", "netcdf", "nc".
std::optional<StorageFormat> parse_storage_format(std::string_view s) noexcept;

inline constexpr std::string_view kLayoutVersion = "1.0";

struct OpenedDataset {
    DssDataset dataset;
    ValidationReport report; // embedded description files, re-validated
    StorageFormat format = StorageFormat::hdf5;
};

/// Writes `ds` to `path` through a temporary file and an atomic rename.
/// Throws IoError, UnsupportedFeature or ProfileViolation.
void save(const DssDataset& ds, const std::filesystem::path& path, StorageFormat format = StorageFormat::hdf5,
          const DatasetTypeRegistry& types = DatasetTypeRegistry());

/// Throws IoError (unreadable), FormatError (layout violation; path() names
/// the offending object) or VersionError (unknown dss_version, classic
/// NetCDF).
OpenedDataset open(const std::filesystem::path& path, const DatasetTypeRegistry& types = DatasetTypeRegistry());

/// open + save. The destination is not touched when the source fails.
void convert(const std::filesystem::path& src, const std::filesystem::path& dst, StorageFormat format,
             const DatasetTypeRegistry& types = DatasetTypeRegistry());

/// Format from magic bytes and the `_NCProperties` root attribute.
StorageFormat sniff_format(const std::filesystem::path& path);

/// Reads a numeric dataset inside a DSS file as a matrix (rank 1 gives N x 1).
/// Throws IoError (missing file or object) or ShapeError (rank > 2).
Matrix read_matrix_object(const std::filesystem::path& file, const std::string& object);
bool has_object(const std::filesystem::path& file, const std::string& object);

/// CSV, .npy and `file.dss.h5#/object` references.
FileAccess dataset_file_access();

/// Copies the source text of every registry document into the dataset.
void embed_documents(DssDataset& ds, const Registry& registry);

/// Registry rebuilt from the embedded texts (each distinct text loaded once).
Registry embedded_registry(const DssDataset& ds);

/// validate_all over the embedded registry with file checks disabled.
ValidationReport validate_embedded(const DssDataset& ds);

} // namespace dss
