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

#pragma once

#include "dss/model.hpp"

#include <cstddef>
#include <vector>

namespace dss::detail {

// In-place batched DFT over `howmany` contiguous rows of length n. sign is
// -1 (forward) or +1 (backward); no normalization.
void dft_rows(Complex* data, std::size_t n, std::size_t howmany, int sign);

// exp(sign * 2*pi*i * (m*k mod n) / n), exact for zero angle.
Complex twiddle(long long m, std::size_t k, std::size_t n, int sign);

// Index of the sample axis; it must be the last axis. Throws ProfileError.
std::size_t sample_axis(const DssDataset& ds);

// Uniform step of a coordinate; throws NonUniformGrid.
double uniform_step(const std::vector<double>& v, std::string_view what);

// Delay/time grid of the sample axis (coordinate or derived from
// sampling_rate / bandwidth).
std::vector<double> time_grid(const DssDataset& ds);

// Absolute frequency grid of the sample axis.
std::vector<double> frequency_grid(const DssDataset& ds);

double required_attr(const DssDataset& ds, const std::string& key);

} // namespace dss::detail
