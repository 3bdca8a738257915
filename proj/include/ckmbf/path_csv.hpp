// SPDX-License-Identifier: Apache-2.0
//
// ckmbf: environment-aware hybrid beamforming with channel knowledge maps
// Copyright (C) 2026 The ckmbf authors
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

#include "ckmbf/arrays.hpp"

#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace ckm
{

inline constexpr std::string_view kPathCsvHeader =
    "location_id,x_m,y_m,z_m,gain_re,gain_im,aoa_zenith_rad,aoa_azimuth_rad,aod_zenith_rad,aod_azimuth_rad";

// One PathSet per distinct location_id, in order of first appearance.
// Throws ParseError (with 1-based line number) on malformed rows or out-of-range angles.
std::vector<PathSet> import_paths_csv(std::istream &in);

// Writes the header and one row per path with 17 significant digits, so values round-trip exactly.
// PathSets without an id are labelled by their position ("loc<N>").
void export_paths_csv(std::ostream &out, const std::vector<PathSet> &sets);

} // namespace ckm
