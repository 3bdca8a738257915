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

#include "ckmbf/path_csv.hpp"

#include "ckmbf/errors.hpp"
#include "ckmbf/text_format.hpp"

#include <array>
#include <cmath>
#include <string>
#include <unordered_map>

namespace ckm
{

namespace
{

constexpr std::array<const char *, 9> kNumericColumns = {
    "x_m", "y_m", "z_m", "gain_re", "gain_im", "aoa_zenith_rad", "aoa_azimuth_rad", "aod_zenith_rad", "aod_azimuth_rad"};

void check_angle(const AnglePair &a, const char *which, std::size_t line)
{
    if (!(a.zenith >= 0.0 && a.zenith <= kPi))
        throw ParseError(std::string(which) + " zenith " + format_double(a.zenith) + " outside [0, pi]", line);
    if (!(a.azimuth >= 0.0 && a.azimuth < kTwoPi))
        throw ParseError(std::string(which) + " azimuth " + format_double(a.azimuth) + " outside [0, 2 pi)", line);
}

} // namespace

std::vector<PathSet> import_paths_csv(std::istream &in)
{
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line))
    {
        ++line_no;
        std::string_view view = trim(line);
        if (line_no == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF")
            view.remove_prefix(3);
        if (view.empty())
            continue;
        if (view != kPathCsvHeader)
            throw ParseError("expected header '" + std::string(kPathCsvHeader) + "'", line_no);
        have_header = true;
        break;
    }
    if (!have_header)
        throw ParseError("missing header", line_no);

    std::vector<PathSet> sets;
    std::unordered_map<std::string, std::size_t> index_of;
    while (std::getline(in, line))
    {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty())
            continue;
        const auto fields = split(view, ',');
        if (fields.size() != kNumericColumns.size() + 1)
            throw ParseError("expected 10 fields, found " + std::to_string(fields.size()), line_no);
        const std::string id(trim(fields[0]));
        if (id.empty())
            throw ParseError("empty location_id", line_no);

        std::array<double, kNumericColumns.size()> v{};
        for (std::size_t k = 0; k < v.size(); ++k)
        {
            const auto parsed = parse_double(fields[k + 1]);
            if (!parsed || !std::isfinite(*parsed))
                throw ParseError(std::string("bad number in column ") + kNumericColumns[k], line_no);
            v[k] = *parsed;
        }

        Path p;
        p.gain = {v[3], v[4]};
        p.aoa = {v[5], v[6]};
        p.aod = {v[7], v[8]};
        check_angle(p.aoa, "aoa", line_no);
        check_angle(p.aod, "aod", line_no);
        const Vec3 loc{v[0], v[1], v[2]};

        auto [it, inserted] = index_of.try_emplace(id, sets.size());
        if (inserted)
        {
            PathSet ps;
            ps.id = id;
            ps.location = loc;
            sets.push_back(std::move(ps));
        }
        PathSet &target = sets[it->second];
        if (!(target.location == loc))
            throw ParseError("location_id '" + id + "' reused with a different position", line_no);
        target.paths.push_back(p);
    }
    return sets;
}

void export_paths_csv(std::ostream &out, const std::vector<PathSet> &sets)
{
    out << kPathCsvHeader << '\n';
    for (std::size_t s = 0; s < sets.size(); ++s)
    {
        const PathSet &ps = sets[s];
        const std::string id = ps.id.empty() ? "loc" + std::to_string(s) : ps.id;
        for (const Path &p : ps.paths)
        {
            out << id << ',' << format_double(ps.location.x) << ',' << format_double(ps.location.y) << ','
                << format_double(ps.location.z) << ',' << format_double(p.gain.real()) << ','
                << format_double(p.gain.imag()) << ',' << format_double(p.aoa.zenith) << ','
                << format_double(p.aoa.azimuth) << ',' << format_double(p.aod.zenith) << ','
                << format_double(p.aod.azimuth) << '\n';
        }
    }
}

} // namespace ckm
