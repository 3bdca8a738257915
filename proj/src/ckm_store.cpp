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

#include "ckmbf/ckm_store.hpp"

#include "ckmbf/errors.hpp"
#include "ckmbf/text_format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace ckm
{

namespace
{

bool same_location_order(const Vec3 &a, const Vec3 &b)
{
    if (a.x != b.x)
        return a.x < b.x;
    if (a.y != b.y)
        return a.y < b.y;
    return a.z < b.z;
}

template <typename Entry>
void check_distinct_locations(const std::vector<Entry> &entries, const char *what)
{
    std::vector<Vec3> locs;
    locs.reserve(entries.size());
    for (const Entry &e : entries)
        locs.push_back(e.location);
    std::sort(locs.begin(), locs.end(), same_location_order);
    for (std::size_t i = 1; i < locs.size(); ++i)
        if (locs[i] == locs[i - 1])
            throw ContractViolation(std::string(what) + ": duplicate sample location");
}

void check_cam_entry(const CamEntry &e, const AngleGrid &grid)
{
    std::set<GridTuple> seen;
    for (std::size_t i = 0; i < e.candidates.size(); ++i)
    {
        const CamCandidate &c = e.candidates[i];
        if (c.tuple.aoa >= grid.rx_size() || c.tuple.aod >= grid.tx_size())
            throw ContractViolation("CAM entry: tuple outside the angle grid");
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight))
            throw ContractViolation("CAM entry: weights must be finite and nonnegative");
        if (i > 0 && c.weight > e.candidates[i - 1].weight)
            throw ContractViolation("CAM entry: weights must be nonincreasing");
        if (!seen.insert(c.tuple).second)
            throw ContractViolation("CAM entry: duplicate tuple");
    }
}

void check_distinct_indices(const std::vector<std::size_t> &v, std::optional<std::size_t> bound, const char *what)
{
    std::set<std::size_t> seen;
    for (std::size_t b : v)
    {
        if (bound && b >= *bound)
            throw ContractViolation(std::string(what) + ": beam index " + std::to_string(b) + " out of range");
        if (!seen.insert(b).second)
            throw ContractViolation(std::string(what) + ": duplicate beam index " + std::to_string(b));
    }
}

std::vector<Vec3> locations_of(const auto &entries)
{
    std::vector<Vec3> out;
    out.reserve(entries.size());
    for (const auto &e : entries)
        out.push_back(e.location);
    return out;
}

bool heavier(const CamCandidate &a, const CamCandidate &b)
{
    return a.weight > b.weight || (a.weight == b.weight && a.tuple < b.tuple);
}

} // namespace

CkmDatabase::CkmDatabase(CkmMeta meta, std::vector<CamEntry> cam, std::vector<BimEntry> bim,
                         std::size_t brute_force_limit)
    : meta_(std::move(meta)), cam_(std::move(cam)), bim_(std::move(bim))
{
    if (meta_.K < 1)
        throw ContractViolation("CkmDatabase: K must be >= 1");
    if (meta_.grid.rx_zenith < 1 || meta_.grid.rx_azimuth < 1 || meta_.grid.tx_zenith < 1 ||
        meta_.grid.tx_azimuth < 1)
        throw ContractViolation("CkmDatabase: grid counts must be positive");
    check_distinct_locations(cam_, "CkmDatabase");
    check_distinct_locations(bim_, "CkmDatabase");
    for (const CamEntry &e : cam_)
        check_cam_entry(e, meta_.grid);
    const auto tx_bound = codebook_size_from_fingerprint(meta_.tx_codebook);
    const auto rx_bound = codebook_size_from_fingerprint(meta_.rx_codebook);
    if (!bim_.empty() && (!tx_bound || !rx_bound))
        throw ContractViolation("CkmDatabase: BIM records need valid codebook fingerprints");
    for (const BimEntry &e : bim_)
    {
        check_distinct_indices(e.tx_beams, tx_bound, "BIM entry tx");
        check_distinct_indices(e.rx_beams, rx_bound, "BIM entry rx");
    }
    cam_index_ = SpatialIndex(locations_of(cam_), brute_force_limit);
    bim_index_ = SpatialIndex(locations_of(bim_), brute_force_limit);
}

std::string CkmDatabase::kind() const
{
    if (!cam_.empty() && bim_.empty())
        return "cam";
    if (cam_.empty() && !bim_.empty())
        return "bim";
    return "mixed";
}

CamEntry build_cam_entry(const PathSet &paths, const AngleGrid &grid, std::size_t L_max)
{
    std::map<GridTuple, double> merged;
    for (const Path &p : paths.paths)
    {
        const GridTuple t = grid.canonical({grid.snap_rx(p.aoa), grid.snap_tx(p.aod)});
        merged[t] += std::norm(p.gain);
    }
    CamEntry e;
    e.location = paths.location;
    for (const auto &[t, w] : merged)
        e.candidates.push_back({t, w});
    std::sort(e.candidates.begin(), e.candidates.end(), heavier);
    if (e.candidates.size() > L_max)
        e.candidates.resize(L_max);
    return e;
}

std::vector<CamEntry> build_cam_samples(const std::vector<PathSet> &paths, const AngleGrid &grid, std::size_t L_max)
{
    std::vector<CamEntry> out;
    out.reserve(paths.size());
    for (const PathSet &ps : paths)
        out.push_back(build_cam_entry(ps, grid, L_max));
    return out;
}

CamEntry query_cam(const CkmDatabase &db, Vec3 q, std::size_t L, std::size_t K)
{
    if (db.cam().empty())
        throw ContractViolation("query_cam: database has no CAM records");
    if (K < 1)
        throw ContractViolation("query_cam: K must be >= 1");
    const std::vector<Neighbor> nn = db.cam_index().nearest(q, K);

    CamEntry out;
    out.location = q;
    if (nn.front().distance == 0.0)
    {
        const CamEntry &hit = db.cam()[nn.front().index];
        out.candidates.assign(hit.candidates.begin(),
                              hit.candidates.begin() + static_cast<long>(std::min(L, hit.candidates.size())));
        return out;
    }
    std::map<GridTuple, double> pooled;
    for (const Neighbor &n : nn)
        for (const CamCandidate &c : db.cam()[n.index].candidates)
            pooled[c.tuple] += c.weight / n.distance;
    for (const auto &[t, w] : pooled)
        out.candidates.push_back({t, w});
    std::sort(out.candidates.begin(), out.candidates.end(), heavier);
    if (out.candidates.size() > L)
        out.candidates.resize(L);
    return out;
}

std::vector<BimEntry> build_bim_samples(const std::vector<BimSample> &samples, std::size_t tx_max,
                                        std::size_t rx_max)
{
    std::vector<BimEntry> out;
    out.reserve(samples.size());
    for (const BimSample &s : samples)
    {
        check_distinct_indices(s.tx_ranked, std::nullopt, "build_bim_samples tx");
        check_distinct_indices(s.rx_ranked, std::nullopt, "build_bim_samples rx");
        BimEntry e;
        e.location = s.location;
        e.tx_beams.assign(s.tx_ranked.begin(), s.tx_ranked.begin() + static_cast<long>(std::min(tx_max, s.tx_ranked.size())));
        e.rx_beams.assign(s.rx_ranked.begin(), s.rx_ranked.begin() + static_cast<long>(std::min(rx_max, s.rx_ranked.size())));
        out.push_back(std::move(e));
    }
    check_distinct_locations(out, "build_bim_samples");
    return out;
}

namespace
{

std::vector<std::size_t> pool_ranked(const std::vector<std::pair<const std::vector<std::size_t> *, double>> &lists,
                                     std::size_t wanted, bool &shortfall)
{
    std::map<std::size_t, double> score;
    for (const auto &[list, d] : lists)
    {
        const double n = static_cast<double>(list->size());
        for (std::size_t r = 0; r < list->size(); ++r)
            score[(*list)[r]] += (n - static_cast<double>(r)) / d;
    }
    std::vector<std::pair<std::size_t, double>> ranked(score.begin(), score.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto &a, const auto &b) { return a.second > b.second; });
    if (ranked.size() < wanted)
        shortfall = true;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < std::min(wanted, ranked.size()); ++i)
        out.push_back(ranked[i].first);
    return out;
}

} // namespace

BimQuery query_bim(const CkmDatabase &db, Vec3 q, std::size_t tx_size, std::size_t rx_size, std::size_t K)
{
    if (db.bim().empty())
        throw ContractViolation("query_bim: database has no BIM records");
    if (K < 1)
        throw ContractViolation("query_bim: K must be >= 1");
    const std::vector<Neighbor> nn = db.bim_index().nearest(q, K);

    BimQuery out;
    out.entry.location = q;
    if (nn.front().distance == 0.0)
    {
        const BimEntry &hit = db.bim()[nn.front().index];
        out.entry.tx_beams.assign(hit.tx_beams.begin(),
                                  hit.tx_beams.begin() + static_cast<long>(std::min(tx_size, hit.tx_beams.size())));
        out.entry.rx_beams.assign(hit.rx_beams.begin(),
                                  hit.rx_beams.begin() + static_cast<long>(std::min(rx_size, hit.rx_beams.size())));
        out.shortfall = hit.tx_beams.size() < tx_size || hit.rx_beams.size() < rx_size;
        return out;
    }
    std::vector<std::pair<const std::vector<std::size_t> *, double>> tx_lists, rx_lists;
    for (const Neighbor &n : nn)
    {
        tx_lists.emplace_back(&db.bim()[n.index].tx_beams, n.distance);
        rx_lists.emplace_back(&db.bim()[n.index].rx_beams, n.distance);
    }
    out.entry.tx_beams = pool_ranked(tx_lists, tx_size, out.shortfall);
    out.entry.rx_beams = pool_ranked(rx_lists, rx_size, out.shortfall);
    return out;
}

std::optional<std::size_t> codebook_size_from_fingerprint(const std::string &fp)
{
    // n_z x n_y @ spacing / O
    const auto x = fp.find('x');
    const auto at = fp.find('@');
    const auto slash = fp.rfind('/');
    if (x == std::string::npos || at == std::string::npos || slash == std::string::npos || !(x < at && at < slash))
        return std::nullopt;
    auto parse_count = [](std::string_view s) -> std::optional<std::size_t> {
        std::size_t v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v == 0)
            return std::nullopt;
        return v;
    };
    const std::string_view view(fp);
    const auto nz = parse_count(view.substr(0, x));
    const auto ny = parse_count(view.substr(x + 1, at - x - 1));
    const auto o = parse_count(view.substr(slash + 1));
    if (!nz || !ny || !o)
        return std::nullopt;
    return *nz * *ny * *o * *o;
}

void save_ckm(const CkmDatabase &db, std::ostream &out)
{
    const CkmMeta &m = db.meta();
    out << "CKMDB v1; kind=" << db.kind() << "; grid=" << m.grid.rx_zenith << ',' << m.grid.rx_azimuth << ','
        << m.grid.tx_zenith << ',' << m.grid.tx_azimuth << "; codebook_fp="
        << (m.tx_codebook.empty() ? "none" : m.tx_codebook) << ','
        << (m.rx_codebook.empty() ? "none" : m.rx_codebook) << "; K=" << m.K
        << "; records=" << db.cam().size() + db.bim().size() << '\n';
    auto location = [&](const Vec3 &p) {
        out << format_double(p.x) << ' ' << format_double(p.y) << ' ' << format_double(p.z) << " |";
    };
    for (const CamEntry &e : db.cam())
    {
        out << "C ";
        location(e.location);
        for (const CamCandidate &c : e.candidates)
            out << ' ' << c.tuple.aoa << ':' << c.tuple.aod << ':' << format_double(c.weight);
        out << '\n';
    }
    for (const BimEntry &e : db.bim())
    {
        out << "B ";
        location(e.location);
        for (std::size_t b : e.tx_beams)
            out << ' ' << b;
        out << " |";
        for (std::size_t b : e.rx_beams)
            out << ' ' << b;
        out << '\n';
    }
}

namespace
{

std::vector<std::string_view> tokens(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size())
    {
        while (i < s.size() && s[i] == ' ')
            ++i;
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ')
            ++i;
        if (i > start)
            out.push_back(s.substr(start, i - start));
    }
    return out;
}

template <typename T>
T parse_integer(std::string_view s, std::size_t line, const char *what)
{
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError(std::string("bad ") + what + " '" + std::string(s) + "'", line);
    return v;
}

double parse_real(std::string_view s, std::size_t line, const char *what)
{
    const auto v = parse_double(s);
    if (!v || !std::isfinite(*v))
        throw ParseError(std::string("bad ") + what + " '" + std::string(s) + "'", line);
    return *v;
}

Vec3 parse_location(std::string_view s, std::size_t line)
{
    const auto t = tokens(s);
    if (t.size() != 3)
        throw ParseError("expected three location coordinates", line);
    return {parse_real(t[0], line, "coordinate"), parse_real(t[1], line, "coordinate"),
            parse_real(t[2], line, "coordinate")};
}

std::vector<std::size_t> parse_index_list(std::string_view s, std::size_t line)
{
    std::vector<std::size_t> out;
    for (std::string_view t : tokens(s))
        out.push_back(parse_integer<std::size_t>(t, line, "beam index"));
    return out;
}

} // namespace

CkmDatabase load_ckm(std::istream &in, const std::string &expected_tx_codebook,
                     const std::string &expected_rx_codebook)
{
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("empty map file", 1);
    std::unordered_map<std::string, std::string> fields;
    {
        const auto parts = split(trim(line), ';');
        if (parts.empty() || trim(parts[0]) != "CKMDB v1")
            throw ParseError("unsupported map format (expected 'CKMDB v1')", 1);
        for (std::size_t i = 1; i < parts.size(); ++i)
        {
            const std::string_view kv = trim(parts[i]);
            const auto eq = kv.find('=');
            if (eq == std::string_view::npos)
                throw ParseError("malformed header field '" + std::string(kv) + "'", 1);
            fields[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
        }
        for (const char *key : {"kind", "grid", "codebook_fp", "K", "records"})
            if (!fields.count(key))
                throw ParseError(std::string("header is missing '") + key + "'", 1);
    }
    const std::string kind = fields["kind"];
    if (kind != "cam" && kind != "bim" && kind != "mixed")
        throw ParseError("unknown kind '" + kind + "'", 1);

    CkmMeta meta;
    {
        const auto g = split(fields["grid"], ',');
        if (g.size() != 4)
            throw ParseError("grid needs four counts", 1);
        meta.grid.rx_zenith = parse_integer<int>(trim(g[0]), 1, "grid count");
        meta.grid.rx_azimuth = parse_integer<int>(trim(g[1]), 1, "grid count");
        meta.grid.tx_zenith = parse_integer<int>(trim(g[2]), 1, "grid count");
        meta.grid.tx_azimuth = parse_integer<int>(trim(g[3]), 1, "grid count");
        const auto fp = split(fields["codebook_fp"], ',');
        if (fp.size() != 2)
            throw ParseError("codebook_fp needs tx and rx fingerprints", 1);
        meta.tx_codebook = std::string(trim(fp[0]));
        meta.rx_codebook = std::string(trim(fp[1]));
        meta.K = parse_integer<std::size_t>(fields["K"], 1, "K");
    }
    const std::size_t records = parse_integer<std::size_t>(fields["records"], 1, "record count");

    std::vector<CamEntry> cam;
    std::vector<BimEntry> bim;
    std::size_t line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty())
            continue;
        const auto parts = split(view, '|');
        if (view.size() < 2 || view[1] != ' ')
            throw ParseError("record must start with 'C ' or 'B '", line_no);
        if (view[0] == 'C')
        {
            if (parts.size() != 2)
                throw ParseError("CAM record needs 'C x y z | candidates'", line_no);
            CamEntry e;
            e.location = parse_location(parts[0].substr(2), line_no);
            for (std::string_view t : tokens(parts[1]))
            {
                const auto f = split(t, ':');
                if (f.size() != 3)
                    throw ParseError("candidate must be aoa:aod:weight", line_no);
                CamCandidate c;
                c.tuple.aoa = parse_integer<std::uint32_t>(f[0], line_no, "aoa index");
                c.tuple.aod = parse_integer<std::uint32_t>(f[1], line_no, "aod index");
                c.weight = parse_real(f[2], line_no, "weight");
                e.candidates.push_back(c);
            }
            cam.push_back(std::move(e));
        }
        else if (view[0] == 'B')
        {
            if (parts.size() != 3)
                throw ParseError("BIM record needs 'B x y z | tx beams | rx beams'", line_no);
            BimEntry e;
            e.location = parse_location(parts[0].substr(2), line_no);
            e.tx_beams = parse_index_list(parts[1], line_no);
            e.rx_beams = parse_index_list(parts[2], line_no);
            bim.push_back(std::move(e));
        }
        else
        {
            throw ParseError("unknown record type", line_no);
        }
    }
    if (cam.size() + bim.size() != records)
        throw ParseError("expected " + std::to_string(records) + " records, found " +
                             std::to_string(cam.size() + bim.size()) + " (truncated file?)",
                         line_no);
    if ((kind == "cam" && !bim.empty()) || (kind == "bim" && !cam.empty()))
        throw ParseError("records do not match kind=" + kind, line_no);
    if (!expected_tx_codebook.empty() && expected_tx_codebook != meta.tx_codebook)
        throw ParseError("tx codebook fingerprint mismatch: file has '" + meta.tx_codebook + "', expected '" +
                             expected_tx_codebook + "'",
                         1);
    if (!expected_rx_codebook.empty() && expected_rx_codebook != meta.rx_codebook)
        throw ParseError("rx codebook fingerprint mismatch: file has '" + meta.rx_codebook + "', expected '" +
                             expected_rx_codebook + "'",
                         1);
    try
    {
        return CkmDatabase(std::move(meta), std::move(cam), std::move(bim));
    }
    catch (const ContractViolation &e)
    {
        throw ParseError(e.what(), 0);
    }
}

} // namespace ckm
