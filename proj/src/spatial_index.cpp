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

#include "ckmbf/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ckm
{

namespace
{

bool closer(const Neighbor &a, const Neighbor &b)
{
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
}

double axis(Vec3 p, int a) { return a == 0 ? p.x : (a == 1 ? p.y : p.z); }

void keep_best(std::vector<Neighbor> &v, std::size_t k)
{
    if (v.size() > k)
    {
        std::nth_element(v.begin(), v.begin() + static_cast<long>(k), v.end(), closer);
        v.resize(k);
    }
    std::sort(v.begin(), v.end(), closer);
}

} // namespace

SpatialIndex::SpatialIndex(std::vector<Vec3> points, std::size_t brute_force_limit) : points_(std::move(points))
{
    if (points_.size() <= brute_force_limit || points_.empty())
        return;

    Vec3 lo = points_.front();
    Vec3 hi = points_.front();
    for (const Vec3 &p : points_)
    {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    origin_ = lo;

    // Roughly two points per cell, spread over the non-degenerate axes.
    const double extent[3] = {hi.x - lo.x, hi.y - lo.y, hi.z - lo.z};
    int active = 0;
    double volume = 1.0;
    for (double e : extent)
        if (e > 0.0)
        {
            ++active;
            volume *= e;
        }
    const double target_cells = std::max(1.0, static_cast<double>(points_.size()) / 2.0);
    const double side = active > 0 ? std::pow(volume / target_cells, 1.0 / active) : 1.0;
    std::size_t total = 1;
    for (int a = 0; a < 3; ++a)
    {
        if (extent[a] > 0.0 && side > 0.0)
        {
            dims_[a] = std::max(1L, std::min(4096L, static_cast<long>(std::ceil(extent[a] / side))));
            cell_[a] = extent[a] / static_cast<double>(dims_[a]);
        }
        else
        {
            dims_[a] = 1;
            cell_[a] = 1.0;
        }
        total *= static_cast<std::size_t>(dims_[a]);
    }
    cells_.assign(total, {});
    for (std::size_t i = 0; i < points_.size(); ++i)
    {
        const Vec3 &p = points_[i];
        const long cx = cell_coordinate(p.x, 0), cy = cell_coordinate(p.y, 1), cz = cell_coordinate(p.z, 2);
        cells_[static_cast<std::size_t>((cz * dims_[1] + cy) * dims_[0] + cx)].push_back(i);
    }
}

long SpatialIndex::cell_coordinate(double v, int a) const
{
    const double rel = (v - axis(origin_, a)) / cell_[a];
    const double c = std::floor(rel);
    if (!(c >= 0.0))
        return 0;
    return std::min(dims_[a] - 1, static_cast<long>(c));
}

std::vector<Neighbor> SpatialIndex::nearest(Vec3 q, std::size_t k) const
{
    return uses_buckets() ? nearest_buckets(q, k) : nearest_brute_force(q, k);
}

std::vector<Neighbor> SpatialIndex::nearest_brute_force(Vec3 q, std::size_t k) const
{
    std::vector<Neighbor> all(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i)
        all[i] = {i, distance(q, points_[i])};
    keep_best(all, std::min(k, all.size()));
    return all;
}

std::vector<Neighbor> SpatialIndex::nearest_buckets(Vec3 q, std::size_t k) const
{
    k = std::min(k, points_.size());
    if (k == 0)
        return {};
    const long centre[3] = {cell_coordinate(q.x, 0), cell_coordinate(q.y, 1), cell_coordinate(q.z, 2)};

    const double min_cell = std::min({cell_[0], cell_[1], cell_[2]});
    long max_ring = 0;
    for (int a = 0; a < 3; ++a)
        max_ring = std::max({max_ring, centre[a], dims_[a] - 1 - centre[a]});

    std::vector<Neighbor> found;
    for (long r = 0; r <= max_ring; ++r)
    {
        for (long z = centre[2] - r; z <= centre[2] + r; ++z)
        {
            if (z < 0 || z >= dims_[2])
                continue;
            for (long y = centre[1] - r; y <= centre[1] + r; ++y)
            {
                if (y < 0 || y >= dims_[1])
                    continue;
                for (long x = centre[0] - r; x <= centre[0] + r; ++x)
                {
                    if (x < 0 || x >= dims_[0])
                        continue;
                    const long ring = std::max({std::abs(x - centre[0]), std::abs(y - centre[1]), std::abs(z - centre[2])});
                    if (ring != r)
                        continue;
                    for (std::size_t i : cells_[static_cast<std::size_t>((z * dims_[1] + y) * dims_[0] + x)])
                        found.push_back({i, distance(q, points_[i])});
                }
            }
        }
        if (found.size() >= k)
        {
            keep_best(found, k);
            // Anything in ring r + 1 or beyond is at least r * min_cell away from q.
            if (found.back().distance < static_cast<double>(r) * min_cell)
                return found;
        }
    }
    keep_best(found, k);
    return found;
}

} // namespace ckm
