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

#include "ckmbf/geometry.hpp"

#include <cstddef>
#include <vector>

namespace ckm
{

struct Neighbor
{
    std::size_t index = 0;
    double distance = 0.0;

    friend bool operator==(const Neighbor &, const Neighbor &) = default;
};

inline constexpr std::size_t kBruteForceLimit = 10'000;

// Exact k-nearest-neighbour search over a fixed point set. Results are ordered by
// (distance, insertion index). Up to brute_force_limit points a linear scan is used,
// beyond that a uniform bucket grid; both give identical answers.
class SpatialIndex
{
public:
    SpatialIndex() = default;
    explicit SpatialIndex(std::vector<Vec3> points, std::size_t brute_force_limit = kBruteForceLimit);

    std::size_t size() const { return points_.size(); }
    const std::vector<Vec3> &points() const { return points_; }
    bool uses_buckets() const { return !cells_.empty(); }

    // min(k, size()) neighbours.
    std::vector<Neighbor> nearest(Vec3 q, std::size_t k) const;
    std::vector<Neighbor> nearest_brute_force(Vec3 q, std::size_t k) const;

private:
    std::vector<Neighbor> nearest_buckets(Vec3 q, std::size_t k) const;
    long cell_coordinate(double v, int axis) const;

    std::vector<Vec3> points_;
    Vec3 origin_;
    double cell_[3] = {1.0, 1.0, 1.0};
    long dims_[3] = {0, 0, 0};
    std::vector<std::vector<std::size_t>> cells_;
};

} // namespace ckm
