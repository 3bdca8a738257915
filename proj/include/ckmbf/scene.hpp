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
#include "ckmbf/geometry.hpp"

#include <string>
#include <vector>

namespace ckm
{

// Finite rectangle origin + s*edge_u + t*edge_v, s,t in [0, 1]. Reflects only towards the side
// of normal = edge_u x edge_v; blocks line-of-sight from both sides.
struct Reflector
{
    std::string name;
    Vec3 origin;
    Vec3 edge_u;
    Vec3 edge_v;
    double loss_db = 0.0;

    Vec3 normal() const;
    bool contains_projection(Vec3 p, double tolerance = 1e-12) const;
    bool blocks_segment(Vec3 a, Vec3 b) const;
};

struct Box
{
    Vec3 lo;
    Vec3 hi;

    bool contains(Vec3 p) const
    {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
    }
};

struct Scene
{
    Vec3 bs_position;
    std::vector<Reflector> reflectors;
    double wavelength = 299792458.0 / 28e9;
    Box ue_region;

    void validate() const;
};

// Mirror image of p across the reflector plane.
Vec3 image_point(const Reflector &r, Vec3 p);

// Deterministic single-bounce image-method path list for a UE position.
// Order: line-of-sight (if unblocked), then one specular path per reflector in scene order.
PathSet generate_scene_paths(const Scene &scene, Vec3 ue);

// Street canyon used by the experiments and examples: BS at one end of a street lined by
// two facades, ground, a far facade and two kiosks that shadow parts of the street.
Scene default_street_scene();

} // namespace ckm
