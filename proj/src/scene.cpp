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

#include "ckmbf/scene.hpp"

#include "ckmbf/errors.hpp"

#include <cmath>

namespace ckm
{

Vec3 Reflector::normal() const
{
    const Vec3 n = cross(edge_u, edge_v);
    const double len = norm(n);
    if (!(len > 0.0))
        throw ContractViolation("Reflector '" + name + "': degenerate rectangle");
    return (1.0 / len) * n;
}

bool Reflector::contains_projection(Vec3 p, double tolerance) const
{
    const Vec3 rel = p - origin;
    const double s = dot(rel, edge_u) / dot(edge_u, edge_u);
    const double t = dot(rel, edge_v) / dot(edge_v, edge_v);
    return s >= -tolerance && s <= 1.0 + tolerance && t >= -tolerance && t <= 1.0 + tolerance;
}

bool Reflector::blocks_segment(Vec3 a, Vec3 b) const
{
    const Vec3 n = normal();
    const double da = dot(a - origin, n);
    const double db = dot(b - origin, n);
    if ((da > 0.0 && db > 0.0) || (da < 0.0 && db < 0.0) || da == db)
        return false;
    const double t = da / (da - db);
    if (t <= 1e-12 || t >= 1.0 - 1e-12)
        return false;
    return contains_projection(a + t * (b - a), 0.0);
}

Vec3 image_point(const Reflector &r, Vec3 p)
{
    const Vec3 n = r.normal();
    return p - (2.0 * dot(p - r.origin, n)) * n;
}

void Scene::validate() const
{
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw ContractViolation("Scene: wavelength must be positive");
    if (ue_region.lo.x > ue_region.hi.x || ue_region.lo.y > ue_region.hi.y || ue_region.lo.z > ue_region.hi.z)
        throw ContractViolation("Scene: empty UE region");
    for (const Reflector &r : reflectors)
    {
        if (!(r.loss_db >= 0.0))
            throw ContractViolation("Scene: reflector '" + r.name + "' has negative loss");
        (void)r.normal();
    }
}

namespace
{

Path make_path(const Scene &scene, double length, double loss_db, Vec3 departure, Vec3 arrival)
{
    const double magnitude = scene.wavelength / (4.0 * kPi * length) * std::pow(10.0, -loss_db / 20.0);
    const double phase = -kTwoPi * std::fmod(length / scene.wavelength, 1.0);
    Path p;
    p.gain = std::polar(magnitude, phase);
    p.aod = direction_angles(departure);
    p.aoa = direction_angles(arrival);
    return p;
}

} // namespace

PathSet generate_scene_paths(const Scene &scene, Vec3 ue)
{
    if (!scene.ue_region.contains(ue))
        throw ContractViolation("generate_scene_paths: UE position outside the UE region");
    const Vec3 bs = scene.bs_position;

    PathSet out;
    out.location = ue;

    bool blocked = false;
    for (const Reflector &r : scene.reflectors)
        if (r.blocks_segment(bs, ue))
        {
            blocked = true;
            break;
        }
    if (!blocked)
        out.paths.push_back(make_path(scene, distance(bs, ue), 0.0, ue - bs, bs - ue));

    for (const Reflector &r : scene.reflectors)
    {
        const Vec3 n = r.normal();
        const double side_bs = dot(bs - r.origin, n);
        const double side_ue = dot(ue - r.origin, n);
        if (!(side_bs > 0.0 && side_ue > 0.0))
            continue;
        const Vec3 image = image_point(r, bs);
        const double t = side_bs / (side_bs + side_ue);  // |image side| = side_bs
        const Vec3 hit = image + t * (ue - image);
        if (!r.contains_projection(hit))
            continue;
        out.paths.push_back(make_path(scene, distance(image, ue), r.loss_db, hit - bs, hit - ue));
    }
    return out;
}

Scene default_street_scene()
{
    Scene s;
    s.bs_position = {0.0, 0.0, 10.0};
    s.wavelength = 299792458.0 / 28e9;
    s.ue_region = {{30.0, -18.0, 1.5}, {130.0, 18.0, 1.5}};
    s.reflectors = {
        {"facade_north", {0.0, 20.0, 0.0}, {200.0, 0.0, 0.0}, {0.0, 0.0, 30.0}, 6.0},
        {"facade_south", {0.0, -20.0, 0.0}, {0.0, 0.0, 30.0}, {200.0, 0.0, 0.0}, 6.0},
        {"ground", {0.0, -20.0, 0.0}, {200.0, 0.0, 0.0}, {0.0, 40.0, 0.0}, 12.0},
        {"facade_far", {160.0, -20.0, 0.0}, {0.0, 0.0, 30.0}, {0.0, 40.0, 0.0}, 8.0},
        {"kiosk_a", {55.0, -12.0, 0.0}, {0.0, 0.0, 14.0}, {0.0, 10.0, 0.0}, 6.0},
        {"kiosk_b", {90.0, 3.0, 0.0}, {0.0, 0.0, 14.0}, {0.0, 11.0, 0.0}, 6.0},
    };
    return s;
}

} // namespace ckm
