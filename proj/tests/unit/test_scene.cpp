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

#include "ckmbf/errors.hpp"
#include "ckmbf/scene.hpp"

#include <doctest.h>

#include <limits>

using namespace ckm;

namespace
{

Scene open_scene()
{
    Scene s;
    s.bs_position = {0.0, 0.0, 10.0};
    s.ue_region = {{-100.0, -100.0, 0.0}, {100.0, 100.0, 20.0}};
    return s;
}

// Wall in the plane y = 5 facing the BS at the origin.
Reflector side_wall(double loss_db)
{
    return {"wall", {-10.0, 5.0, 0.0}, {100.0, 0.0, 0.0}, {0.0, 0.0, 30.0}, loss_db};
}

double path_length(const Scene &s, const Path &p, double loss_db)
{
    return s.wavelength / (4.0 * kPi * std::abs(p.gain)) * std::pow(10.0, -loss_db / 20.0);
}

} // namespace

TEST_CASE("generate_scene_paths: free space gives one LoS path")
{
    const Scene s = open_scene();
    const Vec3 ue{40.0, 3.0, 1.5};
    const PathSet ps = generate_scene_paths(s, ue);
    REQUIRE(ps.paths.size() == 1);
    const double d = std::sqrt(40.0 * 40.0 + 9.0 + 8.5 * 8.5);
    CHECK(std::abs(ps.paths[0].gain) == doctest::Approx(s.wavelength / (4.0 * kPi * d)).epsilon(1e-13));
    const double phase = -2.0 * kPi * d / s.wavelength;
    CHECK(std::abs(ps.paths[0].gain / std::abs(ps.paths[0].gain) - std::polar(1.0, phase)) < 1e-6);
    CHECK(ps.paths[0].aod == direction_angles(ue - s.bs_position));
    CHECK(ps.paths[0].aoa == direction_angles(s.bs_position - ue));
}

TEST_CASE("generate_scene_paths: infinite loss reflector is effectively absent")
{
    Scene s = open_scene();
    s.reflectors.push_back(side_wall(std::numeric_limits<double>::infinity()));
    const PathSet ps = generate_scene_paths(s, {40.0, 0.0, 1.5});
    REQUIRE(ps.paths.size() == 2);
    CHECK(std::abs(ps.paths[1].gain) <= 1e-15 * std::abs(ps.paths[0].gain));
}

TEST_CASE("generate_scene_paths: reflected length equals the image distance")
{
    Scene s = open_scene();
    s.reflectors.push_back(side_wall(6.0));
    const Vec3 ue{40.0, 0.0, 1.5};
    const PathSet ps = generate_scene_paths(s, ue);
    REQUIRE(ps.paths.size() == 2);
    // BS mirrored across y = 5
    const double dx = 40.0, dy = 10.0, dz = 8.5;
    const double oracle = std::sqrt(dx * dx + dy * dy + dz * dz);
    CHECK(std::abs(path_length(s, ps.paths[1], 6.0) - oracle) <= 1e-9);
    // arrival from the +y side, departure towards +y
    CHECK(std::sin(ps.paths[1].aod.azimuth) > 0.0);
    CHECK(std::sin(ps.paths[1].aoa.azimuth) > 0.0);
}

TEST_CASE("generate_scene_paths: blockage and region checks")
{
    Scene s = open_scene();
    s.reflectors.push_back({"screen", {20.0, -5.0, 0.0}, {0.0, 10.0, 0.0}, {0.0, 0.0, 30.0}, 3.0});
    const PathSet ps = generate_scene_paths(s, {40.0, 0.0, 1.5});
    CHECK(ps.paths.empty());
    CHECK_THROWS_AS(generate_scene_paths(s, {500.0, 0.0, 1.5}), ContractViolation);
}

TEST_CASE("generate_scene_paths: deterministic and gains decrease with length")
{
    const Scene street = default_street_scene();
    CHECK_NOTHROW(street.validate());
    for (double x = 30.0; x <= 130.0; x += 7.5)
        for (double y = -18.0; y <= 18.0; y += 4.5)
        {
            const Vec3 ue{x, y, 1.5};
            const PathSet a = generate_scene_paths(street, ue);
            const PathSet b = generate_scene_paths(street, ue);
            CHECK(a == b);
        }

    Scene s = open_scene();
    double previous = std::numeric_limits<double>::infinity();
    for (double x = 5.0; x <= 95.0; x += 10.0)
    {
        const double g = std::abs(generate_scene_paths(s, {x, 0.0, 1.5}).paths.at(0).gain);
        CHECK(g < previous);
        previous = g;
    }
}

TEST_CASE("image_point: mirror twice is identity")
{
    const Reflector r = side_wall(0.0);
    const Vec3 p{3.0, -2.0, 7.0};
    const Vec3 once = image_point(r, p);
    CHECK(once.y == doctest::Approx(12.0));
    const Vec3 twice = image_point(r, once);
    CHECK(distance(p, twice) < 1e-12);
}
