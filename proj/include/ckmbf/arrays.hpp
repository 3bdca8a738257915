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
#include "ckmbf/numerics.hpp"

#include <compare>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace ckm
{

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Zenith in [0, pi] measured from +z, azimuth in [0, 2 pi) measured from +x towards +y.
struct AnglePair
{
    double zenith = kPi / 2;
    double azimuth = 0.0;

    friend bool operator==(const AnglePair &, const AnglePair &) = default;
};

bool valid_angle(const AnglePair &a);

// Angles of the unit direction d in the array frame. d must be nonzero.
AnglePair direction_angles(Vec3 d);

struct Path
{
    cx gain;        // linear amplitude, dimensionless
    AnglePair aoa;  // at the UE
    AnglePair aod;  // at the BS

    friend bool operator==(const Path &, const Path &) = default;
};

struct PathSet
{
    std::string id;
    Vec3 location;
    std::vector<Path> paths;

    friend bool operator==(const PathSet &, const PathSet &) = default;
};

// Uniform planar array in the y-z plane; element (m, n) sits at m*spacing along z and
// n*spacing along y (in wavelengths) and is stored at index m * n_y + n.
struct UpaGeometry
{
    int n_z = 1;
    int n_y = 1;
    double spacing = 0.5;

    std::size_t size() const { return static_cast<std::size_t>(n_z) * static_cast<std::size_t>(n_y); }
    void validate() const;

    friend bool operator==(const UpaGeometry &, const UpaGeometry &) = default;
};

// Pair of grid indices (receive tuple, transmit tuple) into an AngleGrid.
struct GridTuple
{
    std::uint32_t aoa = 0;
    std::uint32_t aod = 0;

    friend auto operator<=>(const GridTuple &, const GridTuple &) = default;
};

// Discrete angle dictionary. Zenith points sit at (i + 0.5) pi / I, azimuth points at 2 pi j / J.
// A one-sided index is i * J + j.
struct AngleGrid
{
    int rx_zenith = 1;   // I_r
    int rx_azimuth = 1;  // J_r
    int tx_zenith = 1;   // I_t
    int tx_azimuth = 1;  // J_t

    std::size_t rx_size() const { return static_cast<std::size_t>(rx_zenith) * rx_azimuth; }
    std::size_t tx_size() const { return static_cast<std::size_t>(tx_zenith) * tx_azimuth; }
    std::size_t tuple_count() const { return rx_size() * tx_size(); }

    AnglePair rx_angle(std::uint32_t index) const;
    AnglePair tx_angle(std::uint32_t index) const;
    std::uint32_t snap_rx(const AnglePair &a) const;
    std::uint32_t snap_tx(const AnglePair &a) const;

    // Azimuths phi and pi - phi give identical UPA responses; these map an index onto the
    // representative with cos(azimuth) >= 0 so that equivalent tuples compare equal.
    std::uint32_t canonical_rx(std::uint32_t index) const;
    std::uint32_t canonical_tx(std::uint32_t index) const;
    GridTuple canonical(GridTuple t) const { return {canonical_rx(t.aoa), canonical_tx(t.aod)}; }

    // Checks counts are positive and I_r J_r >= M_r, I_t J_t >= M_t.
    void validate(std::size_t receive_antennas, std::size_t transmit_antennas) const;

    friend bool operator==(const AngleGrid &, const AngleGrid &) = default;
};

double zenith_grid_point(int i, int count);
double azimuth_grid_point(int j, int count);
int nearest_zenith_index(double zenith, int count);
int nearest_azimuth_index(double azimuth, int count);
double wrapped_azimuth_distance(double a, double b);

// Unit-norm array response; every entry has modulus 1/sqrt(M).
ComplexVector steering_vector(const UpaGeometry &geom, const AnglePair &angle);

// Columns are steering vectors for each angle.
ComplexMatrix steering_matrix(const UpaGeometry &geom, std::span<const AnglePair> angles);

// H = sqrt(M_r M_t) sum_l gain_l a_r(aoa_l) a_t(aod_l)^H  (M_r x M_t).
ComplexMatrix synthesize_channel(const UpaGeometry &tx, const UpaGeometry &rx, const PathSet &paths);

// Replaces each path's angles by the nearest grid angles (per coordinate, azimuth wraps).
PathSet nearest_grid_angles(const AngleGrid &grid, const PathSet &paths);

} // namespace ckm
