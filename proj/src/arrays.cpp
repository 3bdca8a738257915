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

#include "ckmbf/arrays.hpp"

#include "ckmbf/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ckm
{

bool valid_angle(const AnglePair &a)
{
    return std::isfinite(a.zenith) && std::isfinite(a.azimuth) && a.zenith >= 0.0 && a.zenith <= kPi &&
           a.azimuth >= 0.0 && a.azimuth < kTwoPi;
}

AnglePair direction_angles(Vec3 d)
{
    const double len = norm(d);
    if (!(len > 0.0))
        throw ContractViolation("direction_angles: zero direction");
    AnglePair out;
    out.zenith = std::acos(std::clamp(d.z / len, -1.0, 1.0));
    double az = std::atan2(d.y, d.x);
    if (az < 0.0)
        az += kTwoPi;
    if (az >= kTwoPi)
        az = 0.0;
    out.azimuth = az;
    return out;
}

void UpaGeometry::validate() const
{
    if (n_z < 1 || n_y < 1)
        throw ContractViolation("UpaGeometry: element counts must be >= 1");
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw ContractViolation("UpaGeometry: spacing must be positive");
}

double zenith_grid_point(int i, int count)
{
    return (static_cast<double>(i) + 0.5) * kPi / static_cast<double>(count);
}

double azimuth_grid_point(int j, int count)
{
    return kTwoPi * static_cast<double>(j) / static_cast<double>(count);
}

double wrapped_azimuth_distance(double a, double b)
{
    double d = std::fmod(std::abs(a - b), kTwoPi);
    return std::min(d, kTwoPi - d);
}

int nearest_zenith_index(double zenith, int count)
{
    const int guess = static_cast<int>(std::lround(zenith * count / kPi - 0.5));
    int best = std::clamp(guess, 0, count - 1);
    double best_d = std::abs(zenith - zenith_grid_point(best, count));
    for (int i = std::max(0, guess - 1); i <= std::min(count - 1, guess + 1); ++i)
    {
        const double d = std::abs(zenith - zenith_grid_point(i, count));
        if (d < best_d || (d == best_d && i < best))
            best = i, best_d = d;
    }
    return best;
}

int nearest_azimuth_index(double azimuth, int count)
{
    const long guess = std::lround(azimuth * count / kTwoPi);
    int best = static_cast<int>(((guess % count) + count) % count);
    double best_d = wrapped_azimuth_distance(azimuth, azimuth_grid_point(best, count));
    for (long g = guess - 1; g <= guess + 1; ++g)
    {
        const int j = static_cast<int>(((g % count) + count) % count);
        const double d = wrapped_azimuth_distance(azimuth, azimuth_grid_point(j, count));
        if (d < best_d || (d == best_d && j < best))
            best = j, best_d = d;
    }
    return best;
}

namespace
{

AnglePair grid_angle(std::uint32_t index, int zenith_count, int azimuth_count)
{
    const auto total = static_cast<std::uint32_t>(zenith_count * azimuth_count);
    if (index >= total)
        throw ContractViolation("AngleGrid: index out of range");
    const int i = static_cast<int>(index) / azimuth_count;
    const int j = static_cast<int>(index) % azimuth_count;
    return {zenith_grid_point(i, zenith_count), azimuth_grid_point(j, azimuth_count)};
}

std::uint32_t snap(const AnglePair &a, int zenith_count, int azimuth_count)
{
    const int i = nearest_zenith_index(a.zenith, zenith_count);
    const int j = nearest_azimuth_index(a.azimuth, azimuth_count);
    return static_cast<std::uint32_t>(i * azimuth_count + j);
}

std::uint32_t canonical_index(std::uint32_t index, int azimuth_count)
{
    if (azimuth_count % 2 != 0)
        return index;
    const int i = static_cast<int>(index) / azimuth_count;
    const int j = static_cast<int>(index) % azimuth_count;
    // back half: pi/2 < phi < 3 pi/2  <=>  J/4 < j < 3J/4
    if (4 * j > azimuth_count && 4 * j < 3 * azimuth_count)
    {
        const int mirrored = ((azimuth_count / 2 - j) % azimuth_count + azimuth_count) % azimuth_count;
        return static_cast<std::uint32_t>(i * azimuth_count + mirrored);
    }
    return index;
}

} // namespace

AnglePair AngleGrid::rx_angle(std::uint32_t index) const { return grid_angle(index, rx_zenith, rx_azimuth); }
AnglePair AngleGrid::tx_angle(std::uint32_t index) const { return grid_angle(index, tx_zenith, tx_azimuth); }
std::uint32_t AngleGrid::snap_rx(const AnglePair &a) const { return snap(a, rx_zenith, rx_azimuth); }
std::uint32_t AngleGrid::snap_tx(const AnglePair &a) const { return snap(a, tx_zenith, tx_azimuth); }
std::uint32_t AngleGrid::canonical_rx(std::uint32_t index) const { return canonical_index(index, rx_azimuth); }
std::uint32_t AngleGrid::canonical_tx(std::uint32_t index) const { return canonical_index(index, tx_azimuth); }

void AngleGrid::validate(std::size_t receive_antennas, std::size_t transmit_antennas) const
{
    if (rx_zenith < 1 || rx_azimuth < 1 || tx_zenith < 1 || tx_azimuth < 1)
        throw ContractViolation("AngleGrid: all grid counts must be >= 1");
    if (rx_size() < receive_antennas || tx_size() < transmit_antennas)
        throw ContractViolation("AngleGrid: grid must have at least as many points as antennas on each side");
}

ComplexVector steering_vector(const UpaGeometry &geom, const AnglePair &angle)
{
    const double u_z = std::cos(angle.zenith);
    const double u_y = std::sin(angle.zenith) * std::sin(angle.azimuth);
    const double scale = 1.0 / std::sqrt(static_cast<double>(geom.size()));
    ComplexVector a(geom.size());
    for (int m = 0; m < geom.n_z; ++m)
        for (int n = 0; n < geom.n_y; ++n)
        {
            const double phase = kTwoPi * geom.spacing * (m * u_z + n * u_y);
            a(static_cast<arma::uword>(m * geom.n_y + n)) = std::polar(scale, phase);
        }
    return a;
}

ComplexMatrix steering_matrix(const UpaGeometry &geom, std::span<const AnglePair> angles)
{
    ComplexMatrix A(geom.size(), angles.size());
    for (std::size_t l = 0; l < angles.size(); ++l)
        A.col(l) = steering_vector(geom, angles[l]);
    return A;
}

ComplexMatrix synthesize_channel(const UpaGeometry &tx, const UpaGeometry &rx, const PathSet &paths)
{
    ComplexMatrix H(rx.size(), tx.size(), arma::fill::zeros);
    if (paths.paths.empty())
        return H;
    const std::size_t L = paths.paths.size();
    std::vector<AnglePair> aoa(L), aod(L);
    ComplexVector gains(L);
    const double scale = std::sqrt(static_cast<double>(rx.size() * tx.size()));
    for (std::size_t l = 0; l < L; ++l)
    {
        aoa[l] = paths.paths[l].aoa;
        aod[l] = paths.paths[l].aod;
        gains(l) = scale * paths.paths[l].gain;
    }
    const ComplexMatrix Ar = steering_matrix(rx, aoa);
    const ComplexMatrix At = steering_matrix(tx, aod);
    return Ar * arma::diagmat(gains) * At.t();
}

PathSet nearest_grid_angles(const AngleGrid &grid, const PathSet &paths)
{
    PathSet out = paths;
    for (Path &p : out.paths)
    {
        p.aoa = grid.rx_angle(grid.snap_rx(p.aoa));
        p.aod = grid.tx_angle(grid.snap_tx(p.aod));
    }
    return out;
}

} // namespace ckm
