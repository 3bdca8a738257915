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
#include "unit/test_support.hpp"

#include <doctest.h>

using namespace ckm;

namespace
{

AnglePair random_angle(Rng &rng)
{
    return {uniform(rng, 0.0, kPi), uniform(rng, 0.0, kTwoPi)};
}

PathSet random_paths(Rng &rng, int count)
{
    PathSet ps;
    for (int l = 0; l < count; ++l)
        ps.paths.push_back({complex_gaussian(rng), random_angle(rng), random_angle(rng)});
    return ps;
}

double circular(double a, double b)
{
    const double d = std::fmod(std::abs(a - b), kTwoPi);
    return std::min(d, kTwoPi - d);
}

} // namespace

TEST_CASE("steering_vector: scalar array and broadside")
{
    const ComplexVector a1 = steering_vector({1, 1, 0.5}, {0.7, 1.3});
    REQUIRE(a1.n_elem == 1);
    CHECK(std::abs(a1(0) - cx(1.0, 0.0)) < 1e-15);

    const UpaGeometry g{4, 3, 0.5};
    const ComplexVector b = steering_vector(g, {kPi / 2, 0.0});
    for (arma::uword i = 0; i < b.n_elem; ++i)
        CHECK(std::abs(b(i) - cx(1.0 / std::sqrt(12.0), 0.0)) < 1e-15);
}

TEST_CASE("steering_vector: 2x2 UPA matches a scalar phase loop")
{
    const UpaGeometry g{2, 2, 0.5};
    const AnglePair ang{kPi / 3, kPi / 4};
    const ComplexVector a = steering_vector(g, ang);
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
        {
            const double phase = 2.0 * M_PI * 0.5 * (m * std::cos(M_PI / 3) + n * std::sin(M_PI / 3) * std::sin(M_PI / 4));
            const cx expected = 0.5 * cx(std::cos(phase), std::sin(phase));
            CHECK(std::abs(a(static_cast<arma::uword>(m * 2 + n)) - expected) < 1e-12);
        }
}

TEST_CASE("steering_vector: unit norm and constant modulus")
{
    Rng rng(21);
    for (int trial = 0; trial < 300; ++trial)
    {
        const UpaGeometry g{1 + static_cast<int>(rng() % 8), 1 + static_cast<int>(rng() % 8), 0.5};
        const ComplexVector a = steering_vector(g, random_angle(rng));
        CHECK(std::abs(arma::norm(a) - 1.0) <= 1e-12);
        const double modulus = 1.0 / std::sqrt(static_cast<double>(g.size()));
        for (arma::uword i = 0; i < a.n_elem; ++i)
            CHECK(std::abs(std::abs(a(i)) - modulus) <= 1e-12);
    }
}

TEST_CASE("synthesize_channel: empty, single path and summation oracle")
{
    const UpaGeometry tx{4, 4, 0.5}, rx{2, 2, 0.5};
    PathSet empty;
    CHECK(arma::norm(synthesize_channel(tx, rx, empty), "fro") == 0.0);

    Rng rng(4);
    PathSet one;
    one.paths.push_back({1.0, random_angle(rng), random_angle(rng)});
    const ComplexMatrix H1 = synthesize_channel(tx, rx, one);
    CHECK(arma::norm(H1, "fro") == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(arma::rank(H1) == 1);

    const PathSet three = random_paths(rng, 3);
    const ComplexMatrix H = synthesize_channel(tx, rx, three);
    // triple loop: rows, columns, paths
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 16; ++c)
        {
            cx sum = 0.0;
            for (const Path &p : three.paths)
            {
                auto element = [](int idx, int ny, const AnglePair &a) {
                    const int m = idx / ny, n = idx % ny;
                    const double ph = M_PI * (m * std::cos(a.zenith) + n * std::sin(a.zenith) * std::sin(a.azimuth));
                    return cx(std::cos(ph), std::sin(ph));
                };
                // sqrt(MrMt) * (1/sqrt(Mr)) * (1/sqrt(Mt)) = 1
                sum += p.gain * element(r, 2, p.aoa) * std::conj(element(c, 4, p.aod));
            }
            CHECK(std::abs(H(r, c) - sum) < 1e-12);
        }
    CHECK(arma::rank(H) <= 3);
}

TEST_CASE("synthesize_channel: linear in gains")
{
    Rng rng(8);
    const UpaGeometry tx{3, 4, 0.5}, rx{2, 3, 0.5};
    for (int trial = 0; trial < 50; ++trial)
    {
        PathSet a = random_paths(rng, 4);
        PathSet b = a;
        PathSet sum = a;
        for (std::size_t l = 0; l < a.paths.size(); ++l)
        {
            b.paths[l].gain = complex_gaussian(rng);
            sum.paths[l].gain = a.paths[l].gain + b.paths[l].gain;
        }
        const ComplexMatrix lhs = synthesize_channel(tx, rx, sum);
        const ComplexMatrix rhs = synthesize_channel(tx, rx, a) + synthesize_channel(tx, rx, b);
        CHECK(arma::norm(lhs - rhs, "fro") <= 1e-12 * std::max(1.0, arma::norm(lhs, "fro")));
    }
}

TEST_CASE("nearest_grid_angles: fixed point and wrap-around")
{
    const AngleGrid grid{4, 8, 6, 12};
    PathSet ps;
    ps.paths.push_back({cx(0.3, -0.1), grid.rx_angle(13), grid.tx_angle(40)});
    const PathSet snapped = nearest_grid_angles(grid, ps);
    CHECK(snapped == ps);

    PathSet wrap;
    wrap.paths.push_back({1.0, {kPi / 2, kTwoPi - 1e-9}, {kPi / 2, kTwoPi - 1e-9}});
    const PathSet w = nearest_grid_angles(grid, wrap);
    CHECK(w.paths[0].aoa.azimuth == 0.0);
    CHECK(w.paths[0].aod.azimuth == 0.0);
    CHECK(w.paths[0].gain == cx(1.0, 0.0));
}

TEST_CASE("nearest_grid_angles: exhaustive scan oracle")
{
    Rng rng(17);
    const AngleGrid grid{3, 5, 4, 7};
    for (int trial = 0; trial < 500; ++trial)
    {
        PathSet ps;
        ps.paths.push_back({complex_gaussian(rng), random_angle(rng), random_angle(rng)});
        const PathSet out = nearest_grid_angles(grid, ps);
        CHECK(out.paths[0].gain == ps.paths[0].gain);

        auto check_side = [&](const AnglePair &original, const AnglePair &snapped, int I, int J) {
            double best_z = 1e300, best_a = 1e300;
            for (int i = 0; i < I; ++i)
                best_z = std::min(best_z, std::abs(original.zenith - (i + 0.5) * M_PI / I));
            for (int j = 0; j < J; ++j)
                best_a = std::min(best_a, circular(original.azimuth, 2.0 * M_PI * j / J));
            CHECK(std::abs(original.zenith - snapped.zenith) <= best_z + 1e-15);
            CHECK(circular(original.azimuth, snapped.azimuth) <= best_a + 1e-15);
        };
        check_side(ps.paths[0].aoa, out.paths[0].aoa, 3, 5);
        check_side(ps.paths[0].aod, out.paths[0].aod, 4, 7);
    }
}

TEST_CASE("AngleGrid: canonical mirror gives the same steering vector")
{
    const AngleGrid grid{4, 8, 4, 16};
    const UpaGeometry g{4, 4, 0.5};
    for (std::uint32_t idx = 0; idx < grid.tx_size(); ++idx)
    {
        const std::uint32_t c = grid.canonical_tx(idx);
        CHECK(std::cos(grid.tx_angle(c).azimuth) >= -1e-12);
        CHECK(grid.canonical_tx(c) == c);
        CHECK(arma::norm(steering_vector(g, grid.tx_angle(idx)) - steering_vector(g, grid.tx_angle(c))) < 1e-12);
    }
    CHECK_THROWS_AS(grid.tx_angle(static_cast<std::uint32_t>(grid.tx_size())), ContractViolation);
    CHECK_THROWS_AS(grid.validate(40, 16), ContractViolation);
    CHECK_NOTHROW(grid.validate(32, 64));
}

TEST_CASE("direction_angles: axes")
{
    const AnglePair up = direction_angles({0.0, 0.0, 2.0});
    CHECK(up.zenith == doctest::Approx(0.0));
    const AnglePair x = direction_angles({1.0, 0.0, 0.0});
    CHECK(x.zenith == doctest::Approx(kPi / 2));
    CHECK(x.azimuth == doctest::Approx(0.0));
    const AnglePair my = direction_angles({0.0, -3.0, 0.0});
    CHECK(my.azimuth == doctest::Approx(1.5 * kPi));
    CHECK(valid_angle(my));
}
