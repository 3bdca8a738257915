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

#include "ckmbf/numerics.hpp"

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace ckm
{

using Rng = std::mt19937_64;

// splitmix64 finaliser; used to derive independent per-trial streams from one master seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) noexcept
{
    std::uint64_t s = mix_seed(master);
    for (std::uint64_t t : tags)
        s = mix_seed(s ^ mix_seed(t));
    return s;
}

// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
inline cx complex_gaussian(Rng &rng, double variance = 1.0)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * variance));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

inline ComplexMatrix complex_gaussian_matrix(Rng &rng, arma::uword rows, arma::uword cols, double variance = 1.0)
{
    ComplexMatrix out(rows, cols);
    for (arma::uword j = 0; j < cols; ++j)
        for (arma::uword i = 0; i < rows; ++i)
            out(i, j) = complex_gaussian(rng, variance);
    return out;
}

inline double uniform(Rng &rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

} // namespace ckm
