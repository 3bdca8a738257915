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
#include "ckmbf/codebook.hpp"
#include "ckmbf/geometry.hpp"
#include "ckmbf/hybrid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ckm
{

struct BaselineResult
{
    std::string method;
    ComplexMatrix H_hat;    // channel estimate (ls, omp)
    BasebandDesign design;  // beamformers (location)
    std::size_t N_tr = 0;
    bool feasible = true;   // false when N_tr > N; the block then carries no data

    std::vector<GridTuple> support;        // omp atoms, in selection order
    std::vector<double> residual_history;  // omp residual norm after each iteration
};

// M_t * ceil(M_r / M_r_rf)
std::size_t ls_training_symbols(const SystemDims &dims);

// Full-channel least squares: the transmitter steps through a unitary DFT basis one beam per symbol
// while the receiver steps through disjoint M_r_rf-groups of a unitary DFT combiner bank.
BaselineResult ls_full_estimate(const ComplexMatrix &H_true, const UpaGeometry &tx, const UpaGeometry &rx,
                                const SystemDims &dims, double snr, std::uint64_t seed, bool noiseless = false);

// 4 * ceil(L ln|grid| / M_r_rf)
std::size_t omp_default_measurements(std::size_t L, const AngleGrid &grid, std::size_t M_r_rf);
std::size_t omp_training_symbols(std::size_t measurements, std::size_t M_s);

inline constexpr std::uint64_t kOmpDictionaryBudget = 100'000'000;

// Grid OMP with random constant-modulus training beams, fixed L iterations and LS refit.
// `measurements` training symbols are rounded up to whole M_s-symbol blocks.
BaselineResult omp_grid_estimate(const ComplexMatrix &H_true, const AngleGrid &grid, const UpaGeometry &tx,
                                 const UpaGeometry &rx, std::size_t L, std::size_t measurements,
                                 const SystemDims &dims, double snr, std::uint64_t seed, bool noiseless = false,
                                 std::uint64_t dictionary_budget = kOmpDictionaryBudget);

// Codebook beams ordered by |b^H a(angle)|, strongest first, ties by index.
std::vector<std::size_t> beams_towards(const Codebook &codebook, const AnglePair &angle);

// Beams pointed along the line of sight between the reported positions, then one pilot epoch over the
// selected beams to fit the digital stage.
BaselineResult location_based_beams(const ComplexMatrix &H_true, Vec3 bs, Vec3 ue_reported, const Codebook &F,
                                    const Codebook &W, const SystemDims &dims, double snr, std::uint64_t seed,
                                    bool noiseless = false);

} // namespace ckm
