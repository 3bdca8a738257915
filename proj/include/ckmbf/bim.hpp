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

#include "ckmbf/hybrid.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace ckm
{

// Per-beam-pair sweep observations. Y(q, p) ~ sqrt(P) rho_p w_q^H H f_p.
struct SweepMeasurement
{
    ComplexMatrix Y;          // |W^| x |F^|
    std::vector<double> rho;  // normalisation of the transmit group that carried beam p
    std::size_t symbols = 0;  // N_tr
    double snr = 0.0;
    std::size_t group_size = 0;  // M_r_rf

    // Y with every column rescaled to the normalisation of a full group; equals Y when all groups are full.
    ComplexMatrix equalized() const;
};

// M_r_rf * ceil(|F^| / M_r_rf) * ceil(|W^| / M_r_rf)
std::size_t sweep_symbols(std::size_t tx_beams, std::size_t rx_beams, std::size_t M_r_rf);

// Sweeps every (tx group, rx group) pair of the candidate beams (columns of F_hat and W_hat).
// Groups hold M_r_rf beams; the last group is zero-padded.
SweepMeasurement sweep(const ComplexMatrix &H_true, const ComplexMatrix &F_hat, const ComplexMatrix &W_hat,
                       const SystemDims &dims, double snr, std::uint64_t seed, bool noiseless = false);

struct SubmatrixSelection
{
    std::vector<std::size_t> rows;  // ascending
    std::vector<std::size_t> cols;  // ascending
    double energy = 0.0;            // ||Y(rows, cols)||_F^2
    ComplexMatrix block;
};

// ||Y(rows, cols)||_F^2 summed in row-major order of the given index lists.
double submatrix_energy(const ComplexMatrix &Y, const std::vector<std::size_t> &rows,
                        const std::vector<std::size_t> &cols);

// Strongest `cols` columns by norm, then strongest `rows` rows restricted to them. Ties go to smaller indices.
SubmatrixSelection select_submatrix_greedy(const ComplexMatrix &Y, std::size_t cols, std::size_t rows);

// Exact maximiser of ||Y(rows, cols)||_F^2; ties go to the first (column subset, row subset) in lexicographic
// order. Throws BudgetExceeded above `budget` subset pairs. Serial and OpenMP versions agree exactly.
SubmatrixSelection select_submatrix_exhaustive(const ComplexMatrix &Y, std::size_t cols, std::size_t rows,
                                               std::uint64_t budget = kDefaultSelectionBudget);
SubmatrixSelection select_submatrix_exhaustive_serial(const ComplexMatrix &Y, std::size_t cols, std::size_t rows,
                                                      std::uint64_t budget = kDefaultSelectionBudget);

// Digital stage from measurements only: H~ = (W^H W)^(-1/2) Y_sel (F^H F)^(-1/2) / (rho sqrt(P)).
// tx_beams / rx_beams of the result are positions within F_hat / W_hat.
BasebandDesign beamformers_from_sweep(const SweepMeasurement &meas, const SubmatrixSelection &selection,
                                      const ComplexMatrix &F_hat, const ComplexMatrix &W_hat);

// (tx ranking by column norm, rx ranking by row norm), strongest first, ties by index.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> rank_beams(const ComplexMatrix &Y);

} // namespace ckm
