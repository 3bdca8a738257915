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

#include "ckmbf/codebook.hpp"
#include "ckmbf/numerics.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ckm
{

struct SystemDims
{
    std::size_t M_t = 0;
    std::size_t M_r = 0;
    std::size_t M_t_rf = 0;
    std::size_t M_r_rf = 0;
    std::size_t M_s = 0;
    std::size_t N = 0;   // symbols per coherence block
    double snr = 1.0;    // P / sigma^2, linear

    // M_r_rf <= M_t_rf, M_s = M_r_rf, M_t_rf < M_t, M_r_rf < M_r, snr > 0.
    void validate() const;
};

// Analog beam indices are recorded when the RF matrices come from a codebook.
struct HybridBeamformer
{
    ComplexMatrix F_RF;
    ComplexMatrix F_BB;
    ComplexMatrix W_RF;
    ComplexMatrix W_BB;
    std::vector<std::size_t> tx_beams;
    std::vector<std::size_t> rx_beams;

    // ||F_RF F_BB||_F^2
    double transmit_power() const;
};

struct BasebandDesign
{
    HybridBeamformer beamformer;
    double rate = 0.0;                    // bits/s/Hz
    std::vector<double> singular_values;  // of the whitened channel
    std::vector<double> power;            // water-filling coefficients
};

// H_e = (W_RF^H W_RF)^(-1/2) W_RF^H H F_RF
ComplexMatrix effective_channel(const ComplexMatrix &H, const ComplexMatrix &F_RF, const ComplexMatrix &W_RF);

// log2 det(I + snr H_e R_x H_e^H). Throws ContractViolation if R_x is not Hermitian PSD.
double rate(const ComplexMatrix &H_e, const ComplexMatrix &R_x, double snr);

// Optimal digital stage for fixed RF matrices: whiten, SVD, water-fill.
// Streams = min(M_r_rf, M_t_rf). An all-zero channel gets equal power on the leading modes.
BasebandDesign optimal_baseband(const ComplexMatrix &H, const ComplexMatrix &F_RF, const ComplexMatrix &W_RF,
                                double snr);

// Same, starting from an already whitened H~ = (W^H W)^(-1/2) W^H H F (F^H F)^(-1/2).
BasebandDesign baseband_from_whitened(const ComplexMatrix &H_tilde, const ComplexMatrix &F_RF,
                                      const ComplexMatrix &W_RF, double snr);

inline constexpr std::uint64_t kDefaultSelectionBudget = 1'000'000;

struct Algorithm1Result
{
    BasebandDesign design;
    std::uint64_t evaluated = 0;
};

// Exhaustive RF selection over C(|F|, M_t_rf) x C(|W|, M_r_rf) pairs. Ties go to the earliest pair in
// (tx subset, rx subset) lexicographic order. Throws BudgetExceeded above `budget` pairs.
// The OpenMP version returns exactly what the serial one does.
Algorithm1Result algorithm1(const ComplexMatrix &H, const Codebook &F, const Codebook &W, const SystemDims &dims,
                            std::uint64_t budget = kDefaultSelectionBudget);
Algorithm1Result algorithm1_serial(const ComplexMatrix &H, const Codebook &F, const Codebook &W,
                                   const SystemDims &dims, std::uint64_t budget = kDefaultSelectionBudget);

// Number of RF selection pairs algorithm1 would evaluate (saturating).
std::uint64_t algorithm1_pairs(std::size_t F_size, std::size_t W_size, const SystemDims &dims);

// mean(block_rates) (N - N_tr) / N
double effective_rate(std::span<const double> block_rates, std::size_t N_tr, std::size_t N);
double prelog_factor(std::size_t N_tr, std::size_t N);

} // namespace ckm
