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

#include "ckmbf/ckm_store.hpp"
#include "ckmbf/codebook.hpp"
#include "ckmbf/hybrid.hpp"

#include <cstdint>
#include <vector>

namespace ckm
{

// Candidate paths of one CAM entry as steering matrices. Gains throughout this module are the
// coefficients g in H = A_r Diag(g) A_t^H, i.e. g = sqrt(M_r M_t) * path gain.
struct CandidateSteering
{
    ComplexMatrix A_t;  // M_t x L
    ComplexMatrix A_r;  // M_r x L
};

CandidateSteering candidate_steering(const CamEntry &entry, const AngleGrid &grid, const UpaGeometry &tx,
                                     const UpaGeometry &rx);

// Beams ordered by ||A^H b||^2, strongest first, ties by smaller index.
std::vector<std::size_t> rank_by_projection(const ComplexMatrix &A, const Codebook &codebook);

// Training beamformers for one epoch. Epoch e uses the e-th window of M_rf consecutive ranks
// (wrapping around the codebook). The baseband stage uses equal power on the strongest M_s
// eigen-directions of the projected candidate subspace.
HybridBeamformer design_training_beams(const CandidateSteering &cand, const Codebook &F, const Codebook &W,
                                       const SystemDims &dims, std::size_t epoch = 0);

// Rows M_s^2 x L: khatri_rao(F_BB^T F_RF^T conj(A_t), W_BB^H W_RF^H A_r).
ComplexMatrix observation_block(const HybridBeamformer &bf, const CandidateSteering &cand);

struct CamTrainingPlan
{
    CandidateSteering steering;
    std::vector<HybridBeamformer> epochs;
    ComplexMatrix S;  // unitary M_s x M_s pilot block, reused every epoch
    ComplexMatrix Q;  // (epochs * M_s^2) x L
    std::size_t base_epochs = 0;
    std::size_t repair_epochs = 0;

    std::size_t symbols() const { return epochs.size() * S.n_rows; }
};

inline constexpr double kRankConditionLimit = 1e8;
inline constexpr std::size_t kMaxRepairEpochs = 4;

std::size_t minimal_training_epochs(std::size_t L, std::size_t M_s);

// ceil(L / M_s^2) epochs, plus up to kMaxRepairEpochs further windows while cond(Q) > kRankConditionLimit.
// Throws SingularityError if Q is still rank deficient afterwards.
CamTrainingPlan build_training_plan(const CandidateSteering &cand, const Codebook &F, const Codebook &W,
                                    const SystemDims &dims);

// Unitary DFT pilot block.
ComplexMatrix dft_pilots(std::size_t M_s);

// Stacked vec(Y_e S^H) over epochs, Y_e = sqrt(P) W_BB^H W_RF^H H F_RF F_BB S + W_BB^H W_RF^H N_e with
// unit-variance circular Gaussian N_e (M_r x M_s).
ComplexVector simulate_training(const ComplexMatrix &H_true, const CamTrainingPlan &plan, double snr,
                                std::uint64_t seed, bool noiseless = false);

struct GainEstimate
{
    ComplexVector gains;
    double residual_norm = 0.0;
};

// Least squares (QR) solution of y = sqrt(P) Q g.
GainEstimate estimate_gains(const ComplexVector &y, const CamTrainingPlan &plan, double snr);

// A_r Diag(g) A_t^H
ComplexMatrix reconstruct_channel(const CandidateSteering &cand, const ComplexVector &gains);

struct MseBounds
{
    double exact = 0.0;          // tr((Q^H Q)^-1) / P
    double trace_bound = 0.0;    // L^2 / (P tr(Q^H Q))
    double product_bound = 0.0;  // L^2 / (P sum_e ||A_t^H F_RF F_BB||^2 ||A_r^H W_RF W_BB||^2)
};

// Requires W_BB^H W_RF^H W_RF W_BB = I in every epoch; throws ContractViolation otherwise.
MseBounds mse_lower_bound(const CamTrainingPlan &plan, double snr);

} // namespace ckm
