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

#include "ckmbf/cam.hpp"

#include "ckmbf/errors.hpp"
#include "ckmbf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ckm
{

CandidateSteering candidate_steering(const CamEntry &entry, const AngleGrid &grid, const UpaGeometry &tx,
                                     const UpaGeometry &rx)
{
    std::vector<AnglePair> aod, aoa;
    for (const CamCandidate &c : entry.candidates)
    {
        aoa.push_back(grid.rx_angle(c.tuple.aoa));
        aod.push_back(grid.tx_angle(c.tuple.aod));
    }
    return {steering_matrix(tx, aod), steering_matrix(rx, aoa)};
}

std::vector<std::size_t> rank_by_projection(const ComplexMatrix &A, const Codebook &codebook)
{
    if (A.n_rows != codebook.antennas())
        throw ContractViolation("rank_by_projection: steering matrix does not match the codebook");
    const ComplexMatrix proj = codebook.beams.t() * A;  // |codebook| x L
    std::vector<double> score(codebook.size());
    for (std::size_t b = 0; b < score.size(); ++b)
        score[b] = arma::accu(arma::square(arma::abs(proj.row(b))));
    std::vector<std::size_t> order(score.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    return order;
}

namespace
{

std::vector<std::size_t> rank_window(const std::vector<std::size_t> &ranked, std::size_t width, std::size_t epoch)
{
    std::vector<std::size_t> out(width);
    for (std::size_t i = 0; i < width; ++i)
        out[i] = ranked[(epoch * width + i) % ranked.size()];
    return out;
}

// Leading `count` eigenvectors of B^H A A^H B, or the first unit vectors when that matrix is zero.
ComplexMatrix leading_directions(const ComplexMatrix &B, const ComplexMatrix &A, std::size_t count)
{
    const ComplexMatrix P = B.t() * A;
    ComplexMatrix G = P * P.t();
    G = 0.5 * (G + G.t());
    const EvdResult evd = evd_hermitian(G);
    if (!(evd.eigenvalues.front() > 0.0))
        return arma::eye<ComplexMatrix>(B.n_cols, count);
    return evd.eigenvectors.cols(0, count - 1);
}

} // namespace

HybridBeamformer design_training_beams(const CandidateSteering &cand, const Codebook &F, const Codebook &W,
                                       const SystemDims &dims, std::size_t epoch)
{
    dims.validate();
    if (cand.A_t.n_cols == 0 || cand.A_t.n_cols != cand.A_r.n_cols)
        throw ContractViolation("design_training_beams: need at least one candidate path");
    HybridBeamformer bf;
    bf.tx_beams = rank_window(rank_by_projection(cand.A_t, F), dims.M_t_rf, epoch);
    bf.rx_beams = rank_window(rank_by_projection(cand.A_r, W), dims.M_r_rf, epoch);
    bf.F_RF = F.select(bf.tx_beams);
    bf.W_RF = W.select(bf.rx_beams);

    const ComplexMatrix V1 = leading_directions(bf.F_RF, cand.A_t, dims.M_s);
    const ComplexMatrix U = leading_directions(bf.W_RF, cand.A_r, dims.M_r_rf);
    bf.F_BB = (1.0 / std::sqrt(static_cast<double>(dims.M_s))) * hermitian_inv_sqrt(bf.F_RF.t() * bf.F_RF) * V1;
    bf.W_BB = hermitian_inv_sqrt(bf.W_RF.t() * bf.W_RF) * U;
    return bf;
}

ComplexMatrix observation_block(const HybridBeamformer &bf, const CandidateSteering &cand)
{
    const ComplexMatrix tx = bf.F_BB.st() * bf.F_RF.st() * arma::conj(cand.A_t);
    const ComplexMatrix rx = bf.W_BB.t() * bf.W_RF.t() * cand.A_r;
    return khatri_rao(tx, rx);
}

std::size_t minimal_training_epochs(std::size_t L, std::size_t M_s)
{
    if (M_s == 0)
        throw ContractViolation("minimal_training_epochs: M_s must be positive");
    const std::size_t per_epoch = M_s * M_s;
    return std::max<std::size_t>(1, (L + per_epoch - 1) / per_epoch);
}

ComplexMatrix dft_pilots(std::size_t M_s)
{
    ComplexMatrix S(M_s, M_s);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M_s));
    for (std::size_t r = 0; r < M_s; ++r)
        for (std::size_t c = 0; c < M_s; ++c)
            S(r, c) = std::polar(scale, -kTwoPi * static_cast<double>((r * c) % M_s) / static_cast<double>(M_s));
    return S;
}

CamTrainingPlan build_training_plan(const CandidateSteering &cand, const Codebook &F, const Codebook &W,
                                    const SystemDims &dims)
{
    dims.validate();
    const std::size_t L = cand.A_t.n_cols;
    CamTrainingPlan plan;
    plan.steering = cand;
    plan.S = dft_pilots(dims.M_s);
    plan.base_epochs = minimal_training_epochs(L, dims.M_s);

    std::vector<ComplexMatrix> blocks;
    auto add_epoch = [&](std::size_t e) {
        plan.epochs.push_back(design_training_beams(cand, F, W, dims, e));
        blocks.push_back(observation_block(plan.epochs.back(), cand));
    };
    auto stack = [&]() {
        ComplexMatrix Q(blocks.size() * dims.M_s * dims.M_s, L);
        std::size_t row = 0;
        for (const ComplexMatrix &b : blocks)
        {
            Q.rows(row, row + b.n_rows - 1) = b;
            row += b.n_rows;
        }
        return Q;
    };

    for (std::size_t e = 0; e < plan.base_epochs; ++e)
        add_epoch(e);
    plan.Q = stack();
    while (condition_number(plan.Q) > kRankConditionLimit)
    {
        if (plan.repair_epochs == kMaxRepairEpochs)
            throw SingularityError("build_training_plan: observation matrix stays rank deficient after " +
                                       std::to_string(kMaxRepairEpochs) + " extra epochs",
                                   0.0);
        add_epoch(plan.base_epochs + plan.repair_epochs);
        ++plan.repair_epochs;
        plan.Q = stack();
    }
    return plan;
}

ComplexVector simulate_training(const ComplexMatrix &H_true, const CamTrainingPlan &plan, double snr,
                                std::uint64_t seed, bool noiseless)
{
    if (plan.epochs.empty())
        throw ContractViolation("simulate_training: empty plan");
    const std::size_t M_s = plan.S.n_rows;
    const double amplitude = std::sqrt(snr);
    Rng rng(seed);
    ComplexVector y(plan.epochs.size() * M_s * M_s);
    for (std::size_t e = 0; e < plan.epochs.size(); ++e)
    {
        const HybridBeamformer &bf = plan.epochs[e];
        if (H_true.n_rows != bf.W_RF.n_rows || H_true.n_cols != bf.F_RF.n_rows)
            throw ContractViolation("simulate_training: channel does not match the training beams");
        const ComplexMatrix combiner = bf.W_BB.t() * bf.W_RF.t();
        ComplexMatrix Y = amplitude * combiner * H_true * bf.F_RF * bf.F_BB * plan.S;
        if (!noiseless)
            Y += combiner * complex_gaussian_matrix(rng, H_true.n_rows, M_s, 1.0);
        const ComplexMatrix projected = Y * plan.S.t();
        y.subvec(e * M_s * M_s, (e + 1) * M_s * M_s - 1) = arma::vectorise(projected);
    }
    return y;
}

GainEstimate estimate_gains(const ComplexVector &y, const CamTrainingPlan &plan, double snr)
{
    if (y.n_elem != plan.Q.n_rows)
        throw ContractViolation("estimate_gains: observation length does not match the plan");
    if (!(snr > 0.0))
        throw ContractViolation("estimate_gains: snr must be positive");
    const double amplitude = std::sqrt(snr);
    GainEstimate out;
    out.gains = least_squares(plan.Q, y) / amplitude;
    out.residual_norm = arma::norm(y - amplitude * plan.Q * out.gains);
    return out;
}

ComplexMatrix reconstruct_channel(const CandidateSteering &cand, const ComplexVector &gains)
{
    if (gains.n_elem != cand.A_t.n_cols)
        throw ContractViolation("reconstruct_channel: gain count does not match the candidates");
    return cand.A_r * arma::diagmat(gains) * cand.A_t.t();
}

MseBounds mse_lower_bound(const CamTrainingPlan &plan, double snr)
{
    if (!(snr > 0.0))
        throw ContractViolation("mse_lower_bound: snr must be positive");
    double product_sum = 0.0;
    for (const HybridBeamformer &bf : plan.epochs)
    {
        const ComplexMatrix C = bf.W_RF * bf.W_BB;
        const ComplexMatrix gram = C.t() * C;
        if (arma::norm(gram - arma::eye<ComplexMatrix>(gram.n_rows, gram.n_cols), "fro") > 1e-8)
            throw ContractViolation("mse_lower_bound: training combiner is not whitening (W_BB^H W_RF^H W_RF W_BB != I)");
        const double t = arma::norm(plan.steering.A_t.t() * bf.F_RF * bf.F_BB, "fro");
        const double r = arma::norm(plan.steering.A_r.t() * C, "fro");
        product_sum += t * t * r * r;
    }
    const double L = static_cast<double>(plan.Q.n_cols);
    ComplexMatrix gram = plan.Q.t() * plan.Q;
    gram = 0.5 * (gram + gram.t());
    const RealVector lambda = evd_hermitian(gram).eigenvalues;
    if (!(lambda.back() > 0.0))
        throw SingularityError("mse_lower_bound: observation matrix is rank deficient", lambda.back());
    MseBounds out;
    out.exact = arma::accu(1.0 / lambda) / snr;
    out.trace_bound = L * L / (snr * arma::accu(lambda));
    out.product_bound = L * L / (snr * product_sum);
    return out;
}

} // namespace ckm
