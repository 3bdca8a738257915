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

#include "ckmbf/hybrid.hpp"

#include "ckmbf/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ckm
{

void SystemDims::validate() const
{
    auto fail = [](const std::string &msg) { throw ContractViolation("SystemDims: " + msg); };
    if (M_t == 0 || M_r == 0 || M_t_rf == 0 || M_r_rf == 0 || M_s == 0)
        fail("all antenna and chain counts must be positive");
    if (M_r_rf > M_t_rf)
        fail("M_r_rf must not exceed M_t_rf");
    if (M_s != M_r_rf)
        fail("M_s must equal M_r_rf");
    if (M_t_rf >= M_t)
        fail("M_t_rf must be smaller than M_t");
    if (M_r_rf >= M_r)
        fail("M_r_rf must be smaller than M_r");
    if (!(snr > 0.0) || !std::isfinite(snr))
        fail("snr must be positive and finite");
}

double HybridBeamformer::transmit_power() const
{
    const double n = arma::norm(F_RF * F_BB, "fro");
    return n * n;
}

ComplexMatrix effective_channel(const ComplexMatrix &H, const ComplexMatrix &F_RF, const ComplexMatrix &W_RF)
{
    if (H.n_rows != W_RF.n_rows || H.n_cols != F_RF.n_rows)
        throw ContractViolation("effective_channel: dimension mismatch");
    const ComplexMatrix whiten = hermitian_inv_sqrt(W_RF.t() * W_RF);
    return whiten * W_RF.t() * H * F_RF;
}

double rate(const ComplexMatrix &H_e, const ComplexMatrix &R_x, double snr)
{
    if (R_x.n_rows != H_e.n_cols || R_x.n_cols != H_e.n_cols)
        throw ContractViolation("rate: R_x must be square with size H_e.n_cols");
    if (!is_hermitian(R_x, 1e-10))
        throw ContractViolation("rate: R_x is not Hermitian");
    if (!(snr >= 0.0))
        throw ContractViolation("rate: snr must be nonnegative");
    const RealVector rx_eig = evd_hermitian(R_x).eigenvalues;
    const double scale = std::max(1.0, std::abs(rx_eig.front()));
    if (rx_eig.back() < -1e-10 * scale)
        throw ContractViolation("rate: R_x is not positive semidefinite");

    // log det(I + snr H R H^H) = sum log(1 + snr lambda_i)
    const ComplexMatrix G = H_e * R_x * H_e.t();
    const RealVector lambda = evd_hermitian(0.5 * (G + G.t())).eigenvalues;
    double nats = 0.0;
    for (double l : lambda)
        nats += std::log1p(snr * std::max(l, 0.0));
    return nats / std::log(2.0);
}

BasebandDesign baseband_from_whitened(const ComplexMatrix &H_tilde, const ComplexMatrix &F_RF,
                                      const ComplexMatrix &W_RF, double snr)
{
    if (H_tilde.n_rows != W_RF.n_cols || H_tilde.n_cols != F_RF.n_cols)
        throw ContractViolation("baseband_from_whitened: dimension mismatch");
    const ComplexMatrix F_inv = hermitian_inv_sqrt(F_RF.t() * F_RF);
    const ComplexMatrix W_inv = hermitian_inv_sqrt(W_RF.t() * W_RF);
    const SvdResult dec = svd(H_tilde);
    const std::size_t streams = std::min(H_tilde.n_rows, H_tilde.n_cols);

    std::vector<double> sigma(dec.singular_values.begin(), dec.singular_values.begin() + streams);
    std::vector<double> rho;
    if (std::all_of(sigma.begin(), sigma.end(), [](double s) { return s == 0.0; }))
        rho.assign(streams, 1.0 / static_cast<double>(streams));
    else
        rho = water_filling(sigma, snr).coefficients;

    arma::cx_vec gamma_root(streams);
    for (std::size_t i = 0; i < streams; ++i)
        gamma_root(i) = std::sqrt(rho[i]);

    BasebandDesign out;
    out.beamformer.F_RF = F_RF;
    out.beamformer.W_RF = W_RF;
    out.beamformer.F_BB = F_inv * dec.V.cols(0, streams - 1) * arma::diagmat(gamma_root);
    out.beamformer.W_BB = W_inv * dec.U.cols(0, streams - 1);
    out.rate = allocation_rate(sigma, rho, snr);
    out.singular_values = std::move(sigma);
    out.power = std::move(rho);
    return out;
}

BasebandDesign optimal_baseband(const ComplexMatrix &H, const ComplexMatrix &F_RF, const ComplexMatrix &W_RF,
                                double snr)
{
    if (H.n_rows != W_RF.n_rows || H.n_cols != F_RF.n_rows)
        throw ContractViolation("optimal_baseband: dimension mismatch");
    const ComplexMatrix F_inv = hermitian_inv_sqrt(F_RF.t() * F_RF);
    const ComplexMatrix W_inv = hermitian_inv_sqrt(W_RF.t() * W_RF);
    const ComplexMatrix H_tilde = W_inv * W_RF.t() * H * F_RF * F_inv;
    return baseband_from_whitened(H_tilde, F_RF, W_RF, snr);
}

std::uint64_t algorithm1_pairs(std::size_t F_size, std::size_t W_size, const SystemDims &dims)
{
    return saturating_mul(binomial(F_size, dims.M_t_rf), binomial(W_size, dims.M_r_rf));
}

namespace
{

struct Candidate
{
    double value = -std::numeric_limits<double>::infinity();
    std::uint64_t index = std::numeric_limits<std::uint64_t>::max();

    // Larger value wins; equal values go to the smaller enumeration index.
    void offer(double v, std::uint64_t i)
    {
        if (v > value || (v == value && i < index))
        {
            value = v;
            index = i;
        }
    }
};

// Whitened receive side (W^H W)^(-1/2) W^H H for every rx subset, and F (F^H F)^(-1/2) per tx subset.
struct Algorithm1Setup
{
    std::vector<std::vector<std::size_t>> tx_subsets;
    std::vector<std::vector<std::size_t>> rx_subsets;
    std::vector<ComplexMatrix> rx_whitened;  // empty if the rx subset is rank deficient
    std::uint64_t pairs = 0;
};

Algorithm1Setup prepare(const ComplexMatrix &H, const Codebook &F, const Codebook &W, const SystemDims &dims,
                        std::uint64_t budget)
{
    dims.validate();
    if (H.n_rows != dims.M_r || H.n_cols != dims.M_t)
        throw ContractViolation("algorithm1: channel must be M_r x M_t");
    if (F.antennas() != dims.M_t || W.antennas() != dims.M_r)
        throw ContractViolation("algorithm1: codebook sizes do not match the arrays");
    if (F.size() < dims.M_t_rf || W.size() < dims.M_r_rf)
        throw ContractViolation("algorithm1: codebook has fewer beams than RF chains");
    Algorithm1Setup s;
    s.pairs = algorithm1_pairs(F.size(), W.size(), dims);
    if (s.pairs > budget)
        throw BudgetExceeded("algorithm1: " + std::to_string(s.pairs) + " RF selection pairs exceed the budget of " +
                             std::to_string(budget) + "; use desk-scale dimensions or a smaller codebook");
    s.tx_subsets = enumerate_selections(F.size(), dims.M_t_rf, budget);
    s.rx_subsets = enumerate_selections(W.size(), dims.M_r_rf, budget);
    s.rx_whitened.resize(s.rx_subsets.size());
    for (std::size_t j = 0; j < s.rx_subsets.size(); ++j)
    {
        const ComplexMatrix W_RF = W.select(s.rx_subsets[j]);
        try
        {
            s.rx_whitened[j] = hermitian_inv_sqrt(W_RF.t() * W_RF) * W_RF.t() * H;
        }
        catch (const SingularityError &)
        {
        }
    }
    return s;
}

// Rate in nats of every rx subset paired with tx subset i, offered to `best`.
void scan_tx_subset(const Algorithm1Setup &s, const Codebook &F, double snr, std::size_t i, Candidate &best)
{
    const ComplexMatrix F_RF = F.select(s.tx_subsets[i]);
    ComplexMatrix G;
    try
    {
        G = F_RF * hermitian_inv_sqrt(F_RF.t() * F_RF);
    }
    catch (const SingularityError &)
    {
        return;
    }
    RealVector sigma;
    std::vector<double> sv;
    for (std::size_t j = 0; j < s.rx_subsets.size(); ++j)
    {
        if (s.rx_whitened[j].is_empty())
            continue;
        const ComplexMatrix H_tilde = s.rx_whitened[j] * G;
        arma::svd(sigma, H_tilde);
        sv.assign(sigma.begin(), sigma.end());
        double value = 0.0;
        if (std::any_of(sv.begin(), sv.end(), [](double x) { return x > 0.0; }))
            value = allocation_rate(sv, water_filling(sv, snr).coefficients, snr);
        best.offer(value, static_cast<std::uint64_t>(i) * s.rx_subsets.size() + j);
    }
}

Algorithm1Result finish(const Algorithm1Setup &s, const ComplexMatrix &H, const Codebook &F, const Codebook &W,
                        const SystemDims &dims, const Candidate &best)
{
    if (best.index == std::numeric_limits<std::uint64_t>::max())
        throw SingularityError("algorithm1: every RF selection is rank deficient", 0.0);
    const std::size_t i = static_cast<std::size_t>(best.index / s.rx_subsets.size());
    const std::size_t j = static_cast<std::size_t>(best.index % s.rx_subsets.size());
    Algorithm1Result out;
    out.design = optimal_baseband(H, F.select(s.tx_subsets[i]), W.select(s.rx_subsets[j]), dims.snr);
    out.design.beamformer.tx_beams = s.tx_subsets[i];
    out.design.beamformer.rx_beams = s.rx_subsets[j];
    out.evaluated = s.pairs;
    return out;
}

} // namespace

Algorithm1Result algorithm1_serial(const ComplexMatrix &H, const Codebook &F, const Codebook &W,
                                   const SystemDims &dims, std::uint64_t budget)
{
    const Algorithm1Setup s = prepare(H, F, W, dims, budget);
    Candidate best;
    for (std::size_t i = 0; i < s.tx_subsets.size(); ++i)
        scan_tx_subset(s, F, dims.snr, i, best);
    return finish(s, H, F, W, dims, best);
}

Algorithm1Result algorithm1(const ComplexMatrix &H, const Codebook &F, const Codebook &W, const SystemDims &dims,
                            std::uint64_t budget)
{
    const Algorithm1Setup s = prepare(H, F, W, dims, budget);
    Candidate best;
    const long count = static_cast<long>(s.tx_subsets.size());
#pragma omp parallel
    {
        Candidate local;
#pragma omp for schedule(dynamic, 4) nowait
        for (long i = 0; i < count; ++i)
            scan_tx_subset(s, F, dims.snr, static_cast<std::size_t>(i), local);
#pragma omp critical(ckm_algorithm1_reduce)
        best.offer(local.value, local.index);
    }
    return finish(s, H, F, W, dims, best);
}

double prelog_factor(std::size_t N_tr, std::size_t N)
{
    if (N == 0)
        throw ContractViolation("prelog_factor: N must be positive");
    if (N_tr > N)
        throw ContractViolation("prelog_factor: N_tr (" + std::to_string(N_tr) + ") exceeds N (" + std::to_string(N) +
                                ")");
    return static_cast<double>(N - N_tr) / static_cast<double>(N);
}

double effective_rate(std::span<const double> block_rates, std::size_t N_tr, std::size_t N)
{
    const double factor = prelog_factor(N_tr, N);
    if (block_rates.empty())
        throw ContractViolation("effective_rate: no block rates");
    const double mean = std::accumulate(block_rates.begin(), block_rates.end(), 0.0) /
                        static_cast<double>(block_rates.size());
    return mean * factor;
}

} // namespace ckm
