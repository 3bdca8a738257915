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

#include "ckmbf/baselines.hpp"

#include "ckmbf/bim.hpp"
#include "ckmbf/errors.hpp"
#include "ckmbf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ckm
{

namespace
{

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

} // namespace

std::size_t ls_training_symbols(const SystemDims &dims)
{
    return dims.M_t * ceil_div(dims.M_r, dims.M_r_rf);
}

BaselineResult ls_full_estimate(const ComplexMatrix &H_true, const UpaGeometry &tx, const UpaGeometry &rx,
                                const SystemDims &dims, double snr, std::uint64_t seed, bool noiseless)
{
    dims.validate();
    if (H_true.n_rows != dims.M_r || H_true.n_cols != dims.M_t || tx.size() != dims.M_t || rx.size() != dims.M_r)
        throw ContractViolation("ls_full_estimate: dimension mismatch");
    BaselineResult out;
    out.method = "ls";
    out.N_tr = ls_training_symbols(dims);
    if (dims.N != 0 && out.N_tr > dims.N)
    {
        out.feasible = false;
        return out;
    }

    const ComplexMatrix D_t = build_kronecker_dft(tx, 1).beams;
    const ComplexMatrix D_r = build_kronecker_dft(rx, 1).beams;
    const double amplitude = std::sqrt(snr);
    Rng rng(seed);

    // Z(q, k) = sqrt(P) d_r,q^H H d_t,k + noise; the last receive group may be partial.
    ComplexMatrix Z(dims.M_r, dims.M_t);
    const std::size_t groups = ceil_div(dims.M_r, dims.M_r_rf);
    for (std::size_t j = 0; j < groups; ++j)
    {
        const std::size_t r0 = j * dims.M_r_rf;
        const std::size_t r1 = std::min(dims.M_r, r0 + dims.M_r_rf);
        const ComplexMatrix Wj = D_r.cols(r0, r1 - 1);
        ComplexMatrix block = amplitude * Wj.t() * H_true * D_t;
        if (!noiseless)
            block += Wj.t() * complex_gaussian_matrix(rng, dims.M_r, dims.M_t, 1.0);
        Z.rows(r0, r1 - 1) = block;
    }
    out.H_hat = D_r * Z * D_t.t() / amplitude;
    return out;
}

std::size_t omp_default_measurements(std::size_t L, const AngleGrid &grid, std::size_t M_r_rf)
{
    const double atoms = static_cast<double>(grid.tuple_count());
    return 4 * static_cast<std::size_t>(std::ceil(static_cast<double>(L) * std::log(atoms) / static_cast<double>(M_r_rf)));
}

std::size_t omp_training_symbols(std::size_t measurements, std::size_t M_s)
{
    return ceil_div(measurements, M_s) * M_s;
}

namespace
{

ComplexMatrix random_constant_modulus(Rng &rng, std::size_t rows, std::size_t cols)
{
    ComplexMatrix M(rows, cols);
    const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
    for (std::size_t c = 0; c < cols; ++c)
        for (std::size_t r = 0; r < rows; ++r)
            M(r, c) = std::polar(scale, uniform(rng, 0.0, kTwoPi));
    return M;
}

} // namespace

BaselineResult omp_grid_estimate(const ComplexMatrix &H_true, const AngleGrid &grid, const UpaGeometry &tx,
                                 const UpaGeometry &rx, std::size_t L, std::size_t measurements,
                                 const SystemDims &dims, double snr, std::uint64_t seed, bool noiseless,
                                 std::uint64_t dictionary_budget)
{
    dims.validate();
    if (H_true.n_rows != dims.M_r || H_true.n_cols != dims.M_t || tx.size() != dims.M_t || rx.size() != dims.M_r)
        throw ContractViolation("omp_grid_estimate: dimension mismatch");
    if (measurements < L)
        throw ContractViolation("omp_grid_estimate: need at least L measurements");
    grid.validate(dims.M_r, dims.M_t);
    if (saturating_mul(grid.rx_size(), grid.tx_size()) > dictionary_budget)
        throw BudgetExceeded("omp_grid_estimate: a dictionary of " + std::to_string(grid.tuple_count()) +
                             " atoms exceeds the budget; use a coarser angle grid");

    BaselineResult out;
    out.method = "omp";
    const std::size_t T = omp_training_symbols(std::max<std::size_t>(measurements, 1), dims.M_s);
    out.N_tr = T;
    out.H_hat.zeros(dims.M_r, dims.M_t);
    if (dims.N != 0 && out.N_tr > dims.N)
    {
        out.feasible = false;
        return out;
    }
    if (L == 0)
        return out;

    Rng rng(seed);
    const std::size_t m = dims.M_r_rf;
    const double amplitude = std::sqrt(snr);

    // Per symbol k: unit-norm transmit vector f_k and whitened combiner G_k = (W^H W)^(-1/2) W^H.
    const ComplexMatrix Ftr = random_constant_modulus(rng, dims.M_t, T);
    std::vector<ComplexMatrix> G(T);
    ComplexVector y(T * m);
    for (std::size_t k = 0; k < T; ++k)
    {
        const ComplexMatrix Wk = random_constant_modulus(rng, dims.M_r, m);
        G[k] = hermitian_inv_sqrt(Wk.t() * Wk) * Wk.t();
        ComplexVector yk = amplitude * G[k] * H_true * Ftr.col(k);
        if (!noiseless)
            yk += complex_gaussian_matrix(rng, m, 1, 1.0).col(0);
        y.subvec(k * m, (k + 1) * m - 1) = yk;
    }

    std::vector<AnglePair> rx_angles(grid.rx_size()), tx_angles(grid.tx_size());
    for (std::size_t i = 0; i < rx_angles.size(); ++i)
        rx_angles[i] = grid.rx_angle(static_cast<std::uint32_t>(i));
    for (std::size_t i = 0; i < tx_angles.size(); ++i)
        tx_angles[i] = grid.tx_angle(static_cast<std::uint32_t>(i));
    const ComplexMatrix A_r = steering_matrix(rx, rx_angles);
    const ComplexMatrix A_t = steering_matrix(tx, tx_angles);

    // Atom (i_r, i_t) observed at symbol k: sqrt(P) (G_k a_r) (a_t^H f_k).
    const ComplexMatrix Tx = A_t.t() * Ftr;  // tx atoms x T
    arma::mat rx_norm(A_r.n_cols, T);        // ||G_k a_r||^2
    std::vector<ComplexMatrix> GA(T);
    for (std::size_t k = 0; k < T; ++k)
    {
        GA[k] = G[k] * A_r;  // m x rx atoms
        rx_norm.col(k) = arma::sum(arma::square(arma::abs(GA[k])), 0).t();
    }
    const arma::mat atom_norm2 = rx_norm * arma::square(arma::abs(Tx)).t();  // rx atoms x tx atoms

    auto atom_column = [&](GridTuple t) {
        ComplexVector col(T * m);
        for (std::size_t k = 0; k < T; ++k)
            col.subvec(k * m, (k + 1) * m - 1) = amplitude * GA[k].col(t.aoa) * Tx(t.aod, k);
        return col;
    };

    ComplexVector residual = y;
    ComplexMatrix Phi(T * m, 0);
    ComplexVector coeff;
    for (std::size_t it = 0; it < L; ++it)
    {
        // C(i_r, i_t) = sum_k (a_r^H G_k^H r_k) conj(a_t^H f_k)
        ComplexMatrix B(A_r.n_cols, T);
        for (std::size_t k = 0; k < T; ++k)
            B.col(k) = GA[k].t() * residual.subvec(k * m, (k + 1) * m - 1);
        const ComplexMatrix C = B * Tx.t();
        double best = -1.0;
        GridTuple pick;
        for (arma::uword it_t = 0; it_t < C.n_cols; ++it_t)
            for (arma::uword ir = 0; ir < C.n_rows; ++ir)
            {
                const double n2 = atom_norm2(ir, it_t);
                if (!(n2 > 0.0))
                    continue;
                const double score = std::norm(C(ir, it_t)) / n2;
                const GridTuple cand{static_cast<std::uint32_t>(ir), static_cast<std::uint32_t>(it_t)};
                if (score > best || (score == best && cand < pick))
                {
                    best = score;
                    pick = cand;
                }
            }
        out.support.push_back(pick);
        Phi.insert_cols(Phi.n_cols, atom_column(pick));
        try
        {
            coeff = least_squares(Phi, y);
        }
        catch (const SingularityError &)
        {
            // the new atom is a duplicate of an earlier one; keep the previous fit
            Phi.shed_col(Phi.n_cols - 1);
            out.support.pop_back();
            out.residual_history.push_back(arma::norm(residual));
            break;
        }
        residual = y - Phi * coeff;
        out.residual_history.push_back(arma::norm(residual));
    }

    for (std::size_t i = 0; i < out.support.size(); ++i)
    {
        const GridTuple t = out.support[i];
        out.H_hat += coeff(i) * A_r.col(t.aoa) * A_t.col(t.aod).t();
    }
    return out;
}

std::vector<std::size_t> beams_towards(const Codebook &codebook, const AnglePair &angle)
{
    const ComplexVector a = steering_vector(codebook.geom, angle);
    const arma::vec score = arma::abs(codebook.beams.t() * a);
    std::vector<std::size_t> order(codebook.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return score(x) > score(y); });
    return order;
}

BaselineResult location_based_beams(const ComplexMatrix &H_true, Vec3 bs, Vec3 ue_reported, const Codebook &F,
                                    const Codebook &W, const SystemDims &dims, double snr, std::uint64_t seed,
                                    bool noiseless)
{
    dims.validate();
    if (distance(bs, ue_reported) == 0.0)
        throw ContractViolation("location_based_beams: BS and UE positions coincide");
    const AnglePair aod = direction_angles(ue_reported - bs);
    const AnglePair aoa = direction_angles(bs - ue_reported);
    std::vector<std::size_t> tx = beams_towards(F, aod);
    std::vector<std::size_t> rx = beams_towards(W, aoa);
    tx.resize(dims.M_t_rf);
    rx.resize(dims.M_r_rf);

    const ComplexMatrix F_hat = F.select(tx);
    const ComplexMatrix W_hat = W.select(rx);
    const SweepMeasurement meas = sweep(H_true, F_hat, W_hat, dims, snr, seed, noiseless);
    SubmatrixSelection all;
    all.rows.resize(dims.M_r_rf);
    all.cols.resize(dims.M_t_rf);
    std::iota(all.rows.begin(), all.rows.end(), 0);
    std::iota(all.cols.begin(), all.cols.end(), 0);

    BaselineResult out;
    out.method = "location";
    out.N_tr = meas.symbols;
    out.feasible = dims.N == 0 || out.N_tr <= dims.N;
    out.design = beamformers_from_sweep(meas, all, F_hat, W_hat);
    out.design.beamformer.tx_beams = tx;
    out.design.beamformer.rx_beams = rx;
    return out;
}

} // namespace ckm
