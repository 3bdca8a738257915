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

#include "ckmbf/bim.hpp"

#include "ckmbf/codebook.hpp"
#include "ckmbf/errors.hpp"
#include "ckmbf/rng.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ckm
{

namespace
{

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

std::vector<std::size_t> ranked_by(const std::vector<double> &score)
{
    std::vector<std::size_t> order(score.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    return order;
}

std::vector<double> column_energy(const arma::mat &P)
{
    std::vector<double> out(P.n_cols);
    for (arma::uword c = 0; c < P.n_cols; ++c)
        out[c] = arma::accu(P.col(c));
    return out;
}

std::vector<double> row_energy(const arma::mat &P)
{
    std::vector<double> out(P.n_rows);
    for (arma::uword r = 0; r < P.n_rows; ++r)
        out[r] = arma::accu(P.row(r));
    return out;
}

arma::uvec to_uvec(const std::vector<std::size_t> &v)
{
    arma::uvec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out(i) = v[i];
    return out;
}

void check_selection_size(const ComplexMatrix &Y, std::size_t cols, std::size_t rows, const char *who)
{
    if (cols < 1 || rows < 1 || cols > Y.n_cols || rows > Y.n_rows)
        throw ContractViolation(std::string(who) + ": cannot select " + std::to_string(rows) + "x" +
                                std::to_string(cols) + " from a " + std::to_string(Y.n_rows) + "x" +
                                std::to_string(Y.n_cols) + " matrix");
}

SubmatrixSelection make_selection(const ComplexMatrix &Y, std::vector<std::size_t> rows, std::vector<std::size_t> cols)
{
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    SubmatrixSelection s;
    s.energy = submatrix_energy(Y, rows, cols);
    s.block = Y.submat(to_uvec(rows), to_uvec(cols));
    s.rows = std::move(rows);
    s.cols = std::move(cols);
    return s;
}

} // namespace

ComplexMatrix SweepMeasurement::equalized() const
{
    ComplexMatrix out = Y;
    const double reference = 1.0 / std::sqrt(static_cast<double>(group_size));
    for (arma::uword p = 0; p < out.n_cols; ++p)
        if (rho[p] != reference)
            out.col(p) *= reference / rho[p];
    return out;
}

std::size_t sweep_symbols(std::size_t tx_beams, std::size_t rx_beams, std::size_t M_r_rf)
{
    if (M_r_rf == 0)
        throw ContractViolation("sweep_symbols: M_r_rf must be positive");
    return M_r_rf * ceil_div(tx_beams, M_r_rf) * ceil_div(rx_beams, M_r_rf);
}

SweepMeasurement sweep(const ComplexMatrix &H_true, const ComplexMatrix &F_hat, const ComplexMatrix &W_hat,
                       const SystemDims &dims, double snr, std::uint64_t seed, bool noiseless)
{
    dims.validate();
    if (F_hat.n_cols < dims.M_t_rf || W_hat.n_cols < dims.M_r_rf)
        throw ContractViolation("sweep: need at least M_t_rf transmit and M_r_rf receive candidate beams");
    if (H_true.n_rows != W_hat.n_rows || H_true.n_cols != F_hat.n_rows)
        throw ContractViolation("sweep: channel does not match the candidate beams");
    const std::size_t g = dims.M_r_rf;
    const std::size_t tx_groups = ceil_div(F_hat.n_cols, g);
    const std::size_t rx_groups = ceil_div(W_hat.n_cols, g);
    const double amplitude = std::sqrt(snr);
    const ComplexMatrix S = [&] {
        ComplexMatrix s(g, g);
        const double scale = 1.0 / std::sqrt(static_cast<double>(g));
        for (std::size_t r = 0; r < g; ++r)
            for (std::size_t c = 0; c < g; ++c)
                s(r, c) = std::polar(scale, -kTwoPi * static_cast<double>((r * c) % g) / static_cast<double>(g));
        return s;
    }();

    SweepMeasurement m;
    m.Y.zeros(W_hat.n_cols, F_hat.n_cols);
    m.rho.assign(F_hat.n_cols, 0.0);
    m.symbols = sweep_symbols(F_hat.n_cols, W_hat.n_cols, g);
    m.snr = snr;
    m.group_size = g;

    Rng rng(seed);
    for (std::size_t i = 0; i < tx_groups; ++i)
    {
        const std::size_t c0 = i * g;
        const std::size_t c1 = std::min<std::size_t>(F_hat.n_cols, c0 + g);
        ComplexMatrix Fi(F_hat.n_rows, g, arma::fill::zeros);
        Fi.cols(0, c1 - c0 - 1) = F_hat.cols(c0, c1 - 1);
        const double rho = 1.0 / arma::norm(Fi, "fro");
        for (std::size_t p = c0; p < c1; ++p)
            m.rho[p] = rho;
        for (std::size_t j = 0; j < rx_groups; ++j)
        {
            const std::size_t r0 = j * g;
            const std::size_t r1 = std::min<std::size_t>(W_hat.n_cols, r0 + g);
            ComplexMatrix Wj(W_hat.n_rows, g, arma::fill::zeros);
            Wj.cols(0, r1 - r0 - 1) = W_hat.cols(r0, r1 - 1);
            ComplexMatrix Yij = (amplitude * rho) * Wj.t() * H_true * Fi;
            if (!noiseless)
                Yij += Wj.t() * complex_gaussian_matrix(rng, H_true.n_rows, g, 1.0) * S.t();
            m.Y.submat(r0, c0, r1 - 1, c1 - 1) = Yij.submat(0, 0, r1 - r0 - 1, c1 - c0 - 1);
        }
    }
    return m;
}

double submatrix_energy(const ComplexMatrix &Y, const std::vector<std::size_t> &rows,
                        const std::vector<std::size_t> &cols)
{
    double e = 0.0;
    for (std::size_t r : rows)
        for (std::size_t c : cols)
            e += std::norm(Y(r, c));
    return e;
}

SubmatrixSelection select_submatrix_greedy(const ComplexMatrix &Y, std::size_t cols, std::size_t rows)
{
    check_selection_size(Y, cols, rows, "select_submatrix_greedy");
    const arma::mat P = arma::square(arma::abs(Y));
    const std::vector<std::size_t> col_order = ranked_by(column_energy(P));
    std::vector<std::size_t> chosen_cols(col_order.begin(), col_order.begin() + static_cast<long>(cols));
    const arma::mat restricted = P.cols(to_uvec(chosen_cols));
    const std::vector<std::size_t> row_order = ranked_by(row_energy(restricted));
    std::vector<std::size_t> chosen_rows(row_order.begin(), row_order.begin() + static_cast<long>(rows));
    return make_selection(Y, std::move(chosen_rows), std::move(chosen_cols));
}

namespace
{

struct ExhaustiveSetup
{
    arma::mat P;
    std::vector<std::vector<std::size_t>> col_sets;
    std::vector<std::vector<std::size_t>> row_sets;
};

ExhaustiveSetup prepare_exhaustive(const ComplexMatrix &Y, std::size_t cols, std::size_t rows, std::uint64_t budget)
{
    check_selection_size(Y, cols, rows, "select_submatrix_exhaustive");
    const std::uint64_t pairs = saturating_mul(binomial(Y.n_cols, cols), binomial(Y.n_rows, rows));
    if (pairs > budget)
        throw BudgetExceeded("select_submatrix_exhaustive: " + std::to_string(pairs) +
                             " subset pairs exceed the budget of " + std::to_string(budget));
    return {arma::square(arma::abs(Y)), enumerate_selections(Y.n_cols, cols, budget),
            enumerate_selections(Y.n_rows, rows, budget)};
}

struct Best
{
    double value = -1.0;
    std::uint64_t index = std::numeric_limits<std::uint64_t>::max();

    void offer(double v, std::uint64_t i)
    {
        if (v > value || (v == value && i < index))
        {
            value = v;
            index = i;
        }
    }
};

void scan_columns(const ExhaustiveSetup &s, std::size_t ci, Best &best)
{
    const std::vector<std::size_t> &cs = s.col_sets[ci];
    std::vector<double> row_sum(s.P.n_rows, 0.0);
    for (arma::uword r = 0; r < s.P.n_rows; ++r)
        for (std::size_t c : cs)
            row_sum[r] += s.P(r, c);
    for (std::size_t ri = 0; ri < s.row_sets.size(); ++ri)
    {
        double v = 0.0;
        for (std::size_t r : s.row_sets[ri])
            v += row_sum[r];
        best.offer(v, static_cast<std::uint64_t>(ci) * s.row_sets.size() + ri);
    }
}

SubmatrixSelection finish_exhaustive(const ComplexMatrix &Y, const ExhaustiveSetup &s, const Best &best)
{
    const std::size_t ci = static_cast<std::size_t>(best.index / s.row_sets.size());
    const std::size_t ri = static_cast<std::size_t>(best.index % s.row_sets.size());
    return make_selection(Y, s.row_sets[ri], s.col_sets[ci]);
}

} // namespace

SubmatrixSelection select_submatrix_exhaustive_serial(const ComplexMatrix &Y, std::size_t cols, std::size_t rows,
                                                      std::uint64_t budget)
{
    const ExhaustiveSetup s = prepare_exhaustive(Y, cols, rows, budget);
    Best best;
    for (std::size_t ci = 0; ci < s.col_sets.size(); ++ci)
        scan_columns(s, ci, best);
    return finish_exhaustive(Y, s, best);
}

SubmatrixSelection select_submatrix_exhaustive(const ComplexMatrix &Y, std::size_t cols, std::size_t rows,
                                               std::uint64_t budget)
{
    const ExhaustiveSetup s = prepare_exhaustive(Y, cols, rows, budget);
    Best best;
    const long count = static_cast<long>(s.col_sets.size());
#pragma omp parallel
    {
        Best local;
#pragma omp for schedule(static) nowait
        for (long ci = 0; ci < count; ++ci)
            scan_columns(s, static_cast<std::size_t>(ci), local);
#pragma omp critical(ckm_submatrix_reduce)
        best.offer(local.value, local.index);
    }
    return finish_exhaustive(Y, s, best);
}

BasebandDesign beamformers_from_sweep(const SweepMeasurement &meas, const SubmatrixSelection &selection,
                                      const ComplexMatrix &F_hat, const ComplexMatrix &W_hat)
{
    if (F_hat.n_cols != meas.Y.n_cols || W_hat.n_cols != meas.Y.n_rows)
        throw ContractViolation("beamformers_from_sweep: candidate beams do not match the measurement");
    if (!(meas.snr > 0.0))
        throw ContractViolation("beamformers_from_sweep: measurement snr must be positive");
    const arma::uvec r = to_uvec(selection.rows);
    const arma::uvec c = to_uvec(selection.cols);
    const ComplexMatrix F_RF = F_hat.cols(c);
    const ComplexMatrix W_RF = W_hat.cols(r);
    ComplexMatrix Y_sel = meas.Y.submat(r, c);
    for (std::size_t k = 0; k < selection.cols.size(); ++k)
        Y_sel.col(k) /= meas.rho[selection.cols[k]];
    const ComplexMatrix H_tilde = hermitian_inv_sqrt(W_RF.t() * W_RF) * Y_sel * hermitian_inv_sqrt(F_RF.t() * F_RF) /
                                  std::sqrt(meas.snr);
    BasebandDesign d = baseband_from_whitened(H_tilde, F_RF, W_RF, meas.snr);
    d.beamformer.tx_beams = selection.cols;
    d.beamformer.rx_beams = selection.rows;
    return d;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> rank_beams(const ComplexMatrix &Y)
{
    const arma::mat P = arma::square(arma::abs(Y));
    return {ranked_by(column_energy(P)), ranked_by(row_energy(P))};
}

} // namespace ckm
