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

#include "ckmbf/numerics.hpp"

#include "ckmbf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace ckm
{

bool all_finite(const ComplexMatrix &A)
{
    return A.is_finite();
}

bool is_hermitian(const ComplexMatrix &A, double tolerance)
{
    if (A.n_rows != A.n_cols)
        return false;
    const double scale = std::max(1.0, arma::norm(A, "fro"));
    return arma::norm(A - A.t(), "fro") <= tolerance * scale;
}

namespace
{

EvdResult checked_evd(const ComplexMatrix &A, const char *who)
{
    if (A.is_empty())
        throw ContractViolation(std::string(who) + ": empty matrix");
    if (!all_finite(A))
        throw ContractViolation(std::string(who) + ": non-finite entries");
    if (!is_hermitian(A))
        throw ContractViolation(std::string(who) + ": input is not Hermitian");

    const ComplexMatrix sym = 0.5 * (A + A.t());
    RealVector values;
    ComplexMatrix vectors;
    if (!arma::eig_sym(values, vectors, sym))
        throw std::runtime_error(std::string(who) + ": eigen-decomposition failed");

    // LAPACK returns ascending order
    return {arma::flipud(values), arma::fliplr(vectors)};
}

} // namespace

ComplexMatrix hermitian_inv_sqrt(const ComplexMatrix &A)
{
    const EvdResult evd = checked_evd(A, "hermitian_inv_sqrt");
    const double largest = evd.eigenvalues.front();
    const double smallest = evd.eigenvalues.back();
    if (!(largest > 0.0) || smallest < kSingularEigenvalueRatio * largest)
    {
        std::ostringstream msg;
        msg << "hermitian_inv_sqrt: matrix is singular or indefinite (smallest eigenvalue " << smallest
            << ", largest " << largest << ")";
        throw SingularityError(msg.str(), smallest);
    }
    const RealVector scale = 1.0 / arma::sqrt(evd.eigenvalues);
    const ComplexMatrix &Q = evd.eigenvectors;
    ComplexMatrix B = Q * arma::diagmat(arma::conv_to<arma::cx_vec>::from(scale)) * Q.t();
    return 0.5 * (B + B.t());
}

ComplexMatrix hermitian_sqrt(const ComplexMatrix &A)
{
    const EvdResult evd = checked_evd(A, "hermitian_sqrt");
    const RealVector root = arma::sqrt(arma::clamp(evd.eigenvalues, 0.0, arma::datum::inf));
    const ComplexMatrix &Q = evd.eigenvectors;
    ComplexMatrix B = Q * arma::diagmat(arma::conv_to<arma::cx_vec>::from(root)) * Q.t();
    return 0.5 * (B + B.t());
}

ComplexMatrix khatri_rao(const ComplexMatrix &A, const ComplexMatrix &B)
{
    if (A.n_cols != B.n_cols)
        throw ContractViolation("khatri_rao: column counts differ (" + std::to_string(A.n_cols) + " vs " +
                                std::to_string(B.n_cols) + ")");
    ComplexMatrix out(A.n_rows * B.n_rows, A.n_cols);
    for (arma::uword j = 0; j < A.n_cols; ++j)
        for (arma::uword i = 0; i < A.n_rows; ++i)
            out.col(j).subvec(i * B.n_rows, (i + 1) * B.n_rows - 1) = A(i, j) * B.col(j);
    return out;
}

SvdResult svd(const ComplexMatrix &A)
{
    if (A.is_empty())
        throw ContractViolation("svd: empty matrix");
    if (!all_finite(A))
        throw ContractViolation("svd: non-finite entries");
    SvdResult out;
    if (!arma::svd(out.U, out.singular_values, out.V, A))
        throw std::runtime_error("svd: decomposition failed");
    return out;
}

EvdResult evd_hermitian(const ComplexMatrix &A)
{
    return checked_evd(A, "evd_hermitian");
}

PowerAllocation water_filling(std::span<const double> singular_values, double snr)
{
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw ContractViolation("water_filling: snr must be positive and finite");
    if (singular_values.empty())
        throw ContractViolation("water_filling: no singular values");

    // Inverse channel gains 1/(snr sigma^2); +inf marks unusable channels.
    std::vector<double> floor(singular_values.size(), std::numeric_limits<double>::infinity());
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < singular_values.size(); ++i)
    {
        const double s = singular_values[i];
        if (s < 0.0 || !std::isfinite(s))
            throw ContractViolation("water_filling: singular values must be finite and nonnegative");
        const double gain = snr * s * s;
        if (gain > 0.0)
        {
            floor[i] = 1.0 / gain;
            lowest = std::min(lowest, floor[i]);
        }
    }
    if (!std::isfinite(lowest))
        throw ContractViolation("water_filling: all singular values are zero");

    auto filled = [&](double mu) {
        double total = 0.0;
        for (double f : floor)
            if (mu > f)
                total += mu - f;
        return total;
    };

    double lo = lowest;
    double width = 1.0;
    double hi = lo + width;
    while (filled(hi) < 1.0)
    {
        width *= 2.0;
        hi = lo + width;
    }

    double mu = hi;
    for (int iter = 0; iter < 400; ++iter)
    {
        mu = 0.5 * (lo + hi);
        const double excess = filled(mu) - 1.0;
        if (std::abs(excess) <= 1e-12)
            break;
        (excess > 0.0 ? hi : lo) = mu;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi))
            break;
    }

    // Closed form on the active set removes the residual bisection error.
    double active_floor_sum = 0.0;
    std::size_t active = 0;
    for (double f : floor)
        if (mu > f)
            active_floor_sum += f, ++active;
    if (active > 0)
    {
        const double exact = (1.0 + active_floor_sum) / static_cast<double>(active);
        bool consistent = true;
        for (double f : floor)
            if ((mu > f) != (exact > f))
                consistent = false;
        if (consistent)
            mu = exact;
    }

    PowerAllocation out;
    out.water_level = mu;
    out.coefficients.resize(floor.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < floor.size(); ++i)
    {
        out.coefficients[i] = mu > floor[i] ? mu - floor[i] : 0.0;
        total += out.coefficients[i];
    }
    for (double &c : out.coefficients)
        c /= total;
    return out;
}

double allocation_rate(std::span<const double> singular_values, std::span<const double> rho, double snr)
{
    if (singular_values.size() != rho.size())
        throw ContractViolation("allocation_rate: size mismatch");
    double nats = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i)
        nats += std::log1p(snr * rho[i] * singular_values[i] * singular_values[i]);
    return nats / std::log(2.0);
}

ComplexVector least_squares(const ComplexMatrix &A, const ComplexVector &b)
{
    if (A.n_rows != b.n_elem)
        throw ContractViolation("least_squares: row count mismatch");
    if (A.n_rows < A.n_cols)
        throw SingularityError("least_squares: fewer observations than unknowns", 0.0);
    ComplexMatrix Q, R;
    if (!arma::qr_econ(Q, R, A))
        throw std::runtime_error("least_squares: QR factorisation failed");
    const RealVector diag = arma::abs(R.diag());
    const double largest = diag.max();
    const double smallest = diag.min();
    if (!(largest > 0.0) || smallest <= 1e-13 * largest)
        throw SingularityError("least_squares: matrix is column-rank deficient", smallest);
    return arma::solve(arma::trimatu(R), Q.t() * b, arma::solve_opts::fast);
}

double condition_number(const ComplexMatrix &A)
{
    if (A.n_rows < A.n_cols)
        return std::numeric_limits<double>::infinity();
    const RealVector s = arma::svd(A);
    if (s.is_empty() || s.min() <= 0.0)
        return std::numeric_limits<double>::infinity();
    return s.max() / s.min();
}

} // namespace ckm
