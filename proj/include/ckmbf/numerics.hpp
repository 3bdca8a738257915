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

#include <armadillo>
#include <complex>
#include <span>
#include <vector>

namespace ckm
{

using cx = std::complex<double>;
using ComplexMatrix = arma::cx_mat;
using ComplexVector = arma::cx_vec;
using RealVector = arma::vec;

// Singular value decomposition A = U * Diag(singular_values) * V^H.
// U is rows x rows, V is cols x cols, singular_values has min(rows, cols) entries, nonincreasing.
struct SvdResult
{
    ComplexMatrix U;
    RealVector singular_values;
    ComplexMatrix V;
};

// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted nonincreasing.
struct EvdResult
{
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;
};

// Water-filling power split over parallel channels; coefficients sum to one.
struct PowerAllocation
{
    std::vector<double> coefficients;
    double water_level = 0.0;
};

// Relative threshold below which an eigenvalue counts as zero in hermitian_inv_sqrt.
inline constexpr double kSingularEigenvalueRatio = 1e-12;

// Absolute Hermitian symmetry tolerance, scaled by max(1, ||A||_F).
inline constexpr double kHermitianTolerance = 1e-12;

bool all_finite(const ComplexMatrix &A);
bool is_hermitian(const ComplexMatrix &A, double tolerance = kHermitianTolerance);

// Returns B = A^(-1/2) for Hermitian positive-definite A so that B * A * B^H = I.
// Throws ContractViolation for non-Hermitian input and SingularityError when the
// smallest eigenvalue is below kSingularEigenvalueRatio times the largest.
ComplexMatrix hermitian_inv_sqrt(const ComplexMatrix &A);

// Principal square root of a Hermitian PSD matrix (negative rounding noise is clamped).
ComplexMatrix hermitian_sqrt(const ComplexMatrix &A);

// Column-wise Kronecker product: column j of the result is kron(A.col(j), B.col(j)).
// With this ordering vec(B * Diag(a) * A^T) = khatri_rao(A, B) * a.
ComplexMatrix khatri_rao(const ComplexMatrix &A, const ComplexMatrix &B);

SvdResult svd(const ComplexMatrix &A);
EvdResult evd_hermitian(const ComplexMatrix &A);

// Maximises sum_i log2(1 + snr * rho_i * sigma_i^2) over the unit simplex.
// Zero singular values receive zero power. Throws ContractViolation if all are zero or snr <= 0.
PowerAllocation water_filling(std::span<const double> singular_values, double snr);

// sum_i log2(1 + snr * rho_i * sigma_i^2)
double allocation_rate(std::span<const double> singular_values, std::span<const double> rho, double snr);

// Least-squares solution of min ||A x - b||_2 via a QR factorisation (no explicit inverse).
// Throws SingularityError when A is numerically column-rank deficient.
ComplexVector least_squares(const ComplexMatrix &A, const ComplexVector &b);

// Ratio of largest to smallest singular value; +inf for rank-deficient input.
double condition_number(const ComplexMatrix &A);

} // namespace ckm
