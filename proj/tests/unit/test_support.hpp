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

#include "ckmbf/numerics.hpp"
#include "ckmbf/rng.hpp"

#include <cmath>

namespace ckm::test
{

inline ComplexMatrix random_matrix(Rng &rng, arma::uword rows, arma::uword cols)
{
    return complex_gaussian_matrix(rng, rows, cols, 1.0);
}

inline ComplexMatrix random_hermitian_pd(Rng &rng, arma::uword n)
{
    const ComplexMatrix X = random_matrix(rng, n, n);
    return X * X.t() + 0.5 * arma::eye<ComplexMatrix>(n, n);
}

// Random matrix with unit-modulus entries scaled by 1/sqrt(rows), like analog beams.
inline ComplexMatrix random_phases(Rng &rng, arma::uword rows, arma::uword cols)
{
    ComplexMatrix M(rows, cols);
    for (arma::uword c = 0; c < cols; ++c)
        for (arma::uword r = 0; r < rows; ++r)
            M(r, c) = std::polar(1.0 / std::sqrt(static_cast<double>(rows)), uniform(rng, 0.0, 2.0 * M_PI));
    return M;
}

inline double rel_error(const ComplexMatrix &A, const ComplexMatrix &B)
{
    const double n = arma::norm(B, "fro");
    return arma::norm(A - B, "fro") / (n > 0.0 ? n : 1.0);
}

} // namespace ckm::test
