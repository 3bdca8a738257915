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

#include "ckmbf/codebook.hpp"
#include "ckmbf/errors.hpp"

#include <doctest.h>

#include <set>

using namespace ckm;

namespace
{

ComplexVector dft_factor(int n, int O, int k)
{
    ComplexVector v(static_cast<arma::uword>(n));
    for (int m = 0; m < n; ++m)
    {
        const double ph = 2.0 * M_PI * m * k / (O * n);
        v(static_cast<arma::uword>(m)) = cx(std::cos(ph), std::sin(ph)) / std::sqrt(static_cast<double>(n));
    }
    return v;
}

} // namespace

TEST_CASE("build_kronecker_dft: scalar and 4x1 orthogonality")
{
    const Codebook one = build_kronecker_dft({1, 1, 0.5});
    REQUIRE(one.size() == 1);
    CHECK(std::abs(one.beams(0, 0) - cx(1.0, 0.0)) < 1e-15);

    const Codebook cb = build_kronecker_dft({4, 1, 0.5});
    REQUIRE(cb.size() == 4);
    const ComplexMatrix G = cb.beams.t() * cb.beams;
    CHECK(arma::norm(G - arma::eye<ComplexMatrix>(4, 4), "fro") < 1e-12);
}

TEST_CASE("build_kronecker_dft: 2x2 oversampled beams match factor-wise Kronecker")
{
    const Codebook cb = build_kronecker_dft({2, 2, 0.5}, 2);
    REQUIRE(cb.size() == 16);
    for (int kz = 0; kz < 4; ++kz)
        for (int ky = 0; ky < 4; ++ky)
        {
            const ComplexVector expected = arma::kron(dft_factor(2, 2, kz), dft_factor(2, 2, ky));
            CHECK(arma::norm(cb.beams.col(static_cast<arma::uword>(kz * 4 + ky)) - expected) < 1e-12);
        }
    CHECK(cb.fingerprint() == codebook_fingerprint({2, 2, 0.5}, 2));
}

TEST_CASE("build_kronecker_dft: constant modulus and unitary without oversampling")
{
    for (const UpaGeometry g : {UpaGeometry{2, 3, 0.5}, UpaGeometry{4, 4, 0.5}, UpaGeometry{8, 2, 0.5}})
    {
        for (int O : {1, 2, 3})
        {
            const Codebook cb = build_kronecker_dft(g, O);
            CHECK(cb.size() == static_cast<std::size_t>(O * O) * g.size());
            CHECK(arma::abs(arma::abs(cb.beams) - 1.0 / std::sqrt(static_cast<double>(g.size()))).max() < 1e-12);
            if (O == 1)
                CHECK(arma::norm(cb.beams.t() * cb.beams - arma::eye<ComplexMatrix>(g.size(), g.size()), "fro") <
                      1e-12);
        }
    }
}

TEST_CASE("build_kronecker_dft: beams are steering vectors at their grid directions")
{
    // 0.5 cos(zenith) = k_z / n_z with n_y = 1
    const UpaGeometry g{4, 1, 0.5};
    const Codebook cb = build_kronecker_dft(g);
    const ComplexVector a = steering_vector(g, {std::acos(0.5), 0.3});
    CHECK(std::abs(std::abs(arma::cdot(cb.beams.col(1), a)) - 1.0) < 1e-12);
    const ComplexVector b = steering_vector(g, {kPi / 2, 0.0});
    CHECK(std::abs(std::abs(arma::cdot(cb.beams.col(0), b)) - 1.0) < 1e-12);
}

TEST_CASE("enumerate_selections: small cases and count")
{
    const auto all = enumerate_selections(3, 3);
    REQUIRE(all.size() == 1);
    CHECK(all[0] == std::vector<std::size_t>{0, 1, 2});

    const auto singles = enumerate_selections(4, 1);
    REQUIRE(singles.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(singles[i] == std::vector<std::size_t>{i});

    const auto pairs = enumerate_selections(6, 2);
    CHECK(pairs.size() == 15);
    CHECK(binomial(6, 2) == 15);
    std::set<std::vector<std::size_t>> distinct(pairs.begin(), pairs.end());
    CHECK(distinct.size() == 15);
    for (std::size_t i = 1; i < pairs.size(); ++i)
        CHECK(pairs[i - 1] < pairs[i]);

    CHECK_THROWS_AS(enumerate_selections(3, 4), ContractViolation);
    CHECK_THROWS_AS(enumerate_selections(3, 0), ContractViolation);
    CHECK_THROWS_AS(enumerate_selections(64, 8, 1000), BudgetExceeded);
}

TEST_CASE("binomial: Pascal recurrence and saturation")
{
    for (std::uint64_t n = 1; n < 40; ++n)
        for (std::uint64_t k = 1; k < n; ++k)
            CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
    CHECK(binomial(256, 4) == 174792640ULL);
    CHECK(binomial(1000, 500) == UINT64_MAX);
    CHECK(saturating_mul(UINT64_MAX / 2, 3) == UINT64_MAX);
    CHECK(saturating_mul(6, 7) == 42);
}

TEST_CASE("SelectionEnumerator agrees with enumerate_selections")
{
    SelectionEnumerator it(7, 3);
    std::size_t count = 0;
    const auto all = enumerate_selections(7, 3);
    for (; !it.done(); it.advance())
        CHECK(it.current() == all.at(count++));
    CHECK(count == 35);
}
