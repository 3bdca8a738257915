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

#include "ckmbf/errors.hpp"
#include "ckmbf/numerics.hpp"
#include "unit/test_support.hpp"

#include <doctest.h>

#include <numeric>

using namespace ckm;
using ckm::test::random_hermitian_pd;
using ckm::test::random_matrix;

namespace
{

// Bisection on the water level, written independently of the library routine.
std::vector<double> waterfill_oracle(const std::vector<double> &sigma, double snr)
{
    auto total = [&](double mu) {
        double s = 0.0;
        for (double x : sigma)
            s += std::max(0.0, mu - 1.0 / (snr * x * x));
        return s;
    };
    double lo = 0.0, hi = 1.0;
    while (total(hi) < 1.0)
        hi *= 2.0;
    for (int i = 0; i < 200; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        (total(mid) < 1.0 ? lo : hi) = mid;
    }
    std::vector<double> rho;
    for (double x : sigma)
        rho.push_back(std::max(0.0, 0.5 * (lo + hi) - 1.0 / (snr * x * x)));
    return rho;
}

double rate_of(const std::vector<double> &sigma, const std::vector<double> &rho, double snr)
{
    double r = 0.0;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        r += std::log2(1.0 + snr * rho[i] * sigma[i] * sigma[i]);
    return r;
}

} // namespace

TEST_CASE("hermitian_inv_sqrt: identity and diagonal cases")
{
    const ComplexMatrix I4 = arma::eye<ComplexMatrix>(4, 4);
    CHECK(arma::norm(hermitian_inv_sqrt(I4) - I4, "fro") < 1e-14);

    ComplexMatrix D(2, 2, arma::fill::zeros);
    D(0, 0) = 4.0;
    D(1, 1) = 9.0;
    const ComplexMatrix B = hermitian_inv_sqrt(D);
    CHECK(std::abs(B(0, 0) - cx(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(B(1, 1) - cx(1.0 / 3.0, 0.0)) < 1e-14);
    CHECK(std::abs(B(0, 1)) < 1e-14);
}

TEST_CASE("hermitian_inv_sqrt: whitening property on random PD matrices")
{
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial)
    {
        const ComplexMatrix A = random_hermitian_pd(rng, 3);
        const ComplexMatrix B = hermitian_inv_sqrt(A);
        CHECK(arma::norm(B * A * B.t() - arma::eye<ComplexMatrix>(3, 3), "fro") <= 1e-10);
        CHECK(arma::norm(B - B.t(), "fro") <= 1e-12);
    }
}

TEST_CASE("hermitian_inv_sqrt: errors")
{
    ComplexMatrix A(2, 2, arma::fill::zeros);
    A(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_inv_sqrt(A), ContractViolation);

    ComplexMatrix S(2, 2, arma::fill::zeros);
    S(0, 0) = 1.0;
    try
    {
        hermitian_inv_sqrt(S);
        FAIL("expected SingularityError");
    }
    catch (const SingularityError &e)
    {
        CHECK(e.eigenvalue() == doctest::Approx(0.0));
    }
}

TEST_CASE("khatri_rao: identity, zero and vectorisation identity")
{
    const ComplexMatrix I2 = arma::eye<ComplexMatrix>(2, 2);
    const ComplexMatrix K = khatri_rao(I2, I2);
    REQUIRE(K.n_rows == 4);
    REQUIRE(K.n_cols == 2);
    ComplexMatrix expected(4, 2, arma::fill::zeros);
    expected(0, 0) = 1.0;
    expected(3, 1) = 1.0;
    CHECK(arma::norm(K - expected, "fro") == 0.0);

    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial)
    {
        const ComplexMatrix A = random_matrix(rng, 2, 3);
        const ComplexMatrix B = random_matrix(rng, 2, 3);
        const ComplexVector a = random_matrix(rng, 3, 1).col(0);
        const ComplexVector lhs = arma::vectorise(B * arma::diagmat(a) * A.st());
        const ComplexVector rhs = khatri_rao(A, B) * a;
        CHECK(arma::norm(lhs - rhs) <= 1e-12 * std::max(1.0, arma::norm(lhs)));
    }
    const ComplexVector zero(3, arma::fill::zeros);
    CHECK(arma::norm(khatri_rao(random_matrix(rng, 2, 3), random_matrix(rng, 2, 3)) * zero) == 0.0);
    CHECK_THROWS_AS(khatri_rao(random_matrix(rng, 2, 3), random_matrix(rng, 2, 2)), ContractViolation);
}

TEST_CASE("water_filling: symmetric and single-stream cases")
{
    const std::vector<double> equal{1.0, 1.0};
    for (double snr : {0.1, 1.0, 1e6})
    {
        const PowerAllocation p = water_filling(equal, snr);
        CHECK(p.coefficients[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(p.coefficients[1] == doctest::Approx(0.5).epsilon(1e-12));
    }
    const std::vector<double> one{3.0};
    CHECK(water_filling(one, 2.0).coefficients[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("water_filling: sigma = (2, 1), snr = 1 matches the bisection oracle")
{
    const std::vector<double> sigma{2.0, 1.0};
    const PowerAllocation p = water_filling(sigma, 1.0);
    const std::vector<double> oracle = waterfill_oracle(sigma, 1.0);
    // frozen from the oracle: water level 1.125
    CHECK(oracle[0] == doctest::Approx(0.875).epsilon(1e-12));
    CHECK(oracle[1] == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(std::abs(p.coefficients[0] - oracle[0]) <= 1e-8);
    CHECK(std::abs(p.coefficients[1] - oracle[1]) <= 1e-8);
    CHECK(p.water_level == doctest::Approx(1.125).epsilon(1e-10));
}

TEST_CASE("water_filling: properties on random instances")
{
    Rng rng(5);
    for (int trial = 0; trial < 500; ++trial)
    {
        const std::size_t n = 1 + static_cast<std::size_t>(uniform(rng, 0.0, 6.0));
        std::vector<double> sigma(n);
        for (double &s : sigma)
            s = uniform(rng, 0.0, 3.0);
        sigma[0] += 0.01;
        const double snr = std::pow(10.0, uniform(rng, -2.0, 3.0));
        const PowerAllocation p = water_filling(sigma, snr);
        const double sum = std::accumulate(p.coefficients.begin(), p.coefficients.end(), 0.0);
        CHECK(std::abs(sum - 1.0) <= 1e-10);
        for (double r : p.coefficients)
            CHECK(r >= 0.0);
        const std::vector<double> eq(n, 1.0 / static_cast<double>(n));
        CHECK(rate_of(sigma, p.coefficients, snr) >= rate_of(sigma, eq, snr) - 1e-12);
        CHECK(allocation_rate(sigma, p.coefficients, snr) == doctest::Approx(rate_of(sigma, p.coefficients, snr)));
    }
}

TEST_CASE("water_filling: errors")
{
    const std::vector<double> zeros{0.0, 0.0};
    CHECK_THROWS_AS(water_filling(zeros, 1.0), ContractViolation);
    const std::vector<double> ok{1.0};
    CHECK_THROWS_AS(water_filling(ok, 0.0), ContractViolation);
}

TEST_CASE("svd and evd: reconstruction and ordering")
{
    const SvdResult id = ckm::svd(arma::eye<ComplexMatrix>(3, 3));
    for (double s : id.singular_values)
        CHECK(s == doctest::Approx(1.0));

    Rng rng(9);
    ComplexVector u = random_matrix(rng, 4, 1).col(0);
    ComplexVector v = random_matrix(rng, 3, 1).col(0);
    u /= arma::norm(u);
    v /= arma::norm(v);
    const SvdResult r1 = ckm::svd(u * v.t());
    CHECK(r1.singular_values(0) == doctest::Approx(1.0).epsilon(1e-12));
    for (arma::uword i = 1; i < r1.singular_values.n_elem; ++i)
        CHECK(r1.singular_values(i) < 1e-12);

    const ComplexMatrix A = random_matrix(rng, 4, 6);
    const SvdResult d = ckm::svd(A);
    ComplexMatrix Sigma(4, 6, arma::fill::zeros);
    for (arma::uword i = 0; i < 4; ++i)
        Sigma(i, i) = d.singular_values(i);
    CHECK(arma::norm(A - d.U * Sigma * d.V.t(), "fro") / arma::norm(A, "fro") <= 1e-10);
    for (arma::uword i = 1; i < 4; ++i)
        CHECK(d.singular_values(i - 1) >= d.singular_values(i));

    const ComplexMatrix H = random_hermitian_pd(rng, 5);
    const EvdResult e = evd_hermitian(H);
    for (arma::uword i = 1; i < 5; ++i)
        CHECK(e.eigenvalues(i - 1) >= e.eigenvalues(i));
    const ComplexMatrix rebuilt =
        e.eigenvectors * arma::diagmat(arma::conv_to<arma::cx_vec>::from(e.eigenvalues)) * e.eigenvectors.t();
    CHECK(arma::norm(H - rebuilt, "fro") / arma::norm(H, "fro") <= 1e-10);

    ComplexMatrix bad = A;
    bad(0, 0) = cx(std::nan(""), 0.0);
    CHECK_THROWS_AS(ckm::svd(bad), ContractViolation);
}

TEST_CASE("least_squares and condition_number")
{
    Rng rng(13);
    const ComplexMatrix A = random_matrix(rng, 8, 3);
    const ComplexVector x = random_matrix(rng, 3, 1).col(0);
    CHECK(arma::norm(least_squares(A, A * x) - x) <= 1e-10);

    ComplexMatrix R = A;
    R.col(2) = R.col(0);
    CHECK_THROWS_AS(least_squares(R, A * x), SingularityError);
    CHECK(std::isinf(condition_number(random_matrix(rng, 2, 3))));
    CHECK(condition_number(arma::eye<ComplexMatrix>(3, 3)) == doctest::Approx(1.0));
}
