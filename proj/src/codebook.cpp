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
#include "ckmbf/text_format.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace ckm
{

ComplexMatrix Codebook::select(const std::vector<std::size_t> &indices) const
{
    ComplexMatrix out(antennas(), indices.size());
    for (std::size_t c = 0; c < indices.size(); ++c)
    {
        if (indices[c] >= size())
            throw ContractViolation("Codebook::select: beam index " + std::to_string(indices[c]) + " out of range");
        out.col(c) = beams.col(indices[c]);
    }
    return out;
}

std::string Codebook::fingerprint() const { return codebook_fingerprint(geom, oversampling); }

std::string codebook_fingerprint(const UpaGeometry &geom, int oversampling)
{
    return std::to_string(geom.n_z) + "x" + std::to_string(geom.n_y) + "@" + format_double(geom.spacing) + "/" +
           std::to_string(oversampling);
}

namespace
{

ComplexVector dft_column(int n, int k, int oversampling)
{
    ComplexVector v(static_cast<arma::uword>(n));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const long period = static_cast<long>(oversampling) * n;
    for (int m = 0; m < n; ++m)
    {
        // reduce m*k modulo the period first so the phase argument stays small
        const long r = (static_cast<long>(m) * k) % period;
        v(static_cast<arma::uword>(m)) = std::polar(scale, kTwoPi * static_cast<double>(r) / static_cast<double>(period));
    }
    return v;
}

} // namespace

Codebook build_kronecker_dft(const UpaGeometry &geom, int oversampling)
{
    geom.validate();
    if (oversampling < 1)
        throw ContractViolation("build_kronecker_dft: oversampling must be >= 1");
    const int kz_count = oversampling * geom.n_z;
    const int ky_count = oversampling * geom.n_y;

    Codebook cb;
    cb.geom = geom;
    cb.oversampling = oversampling;
    cb.beams.set_size(geom.size(), static_cast<arma::uword>(kz_count) * ky_count);
    std::vector<ComplexVector> fy(static_cast<std::size_t>(ky_count));
    for (int ky = 0; ky < ky_count; ++ky)
        fy[static_cast<std::size_t>(ky)] = dft_column(geom.n_y, ky, oversampling);
    for (int kz = 0; kz < kz_count; ++kz)
    {
        const ComplexVector fz = dft_column(geom.n_z, kz, oversampling);
        for (int ky = 0; ky < ky_count; ++ky)
            cb.beams.col(static_cast<arma::uword>(kz) * ky_count + ky) = arma::kron(fz, fy[static_cast<std::size_t>(ky)]);
    }
    return cb;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b)
{
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    if (a != 0 && b > kMax / a)
        return kMax;
    return a * b;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i)
    {
        // result * (n - k + i) / i is always an integer; divide by gcd first to limit overflow
        const std::uint64_t num = n - k + i;
        const std::uint64_t g = std::gcd(result, i);
        const std::uint64_t r = result / g;
        const std::uint64_t d = i / g;
        const std::uint64_t num_reduced = num / d;  // d divides num after removing the gcd with result
        if (r != 0 && num_reduced > kMax / r)
            return kMax;
        result = r * num_reduced;
    }
    return result;
}

SelectionEnumerator::SelectionEnumerator(std::size_t n, std::size_t k) : n_(n), current_(k)
{
    if (k < 1 || k > n)
        throw ContractViolation("enumerate_selections: need 1 <= k <= n (k=" + std::to_string(k) +
                                ", n=" + std::to_string(n) + ")");
    for (std::size_t i = 0; i < k; ++i)
        current_[i] = i;
}

void SelectionEnumerator::advance()
{
    const std::size_t k = current_.size();
    std::size_t i = k;
    while (i > 0)
    {
        --i;
        if (current_[i] < n_ - k + i)
        {
            ++current_[i];
            for (std::size_t j = i + 1; j < k; ++j)
                current_[j] = current_[j - 1] + 1;
            return;
        }
    }
    done_ = true;
}

std::vector<std::vector<std::size_t>> enumerate_selections(std::size_t n, std::size_t k, std::uint64_t max_count)
{
    SelectionEnumerator it(n, k);
    const std::uint64_t count = binomial(n, k);
    if (count > max_count)
        throw BudgetExceeded("enumerate_selections: C(" + std::to_string(n) + ", " + std::to_string(k) +
                             ") exceeds the budget of " + std::to_string(max_count));
    std::vector<std::vector<std::size_t>> out;
    out.reserve(static_cast<std::size_t>(count));
    for (; !it.done(); it.advance())
        out.push_back(it.current());
    return out;
}

} // namespace ckm
