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

#include "ckmbf/arrays.hpp"
#include "ckmbf/numerics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ckm
{

// Ordered analog beams for one UPA. Column b of `beams` is beam b; every entry has modulus 1/sqrt(M).
struct Codebook
{
    UpaGeometry geom;
    int oversampling = 1;
    ComplexMatrix beams;

    std::size_t size() const { return beams.n_cols; }
    std::size_t antennas() const { return beams.n_rows; }

    // Columns for the given beam indices, in the given order.
    ComplexMatrix select(const std::vector<std::size_t> &indices) const;

    // "n_z x n_y @ spacing / oversampling"; stored in map files next to beam indices.
    std::string fingerprint() const;
};

std::string codebook_fingerprint(const UpaGeometry &geom, int oversampling);

// Beams f_z(k_z) kron f_y(k_y) with f(k)_m = exp(j 2 pi m k / (O n)) / sqrt(n).
// Beam index is k_z * (O n_y) + k_y.
Codebook build_kronecker_dft(const UpaGeometry &geom, int oversampling = 1);

// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Saturating product, used for selection budgets.
std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);

// Lexicographic walk over the k-subsets of {0, ..., n-1}.
class SelectionEnumerator
{
public:
    SelectionEnumerator(std::size_t n, std::size_t k);

    const std::vector<std::size_t> &current() const { return current_; }
    bool done() const { return done_; }
    void advance();

private:
    std::size_t n_;
    std::vector<std::size_t> current_;
    bool done_ = false;
};

// Every k-subset, lexicographic. Throws ContractViolation unless 1 <= k <= n and
// BudgetExceeded if C(n, k) exceeds max_count.
std::vector<std::vector<std::size_t>> enumerate_selections(std::size_t n, std::size_t k,
                                                           std::uint64_t max_count = 10'000'000);

} // namespace ckm
