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
#include "ckmbf/geometry.hpp"
#include "ckmbf/spatial_index.hpp"

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ckm
{

struct CamCandidate
{
    GridTuple tuple;
    double weight = 0.0;

    friend bool operator==(const CamCandidate &, const CamCandidate &) = default;
};

// Candidate angle tuples for one location, strongest first.
struct CamEntry
{
    Vec3 location;
    std::vector<CamCandidate> candidates;

    friend bool operator==(const CamEntry &, const CamEntry &) = default;
};

// Ranked candidate beam indices for one location.
struct BimEntry
{
    Vec3 location;
    std::vector<std::size_t> tx_beams;
    std::vector<std::size_t> rx_beams;

    friend bool operator==(const BimEntry &, const BimEntry &) = default;
};

struct BimSample
{
    Vec3 location;
    std::vector<std::size_t> tx_ranked;
    std::vector<std::size_t> rx_ranked;
};

struct CkmMeta
{
    AngleGrid grid;
    std::string tx_codebook;  // codebook fingerprint, "none" for CAM-only maps
    std::string rx_codebook;
    std::size_t K = 3;

    friend bool operator==(const CkmMeta &, const CkmMeta &) = default;
};

// Immutable sample database with one spatial index per record kind.
class CkmDatabase
{
public:
    CkmDatabase() = default;
    CkmDatabase(CkmMeta meta, std::vector<CamEntry> cam, std::vector<BimEntry> bim,
                std::size_t brute_force_limit = kBruteForceLimit);

    const CkmMeta &meta() const { return meta_; }
    const std::vector<CamEntry> &cam() const { return cam_; }
    const std::vector<BimEntry> &bim() const { return bim_; }
    const SpatialIndex &cam_index() const { return cam_index_; }
    const SpatialIndex &bim_index() const { return bim_index_; }

    // "cam", "bim" or "mixed" (both kinds present, or neither).
    std::string kind() const;

private:
    CkmMeta meta_;
    std::vector<CamEntry> cam_;
    std::vector<BimEntry> bim_;
    SpatialIndex cam_index_;
    SpatialIndex bim_index_;
};

// Snap paths to the grid, merge equivalent tuples by summed |gain|^2, keep the strongest L_max.
// Ties in weight go to the lexicographically smaller tuple.
CamEntry build_cam_entry(const PathSet &paths, const AngleGrid &grid, std::size_t L_max);
std::vector<CamEntry> build_cam_samples(const std::vector<PathSet> &paths, const AngleGrid &grid, std::size_t L_max);

// Inverse-distance pooling over the K nearest samples, top-L by pooled weight.
CamEntry query_cam(const CkmDatabase &db, Vec3 q, std::size_t L, std::size_t K);

// Truncates each ranked list to the maxima. Throws ContractViolation on duplicate locations or indices.
std::vector<BimEntry> build_bim_samples(const std::vector<BimSample> &samples, std::size_t tx_max,
                                        std::size_t rx_max);

struct BimQuery
{
    BimEntry entry;
    bool shortfall = false;  // fewer distinct beams were available than requested
};

// Rank-discounted pooling: a beam at rank r in a list of length n scores (n - r) / d_k.
BimQuery query_bim(const CkmDatabase &db, Vec3 q, std::size_t tx_size, std::size_t rx_size, std::size_t K);

// Beam count implied by a fingerprint "n_z x n_y @ spacing / O"; nullopt for "none" or malformed text.
std::optional<std::size_t> codebook_size_from_fingerprint(const std::string &fp);

void save_ckm(const CkmDatabase &db, std::ostream &out);

// Throws ParseError on version, format or truncation problems. Non-empty expected fingerprints must
// match the stored ones.
CkmDatabase load_ckm(std::istream &in, const std::string &expected_tx_codebook = {},
                     const std::string &expected_rx_codebook = {});

} // namespace ckm
