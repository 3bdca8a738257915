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

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace ckm
{

inline const std::vector<std::string> kKnownMethods = {"optimal", "cam", "bim", "ls", "omp", "location"};

struct CkmParams
{
    std::size_t samples = 3700;
    std::size_t L_hat = 40;
    std::size_t tx_candidates = 20;
    std::size_t rx_candidates = 10;
    std::size_t K = 3;
};

struct OmpParams
{
    std::size_t sparsity = 6;
    std::size_t measurements = 0;  // 0: 4 * ceil(L ln|grid| / M_r_rf)
};

struct ExperimentConfig
{
    std::string name = "experiment";
    std::vector<UpaGeometry> tx_arrays;
    UpaGeometry rx_array{4, 4, 0.5};
    std::size_t M_t_rf = 4;
    std::size_t M_r_rf = 4;
    std::size_t N = 1200;
    double snr_db = 0.0;
    std::size_t trials = 100;
    double location_error_mean_m = 0.0;
    std::uint64_t master_seed = 1;
    std::vector<std::string> methods;
    std::string scene = "street";
    int codebook_oversampling = 1;
    int grid_oversampling = 2;
    CkmParams ckm;
    OmpParams omp;
    std::uint64_t selection_budget = 1'000'000;
    bool noiseless_training = false;

    double snr_linear() const;

    // Throws ContractViolation naming the offending field.
    void validate() const;
};

// JSON reader; unknown keys are rejected. snr_db is required.
ExperimentConfig parse_config(std::istream &in);
ExperimentConfig load_config(const std::string &path);

// Zenith grid I = g n_z, azimuth grid J = 2 g n_y on both sides.
AngleGrid grid_for(const UpaGeometry &tx, const UpaGeometry &rx, int oversampling);

} // namespace ckm
