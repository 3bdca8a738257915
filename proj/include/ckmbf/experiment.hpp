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

#include "ckmbf/baselines.hpp"
#include "ckmbf/bim.hpp"
#include "ckmbf/cam.hpp"
#include "ckmbf/ckm_store.hpp"
#include "ckmbf/config.hpp"
#include "ckmbf/rng.hpp"
#include "ckmbf/scene.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace ckm
{

inline constexpr const char *kRecordCsvHeader =
    "method,M_t,trial,raw_rate_bpshz,N_tr,effective_rate_bpshz,loc_error_m,seed";

struct TrialRecord
{
    std::string method;
    std::size_t M_t = 0;
    std::size_t trial = 0;
    double raw_rate = 0.0;
    std::size_t N_tr = 0;
    double effective_rate = 0.0;
    double loc_error_m = 0.0;
    std::uint64_t seed = 0;
};

// Horizontal offset with Rayleigh magnitude (scale mean / sqrt(pi / 2)) and uniform direction.
Vec3 draw_location_error(double mean_m, Rng &rng);

// Uniform position inside the box.
Vec3 draw_location(const Box &region, Rng &rng);

Scene make_scene(const std::string &name);

// Transmit and receive codebooks, angle grid and dimensions for one transmit array.
struct ArraySetup
{
    UpaGeometry tx;
    UpaGeometry rx;
    SystemDims dims;
    Codebook F;
    Codebook W;
    AngleGrid grid;
};

ArraySetup make_array_setup(const ExperimentConfig &cfg, const UpaGeometry &tx);

// Sample locations used to build the maps, shared by every transmit array.
std::vector<Vec3> draw_sample_locations(const Scene &scene, std::size_t count, std::uint64_t master_seed);

// CAM and BIM records at error-free sample locations (BIM rankings from the noiseless full-codebook response).
CkmDatabase build_cam_map(const Scene &scene, const std::vector<Vec3> &samples, const ArraySetup &setup,
                          const CkmParams &params);
CkmDatabase build_bim_map(const Scene &scene, const std::vector<Vec3> &samples, const ArraySetup &setup,
                          const CkmParams &params);

// Beamformers designed on a channel estimate: algorithm1 when the selection count fits the budget,
// otherwise the strongest submatrix of W^H H_hat F followed by the optimal digital stage.
BasebandDesign estimated_channel_design(const ComplexMatrix &H_hat, const ArraySetup &setup, std::uint64_t budget);

// Rate of designed beamformers on the true channel.
double achieved_rate(const ComplexMatrix &H_true, const HybridBeamformer &bf, double snr);

struct MethodOutcome
{
    double raw_rate = 0.0;
    std::size_t N_tr = 0;
};

struct TrialContext
{
    const ExperimentConfig &cfg;
    const Scene &scene;
    const ArraySetup &setup;
    const CkmDatabase *cam_map = nullptr;
    const CkmDatabase *bim_map = nullptr;
};

MethodOutcome run_method(const std::string &method, const TrialContext &ctx, const ComplexMatrix &H_true,
                         Vec3 true_location, Vec3 reported_location, std::uint64_t seed);

// Deterministic for a fixed master seed regardless of thread count.
std::vector<TrialRecord> run_experiment(const ExperimentConfig &cfg);

void write_records_csv(std::ostream &out, const std::vector<TrialRecord> &records);
std::vector<TrialRecord> read_records_csv(std::istream &in);

struct SummaryRow
{
    std::string method;
    std::size_t M_t = 0;
    std::size_t trials = 0;
    double mean_effective_rate = 0.0;
    double stderr_effective_rate = 0.0;
    double mean_raw_rate = 0.0;
    double mean_N_tr = 0.0;
};

inline constexpr const char *kSummaryCsvHeader =
    "method,M_t,trials,mean_effective_rate_bpshz,stderr_effective_rate_bpshz,mean_raw_rate_bpshz,mean_N_tr";

// Grouped by (method, M_t) in order of first appearance.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord> &records);
void write_summary_csv(std::ostream &out, const std::vector<SummaryRow> &rows);

} // namespace ckm
