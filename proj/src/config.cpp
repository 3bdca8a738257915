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

#include "ckmbf/config.hpp"

#include "ckmbf/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace ckm
{

double ExperimentConfig::snr_linear() const { return std::pow(10.0, snr_db / 10.0); }

void ExperimentConfig::validate() const
{
    auto fail = [](const std::string &field, const std::string &msg) {
        throw ContractViolation("config field '" + field + "': " + msg);
    };
    if (tx_arrays.empty())
        fail("tx_arrays", "at least one transmit array is required");
    for (const UpaGeometry &g : tx_arrays)
        if (g.n_z < 1 || g.n_y < 1 || !(g.spacing > 0.0))
            fail("tx_arrays", "array sizes must be positive");
    if (rx_array.n_z < 1 || rx_array.n_y < 1 || !(rx_array.spacing > 0.0))
        fail("rx_array", "array sizes must be positive");
    if (M_r_rf < 1 || M_t_rf < M_r_rf)
        fail("M_t_rf", "need 1 <= M_r_rf <= M_t_rf");
    for (const UpaGeometry &g : tx_arrays)
        if (M_t_rf >= g.size())
            fail("M_t_rf", "must be smaller than every transmit array size");
    if (M_r_rf >= rx_array.size())
        fail("M_r_rf", "must be smaller than the receive array size");
    if (N < 1)
        fail("N", "must be positive");
    if (!std::isfinite(snr_db))
        fail("snr_db", "must be finite");
    if (trials < 1)
        fail("trials", "must be positive");
    if (!(location_error_mean_m >= 0.0) || !std::isfinite(location_error_mean_m))
        fail("location_error_mean_m", "must be finite and nonnegative");
    if (methods.empty())
        fail("methods", "at least one method is required");
    std::set<std::string> seen;
    for (const std::string &m : methods)
    {
        if (std::find(kKnownMethods.begin(), kKnownMethods.end(), m) == kKnownMethods.end())
            fail("methods", "unknown method '" + m + "'");
        if (!seen.insert(m).second)
            fail("methods", "duplicate method '" + m + "'");
    }
    if (scene != "street")
        fail("scene", "unknown scene '" + scene + "' (available: street)");
    if (codebook_oversampling < 1)
        fail("codebook_oversampling", "must be >= 1");
    if (grid_oversampling < 1)
        fail("grid_oversampling", "must be >= 1");
    if (ckm.samples < 1)
        fail("ckm.samples", "must be positive");
    if (ckm.L_hat < 1)
        fail("ckm.L_hat", "must be positive");
    if (ckm.K < 1 || ckm.K > ckm.samples)
        fail("ckm.K", "need 1 <= K <= samples");
    if (ckm.tx_candidates < M_t_rf)
        fail("ckm.tx_candidates", "must be at least M_t_rf");
    if (ckm.rx_candidates < M_r_rf)
        fail("ckm.rx_candidates", "must be at least M_r_rf");
    if (omp.measurements != 0 && omp.measurements < omp.sparsity)
        fail("omp.measurements", "must be at least omp.sparsity");
    if (selection_budget < 1)
        fail("selection_budget", "must be positive");
}

namespace
{

using nlohmann::json;

void reject_unknown(const json &obj, const std::set<std::string> &allowed, const std::string &where)
{
    for (const auto &[key, value] : obj.items())
        if (!allowed.count(key))
            throw ContractViolation("config field '" + where + key + "': unknown key");
}

template <typename T>
T get_field(const json &obj, const std::string &key, const std::string &where)
{
    try
    {
        return obj.at(key).get<T>();
    }
    catch (const json::exception &e)
    {
        throw ContractViolation("config field '" + where + key + "': " + e.what());
    }
}

template <typename T>
void read_optional(const json &obj, const std::string &key, T &target, const std::string &where = "")
{
    if (obj.contains(key))
        target = get_field<T>(obj, key, where);
}

std::size_t read_count(const json &obj, const std::string &key, std::size_t fallback, const std::string &where = "")
{
    if (!obj.contains(key))
        return fallback;
    const json &v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ContractViolation("config field '" + where + key + "': expected a nonnegative integer");
    return v.get<std::size_t>();
}

UpaGeometry read_array(const json &v, const std::string &field)
{
    if (!v.is_object())
        throw ContractViolation("config field '" + field + "': expected {\"n_z\": .., \"n_y\": ..}");
    reject_unknown(v, {"n_z", "n_y", "spacing"}, field + ".");
    UpaGeometry g;
    g.n_z = get_field<int>(v, "n_z", field + ".");
    g.n_y = get_field<int>(v, "n_y", field + ".");
    read_optional(v, "spacing", g.spacing, field + ".");
    return g;
}

} // namespace

ExperimentConfig parse_config(std::istream &in)
{
    json root;
    try
    {
        root = json::parse(in, nullptr, true, true);
    }
    catch (const json::parse_error &e)
    {
        throw ParseError(std::string("config is not valid JSON: ") + e.what(), 0);
    }
    if (!root.is_object())
        throw ContractViolation("config: top level must be an object");
    reject_unknown(root,
                   {"name", "tx_arrays", "rx_array", "M_t_rf", "M_r_rf", "N", "snr_db", "trials",
                    "location_error_mean_m", "master_seed", "methods", "scene", "codebook_oversampling",
                    "grid_oversampling", "ckm", "omp", "selection_budget", "noiseless_training"},
                   "");

    ExperimentConfig cfg;
    read_optional(root, "name", cfg.name);
    if (!root.contains("tx_arrays") || !root.at("tx_arrays").is_array())
        throw ContractViolation("config field 'tx_arrays': required list of arrays");
    for (std::size_t i = 0; i < root.at("tx_arrays").size(); ++i)
        cfg.tx_arrays.push_back(read_array(root.at("tx_arrays")[i], "tx_arrays[" + std::to_string(i) + "]"));
    if (root.contains("rx_array"))
        cfg.rx_array = read_array(root.at("rx_array"), "rx_array");
    cfg.M_t_rf = read_count(root, "M_t_rf", cfg.M_t_rf);
    cfg.M_r_rf = read_count(root, "M_r_rf", cfg.M_r_rf);
    cfg.N = read_count(root, "N", cfg.N);
    if (!root.contains("snr_db"))
        throw ContractViolation("config field 'snr_db': required (transmit SNR P/sigma^2 in dB)");
    cfg.snr_db = get_field<double>(root, "snr_db", "");
    cfg.trials = read_count(root, "trials", cfg.trials);
    read_optional(root, "location_error_mean_m", cfg.location_error_mean_m);
    read_optional(root, "master_seed", cfg.master_seed);
    if (!root.contains("methods"))
        throw ContractViolation("config field 'methods': required");
    cfg.methods = get_field<std::vector<std::string>>(root, "methods", "");
    read_optional(root, "scene", cfg.scene);
    read_optional(root, "codebook_oversampling", cfg.codebook_oversampling);
    read_optional(root, "grid_oversampling", cfg.grid_oversampling);
    if (root.contains("ckm"))
    {
        const json &c = root.at("ckm");
        reject_unknown(c, {"samples", "L_hat", "tx_candidates", "rx_candidates", "K"}, "ckm.");
        cfg.ckm.samples = read_count(c, "samples", cfg.ckm.samples, "ckm.");
        cfg.ckm.L_hat = read_count(c, "L_hat", cfg.ckm.L_hat, "ckm.");
        cfg.ckm.tx_candidates = read_count(c, "tx_candidates", cfg.ckm.tx_candidates, "ckm.");
        cfg.ckm.rx_candidates = read_count(c, "rx_candidates", cfg.ckm.rx_candidates, "ckm.");
        cfg.ckm.K = read_count(c, "K", cfg.ckm.K, "ckm.");
    }
    if (root.contains("omp"))
    {
        const json &o = root.at("omp");
        reject_unknown(o, {"sparsity", "measurements"}, "omp.");
        cfg.omp.sparsity = read_count(o, "sparsity", cfg.omp.sparsity, "omp.");
        cfg.omp.measurements = read_count(o, "measurements", cfg.omp.measurements, "omp.");
    }
    read_optional(root, "selection_budget", cfg.selection_budget);
    read_optional(root, "noiseless_training", cfg.noiseless_training);
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ContractViolation("cannot open config file '" + path + "'");
    return parse_config(in);
}

AngleGrid grid_for(const UpaGeometry &tx, const UpaGeometry &rx, int oversampling)
{
    return {oversampling * rx.n_z, 2 * oversampling * rx.n_y, oversampling * tx.n_z, 2 * oversampling * tx.n_y};
}

} // namespace ckm
