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

#include "ckmbf/ckm_store.hpp"
#include "ckmbf/config.hpp"
#include "ckmbf/errors.hpp"
#include "ckmbf/experiment.hpp"
#include "ckmbf/path_csv.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace
{

using namespace ckm;

void print_summary(const std::vector<TrialRecord> &records)
{
    std::printf("%-10s %6s %7s %14s %10s %12s %10s\n", "method", "M_t", "trials", "eff. rate", "stderr", "raw rate",
                "N_tr");
    for (const SummaryRow &r : summarize(records))
        std::printf("%-10s %6zu %7zu %14.4f %10.4f %12.4f %10.1f\n", r.method.c_str(), r.M_t, r.trials,
                    r.mean_effective_rate, r.stderr_effective_rate, r.mean_raw_rate, r.mean_N_tr);
}

std::ofstream open_output(const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw ContractViolation("cannot open '" + path + "' for writing");
    return out;
}

int cmd_run(const std::string &config_path, const std::string &out_path, const std::optional<std::uint64_t> &seed,
            int threads, bool quiet)
{
    ExperimentConfig cfg = load_config(config_path);
    if (seed)
        cfg.master_seed = *seed;
    if (threads > 0)
        omp_set_num_threads(threads);
    const std::vector<TrialRecord> records = run_experiment(cfg);
    std::ofstream out = open_output(out_path);
    write_records_csv(out, records);
    if (!quiet)
        print_summary(records);
    return 0;
}

int cmd_build_map(const std::string &kind, std::size_t samples, const std::string &out_path,
                  const std::string &config_path, const std::optional<std::uint64_t> &seed)
{
    ExperimentConfig cfg;
    if (!config_path.empty())
        cfg = load_config(config_path);
    else
    {
        cfg.tx_arrays = {{8, 8, 0.5}};
        cfg.methods = {kind};
    }
    if (seed)
        cfg.master_seed = *seed;
    cfg.ckm.samples = samples;
    cfg.ckm.K = std::min(cfg.ckm.K, samples);
    cfg.validate();
    const Scene scene = make_scene(cfg.scene);
    const ArraySetup setup = make_array_setup(cfg, cfg.tx_arrays.front());
    const std::vector<Vec3> locations = draw_sample_locations(scene, samples, cfg.master_seed);
    const CkmDatabase db = kind == "cam" ? build_cam_map(scene, locations, setup, cfg.ckm)
                                         : build_bim_map(scene, locations, setup, cfg.ckm);
    std::ofstream out = open_output(out_path);
    save_ckm(db, out);
    std::printf("wrote %zu %s records for M_t = %zu to %s\n", db.cam().size() + db.bim().size(), kind.c_str(),
                setup.dims.M_t, out_path.c_str());
    return 0;
}

int cmd_import_paths(const std::string &csv_path, const std::string &export_path)
{
    std::ifstream in(csv_path);
    if (!in)
        throw ContractViolation("cannot open '" + csv_path + "'");
    const std::vector<PathSet> sets = import_paths_csv(in);
    std::size_t paths = 0;
    for (const PathSet &s : sets)
        paths += s.paths.size();
    std::printf("%zu locations, %zu paths\n", sets.size(), paths);
    for (const PathSet &s : sets)
    {
        double power = 0.0;
        for (const Path &p : s.paths)
            power += std::norm(p.gain);
        std::printf("  %-16s (%.3f, %.3f, %.3f)  %zu paths  total gain %.3f dB\n", s.id.c_str(), s.location.x,
                    s.location.y, s.location.z, s.paths.size(), power > 0.0 ? 10.0 * std::log10(power) : -INFINITY);
    }
    if (!export_path.empty())
    {
        std::ofstream out = open_output(export_path);
        export_paths_csv(out, sets);
    }
    return 0;
}

int cmd_summarize(const std::string &csv_path)
{
    std::ifstream in(csv_path);
    if (!in)
        throw ContractViolation("cannot open '" + csv_path + "'");
    const std::vector<TrialRecord> records = read_records_csv(in);
    write_summary_csv(std::cout, summarize(records));
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"ckmbf: environment-aware hybrid beamforming with channel knowledge maps"};
    app.require_subcommand(1);

    std::string config_path, out_path, kind = "cam", csv_path, export_path;
    std::uint64_t seed_value = 0;
    int threads = 0;
    bool quiet = false;
    std::size_t samples = 3700;

    CLI::App *run = app.add_subcommand("run", "run a Monte-Carlo experiment and write per-trial CSV");
    run->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_path, "output CSV")->required();
    CLI::Option *run_seed = run->add_option("--seed", seed_value, "override the master seed");
    run->add_option("--threads", threads, "OpenMP threads (default: runtime default)")->check(CLI::NonNegativeNumber);
    run->add_flag("--quiet", quiet, "do not print the summary table");

    CLI::App *build = app.add_subcommand("build-map", "build a CAM or BIM map from the synthetic scene");
    build->add_option("--kind", kind, "cam or bim")->required()->check(CLI::IsMember({"cam", "bim"}));
    build->add_option("--samples", samples, "number of sample locations")->required()->check(CLI::PositiveNumber);
    build->add_option("--out", out_path, "output map file")->required();
    build->add_option("--config", config_path, "config supplying arrays and CKM sizes (first tx array is used)")
        ->check(CLI::ExistingFile);
    CLI::Option *build_seed = build->add_option("--seed", seed_value, "override the master seed");

    CLI::App *import = app.add_subcommand("import-paths", "validate and summarise a path CSV");
    import->add_option("csv", csv_path, "path CSV")->required()->check(CLI::ExistingFile);
    import->add_option("--export", export_path, "re-export the parsed paths");

    CLI::App *summary = app.add_subcommand("summarize", "per-method means of a trial CSV");
    summary->add_option("csv", csv_path, "trial CSV written by 'run'")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (run->parsed())
            return cmd_run(config_path, out_path, run_seed->count() ? std::optional(seed_value) : std::nullopt,
                           threads, quiet);
        if (build->parsed())
            return cmd_build_map(kind, samples, out_path, config_path,
                                 build_seed->count() ? std::optional(seed_value) : std::nullopt);
        if (import->parsed())
            return cmd_import_paths(csv_path, export_path);
        if (summary->parsed())
            return cmd_summarize(csv_path);
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
