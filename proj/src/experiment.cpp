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

#include "ckmbf/experiment.hpp"

#include "ckmbf/errors.hpp"
#include "ckmbf/text_format.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <optional>

namespace ckm
{

namespace
{

// Seed-derivation tags; trial draws do not depend on the transmit array, so every array and
// method sees the same UE positions and location errors.
constexpr std::uint64_t kTagSamples = 1;
constexpr std::uint64_t kTagUe = 2;
constexpr std::uint64_t kTagError = 3;
constexpr std::uint64_t kTagMethod = 4;

std::uint64_t method_id(const std::string &method)
{
    const auto it = std::find(kKnownMethods.begin(), kKnownMethods.end(), method);
    if (it == kKnownMethods.end())
        throw ContractViolation("unknown method '" + method + "'");
    return static_cast<std::uint64_t>(it - kKnownMethods.begin());
}

} // namespace

Vec3 draw_location_error(double mean_m, Rng &rng)
{
    if (!(mean_m >= 0.0))
        throw ContractViolation("draw_location_error: mean must be nonnegative");
    const double u = uniform(rng, 0.0, 1.0);
    const double direction = uniform(rng, 0.0, kTwoPi);
    if (mean_m == 0.0)
        return {0.0, 0.0, 0.0};
    const double scale = mean_m / std::sqrt(kPi / 2.0);
    // inverse CDF of the Rayleigh distribution; 1 - u lies in (0, 1]
    const double radius = scale * std::sqrt(-2.0 * std::log(1.0 - u));
    return {radius * std::cos(direction), radius * std::sin(direction), 0.0};
}

Vec3 draw_location(const Box &region, Rng &rng)
{
    const double x = uniform(rng, region.lo.x, region.hi.x);
    const double y = uniform(rng, region.lo.y, region.hi.y);
    const double z = region.lo.z == region.hi.z ? region.lo.z : uniform(rng, region.lo.z, region.hi.z);
    return {std::clamp(x, region.lo.x, region.hi.x), std::clamp(y, region.lo.y, region.hi.y),
            std::clamp(z, region.lo.z, region.hi.z)};
}

Scene make_scene(const std::string &name)
{
    if (name == "street")
        return default_street_scene();
    throw ContractViolation("unknown scene '" + name + "'");
}

ArraySetup make_array_setup(const ExperimentConfig &cfg, const UpaGeometry &tx)
{
    ArraySetup s;
    s.tx = tx;
    s.rx = cfg.rx_array;
    s.dims.M_t = tx.size();
    s.dims.M_r = cfg.rx_array.size();
    s.dims.M_t_rf = cfg.M_t_rf;
    s.dims.M_r_rf = cfg.M_r_rf;
    s.dims.M_s = cfg.M_r_rf;
    s.dims.N = cfg.N;
    s.dims.snr = cfg.snr_linear();
    s.dims.validate();
    s.F = build_kronecker_dft(tx, cfg.codebook_oversampling);
    s.W = build_kronecker_dft(cfg.rx_array, cfg.codebook_oversampling);
    s.grid = grid_for(tx, cfg.rx_array, cfg.grid_oversampling);
    s.grid.validate(s.dims.M_r, s.dims.M_t);
    return s;
}

std::vector<Vec3> draw_sample_locations(const Scene &scene, std::size_t count, std::uint64_t master_seed)
{
    Rng rng(derive_seed(master_seed, {kTagSamples}));
    std::vector<Vec3> out(count);
    for (Vec3 &p : out)
        p = draw_location(scene.ue_region, rng);
    return out;
}

CkmDatabase build_cam_map(const Scene &scene, const std::vector<Vec3> &samples, const ArraySetup &setup,
                          const CkmParams &params)
{
    std::vector<CamEntry> entries(samples.size());
    const long count = static_cast<long>(samples.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < count; ++i)
        entries[static_cast<std::size_t>(i)] =
            build_cam_entry(generate_scene_paths(scene, samples[static_cast<std::size_t>(i)]), setup.grid, params.L_hat);
    CkmMeta meta{setup.grid, setup.F.fingerprint(), setup.W.fingerprint(), params.K};
    return CkmDatabase(std::move(meta), std::move(entries), {});
}

CkmDatabase build_bim_map(const Scene &scene, const std::vector<Vec3> &samples, const ArraySetup &setup,
                          const CkmParams &params)
{
    std::vector<BimSample> ranked(samples.size());
    const long count = static_cast<long>(samples.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < count; ++i)
    {
        const std::size_t k = static_cast<std::size_t>(i);
        const ComplexMatrix H = synthesize_channel(setup.tx, setup.rx, generate_scene_paths(scene, samples[k]));
        const ComplexMatrix Y = setup.W.beams.t() * H * setup.F.beams;
        auto [tx, rx] = rank_beams(Y);
        ranked[k] = {samples[k], std::move(tx), std::move(rx)};
    }
    CkmMeta meta{setup.grid, setup.F.fingerprint(), setup.W.fingerprint(), params.K};
    return CkmDatabase(std::move(meta), {}, build_bim_samples(ranked, params.tx_candidates, params.rx_candidates));
}

BasebandDesign estimated_channel_design(const ComplexMatrix &H_hat, const ArraySetup &setup, std::uint64_t budget)
{
    if (algorithm1_pairs(setup.F.size(), setup.W.size(), setup.dims) <= budget)
        return algorithm1(H_hat, setup.F, setup.W, setup.dims, budget).design;
    const ComplexMatrix Y = setup.W.beams.t() * H_hat * setup.F.beams;
    const SubmatrixSelection sel = select_submatrix_greedy(Y, setup.dims.M_t_rf, setup.dims.M_r_rf);
    BasebandDesign d = optimal_baseband(H_hat, setup.F.select(sel.cols), setup.W.select(sel.rows), setup.dims.snr);
    d.beamformer.tx_beams = sel.cols;
    d.beamformer.rx_beams = sel.rows;
    return d;
}

double achieved_rate(const ComplexMatrix &H_true, const HybridBeamformer &bf, double snr)
{
    return rate(effective_channel(H_true, bf.F_RF, bf.W_RF), bf.F_BB * bf.F_BB.t(), snr);
}

namespace
{

// Pads a short candidate list with the lowest unused beam indices.
std::vector<std::size_t> pad_beams(std::vector<std::size_t> beams, std::size_t wanted, std::size_t codebook_size)
{
    for (std::size_t b = 0; beams.size() < wanted && b < codebook_size; ++b)
        if (std::find(beams.begin(), beams.end(), b) == beams.end())
            beams.push_back(b);
    return beams;
}

MethodOutcome run_cam(const TrialContext &ctx, const ComplexMatrix &H_true, Vec3 reported, std::uint64_t seed)
{
    const ArraySetup &s = ctx.setup;
    CamEntry entry = query_cam(*ctx.cam_map, reported, ctx.cfg.ckm.L_hat, ctx.cfg.ckm.K);
    std::optional<CamTrainingPlan> plan;
    while (!plan)
    {
        if (entry.candidates.empty())
            throw SingularityError("cam: no candidate set gives a full-rank observation matrix", 0.0);
        try
        {
            plan = build_training_plan(candidate_steering(entry, s.grid, s.tx, s.rx), s.F, s.W, s.dims);
        }
        catch (const SingularityError &)
        {
            entry.candidates.pop_back();
        }
    }
    MethodOutcome out;
    out.N_tr = plan->symbols();
    if (out.N_tr > ctx.cfg.N)
        return out;
    const ComplexVector y = simulate_training(H_true, *plan, s.dims.snr, seed, ctx.cfg.noiseless_training);
    const GainEstimate est = estimate_gains(y, *plan, s.dims.snr);
    const ComplexMatrix H_hat = reconstruct_channel(plan->steering, est.gains);
    const BasebandDesign d = estimated_channel_design(H_hat, s, ctx.cfg.selection_budget);
    out.raw_rate = achieved_rate(H_true, d.beamformer, s.dims.snr);
    return out;
}

MethodOutcome run_bim(const TrialContext &ctx, const ComplexMatrix &H_true, Vec3 reported, std::uint64_t seed)
{
    const ArraySetup &s = ctx.setup;
    const BimQuery q =
        query_bim(*ctx.bim_map, reported, ctx.cfg.ckm.tx_candidates, ctx.cfg.ckm.rx_candidates, ctx.cfg.ckm.K);
    const ComplexMatrix F_hat = s.F.select(pad_beams(q.entry.tx_beams, s.dims.M_t_rf, s.F.size()));
    const ComplexMatrix W_hat = s.W.select(pad_beams(q.entry.rx_beams, s.dims.M_r_rf, s.W.size()));
    const SweepMeasurement meas = sweep(H_true, F_hat, W_hat, s.dims, s.dims.snr, seed, ctx.cfg.noiseless_training);
    MethodOutcome out;
    out.N_tr = meas.symbols;
    if (out.N_tr > ctx.cfg.N)
        return out;
    const SubmatrixSelection sel = select_submatrix_greedy(meas.equalized(), s.dims.M_t_rf, s.dims.M_r_rf);
    const BasebandDesign d = beamformers_from_sweep(meas, sel, F_hat, W_hat);
    out.raw_rate = achieved_rate(H_true, d.beamformer, s.dims.snr);
    return out;
}

MethodOutcome from_estimate(const TrialContext &ctx, const ComplexMatrix &H_true, const BaselineResult &res)
{
    MethodOutcome out;
    out.N_tr = res.N_tr;
    if (!res.feasible)
        return out;
    const BasebandDesign d = estimated_channel_design(res.H_hat, ctx.setup, ctx.cfg.selection_budget);
    out.raw_rate = achieved_rate(H_true, d.beamformer, ctx.setup.dims.snr);
    return out;
}

} // namespace

MethodOutcome run_method(const std::string &method, const TrialContext &ctx, const ComplexMatrix &H_true,
                         Vec3 true_location, Vec3 reported_location, std::uint64_t seed)
{
    (void)true_location;
    const ArraySetup &s = ctx.setup;
    const bool noiseless = ctx.cfg.noiseless_training;
    if (method == "optimal")
    {
        const BasebandDesign d = estimated_channel_design(H_true, s, ctx.cfg.selection_budget);
        return {achieved_rate(H_true, d.beamformer, s.dims.snr), 0};
    }
    if (method == "cam")
    {
        if (!ctx.cam_map)
            throw ContractViolation("run_method: cam needs a CAM map");
        return run_cam(ctx, H_true, reported_location, seed);
    }
    if (method == "bim")
    {
        if (!ctx.bim_map)
            throw ContractViolation("run_method: bim needs a BIM map");
        return run_bim(ctx, H_true, reported_location, seed);
    }
    if (method == "ls")
        return from_estimate(ctx, H_true, ls_full_estimate(H_true, s.tx, s.rx, s.dims, s.dims.snr, seed, noiseless));
    if (method == "omp")
    {
        const std::size_t L = ctx.cfg.omp.sparsity;
        const std::size_t m = ctx.cfg.omp.measurements != 0
                                  ? ctx.cfg.omp.measurements
                                  : std::max(L, omp_default_measurements(L, s.grid, s.dims.M_r_rf));
        return from_estimate(ctx, H_true,
                             omp_grid_estimate(H_true, s.grid, s.tx, s.rx, L, m, s.dims, s.dims.snr, seed, noiseless));
    }
    if (method == "location")
    {
        const BaselineResult res = location_based_beams(H_true, ctx.scene.bs_position, reported_location, s.F, s.W,
                                                        s.dims, s.dims.snr, seed, noiseless);
        MethodOutcome out;
        out.N_tr = res.N_tr;
        if (res.feasible)
            out.raw_rate = achieved_rate(H_true, res.design.beamformer, s.dims.snr);
        return out;
    }
    throw ContractViolation("run_method: unknown method '" + method + "'");
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig &cfg)
{
    cfg.validate();
    const Scene scene = make_scene(cfg.scene);
    scene.validate();
    const bool need_cam = std::find(cfg.methods.begin(), cfg.methods.end(), "cam") != cfg.methods.end();
    const bool need_bim = std::find(cfg.methods.begin(), cfg.methods.end(), "bim") != cfg.methods.end();
    const std::vector<Vec3> samples =
        (need_cam || need_bim) ? draw_sample_locations(scene, cfg.ckm.samples, cfg.master_seed) : std::vector<Vec3>{};

    // Trial positions are shared across transmit arrays and methods.
    std::vector<Vec3> true_loc(cfg.trials), offset(cfg.trials);
    for (std::size_t t = 0; t < cfg.trials; ++t)
    {
        Rng ue_rng(derive_seed(cfg.master_seed, {kTagUe, t}));
        Rng err_rng(derive_seed(cfg.master_seed, {kTagError, t}));
        true_loc[t] = draw_location(scene.ue_region, ue_rng);
        offset[t] = draw_location_error(cfg.location_error_mean_m, err_rng);
    }

    const std::size_t per_trial = cfg.methods.size();
    std::vector<TrialRecord> records;
    records.reserve(cfg.tx_arrays.size() * cfg.trials * per_trial);
    for (const UpaGeometry &tx : cfg.tx_arrays)
    {
        const ArraySetup setup = make_array_setup(cfg, tx);
        std::optional<CkmDatabase> cam_map, bim_map;
        if (need_cam)
            cam_map = build_cam_map(scene, samples, setup, cfg.ckm);
        if (need_bim)
            bim_map = build_bim_map(scene, samples, setup, cfg.ckm);
        const TrialContext ctx{cfg, scene, setup, cam_map ? &*cam_map : nullptr, bim_map ? &*bim_map : nullptr};

        std::vector<TrialRecord> block(cfg.trials * per_trial);
        std::vector<std::exception_ptr> errors(cfg.trials);
        const long trials = static_cast<long>(cfg.trials);
#pragma omp parallel for schedule(dynamic, 1)
        for (long ti = 0; ti < trials; ++ti)
        {
            const std::size_t t = static_cast<std::size_t>(ti);
            try
            {
                const PathSet paths = generate_scene_paths(scene, true_loc[t]);
                const ComplexMatrix H = synthesize_channel(setup.tx, setup.rx, paths);
                const Vec3 reported = true_loc[t] + offset[t];
                for (std::size_t m = 0; m < per_trial; ++m)
                {
                    const std::string &method = cfg.methods[m];
                    const std::uint64_t seed =
                        derive_seed(cfg.master_seed, {kTagMethod, method_id(method), setup.dims.M_t, t});
                    const MethodOutcome o = run_method(method, ctx, H, true_loc[t], reported, seed);
                    TrialRecord &r = block[t * per_trial + m];
                    r.method = method;
                    r.M_t = setup.dims.M_t;
                    r.trial = t;
                    r.raw_rate = o.raw_rate;
                    r.N_tr = o.N_tr;
                    r.effective_rate = o.N_tr <= cfg.N ? o.raw_rate * prelog_factor(o.N_tr, cfg.N) : 0.0;
                    r.loc_error_m = norm(offset[t]);
                    r.seed = seed;
                }
            }
            catch (...)
            {
                errors[t] = std::current_exception();
            }
        }
        for (const std::exception_ptr &e : errors)
            if (e)
                std::rethrow_exception(e);
        records.insert(records.end(), block.begin(), block.end());
    }
    return records;
}

void write_records_csv(std::ostream &out, const std::vector<TrialRecord> &records)
{
    out << kRecordCsvHeader << '\n';
    for (const TrialRecord &r : records)
        out << r.method << ',' << r.M_t << ',' << r.trial << ',' << format_double(r.raw_rate) << ',' << r.N_tr << ','
            << format_double(r.effective_rate) << ',' << format_double(r.loc_error_m) << ',' << r.seed << '\n';
}

std::vector<TrialRecord> read_records_csv(std::istream &in)
{
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || trim(line) != kRecordCsvHeader)
        throw ParseError(std::string("expected header '") + kRecordCsvHeader + "'", 1);
    std::vector<TrialRecord> out;
    while (std::getline(in, line))
    {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty())
            continue;
        const auto f = split(view, ',');
        if (f.size() != 8)
            throw ParseError("expected 8 fields", line_no);
        auto count = [&](std::string_view s) {
            std::uint64_t v = 0;
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc() || res.ptr != s.data() + s.size())
                throw ParseError("bad integer '" + std::string(s) + "'", line_no);
            return v;
        };
        auto real = [&](std::string_view s) {
            const auto v = parse_double(s);
            if (!v)
                throw ParseError("bad number '" + std::string(s) + "'", line_no);
            return *v;
        };
        TrialRecord r;
        r.method = std::string(f[0]);
        r.M_t = static_cast<std::size_t>(count(f[1]));
        r.trial = static_cast<std::size_t>(count(f[2]));
        r.raw_rate = real(f[3]);
        r.N_tr = static_cast<std::size_t>(count(f[4]));
        r.effective_rate = real(f[5]);
        r.loc_error_m = real(f[6]);
        r.seed = count(f[7]);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord> &records)
{
    if (records.empty())
        throw ContractViolation("summarize: no records");
    std::vector<std::pair<std::string, std::size_t>> order;
    std::map<std::pair<std::string, std::size_t>, std::vector<const TrialRecord *>> groups;
    for (const TrialRecord &r : records)
    {
        const auto key = std::make_pair(r.method, r.M_t);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted)
            order.push_back(key);
        it->second.push_back(&r);
    }
    std::vector<SummaryRow> rows;
    for (const auto &key : order)
    {
        const auto &g = groups.at(key);
        const double n = static_cast<double>(g.size());
        SummaryRow row;
        row.method = key.first;
        row.M_t = key.second;
        row.trials = g.size();
        for (const TrialRecord *r : g)
        {
            row.mean_effective_rate += r->effective_rate;
            row.mean_raw_rate += r->raw_rate;
            row.mean_N_tr += static_cast<double>(r->N_tr);
        }
        row.mean_effective_rate /= n;
        row.mean_raw_rate /= n;
        row.mean_N_tr /= n;
        if (g.size() > 1)
        {
            double ss = 0.0;
            for (const TrialRecord *r : g)
                ss += (r->effective_rate - row.mean_effective_rate) * (r->effective_rate - row.mean_effective_rate);
            row.stderr_effective_rate = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_summary_csv(std::ostream &out, const std::vector<SummaryRow> &rows)
{
    out << kSummaryCsvHeader << '\n';
    for (const SummaryRow &r : rows)
        out << r.method << ',' << r.M_t << ',' << r.trials << ',' << format_double(r.mean_effective_rate) << ','
            << format_double(r.stderr_effective_rate) << ',' << format_double(r.mean_raw_rate) << ','
            << format_double(r.mean_N_tr) << '\n';
}

} // namespace ckm
