// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The pinchopt Authors
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

// Command-line front end.
//
//   pinchopt solve   one instance, JSON to stdout
//   pinchopt sweep   experiment from a config file, CSV + JSON summary
//   pinchopt oracle  exhaustive grid search on one instance
//   pinchopt compare two schemes over the same deployments, paired table

#include "pinch/baselines.hpp"
#include "pinch/closedform.hpp"
#include "pinch/harness.hpp"
#include "pinch/kernels.hpp"
#include "pinch/oracle.hpp"
#include "pinch/sca.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

using nlohmann::ordered_json;
using namespace pinch;

namespace
{

struct CommonFlags
{
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<std::string> out;
    std::optional<std::string> gradient_mode;
    std::optional<std::string> attenuation;
    std::optional<double> fc_ghz;
    std::optional<double> power_dbm;
    std::optional<double> gamma_p;
    std::optional<double> side_d;
    std::optional<std::size_t> antennas;
    std::optional<int> gap_starts;

    void attach(CLI::App* app)
    {
        app->add_option("--seed", seed, "RNG seed");
        app->add_option("--trials", trials, "trials per sweep point");
        app->add_option("--out", out, "output path");
        app->add_option("--gradient-mode", gradient_mode, "paper | full");
        app->add_option("--attenuation", attenuation, "off | both | eval_only");
        app->add_option("--fc-ghz", fc_ghz, "carrier frequency in GHz");
        app->add_option("--power-dbm", power_dbm, "transmit power in dBm");
        app->add_option("--gamma-p", gamma_p, "primary SINR target (linear)");
        app->add_option("--side-d", side_d, "service region side in meters");
        app->add_option("--antennas", antennas, "number of pinching antennas");
        app->add_option("--gap-starts", gap_starts, "BCD starts with widened initial gaps (1: Newton start only)");
    }

    void apply(ExperimentSpec& spec) const
    {
        if (seed)
            spec.seed = *seed;
        if (trials)
            spec.trials = *trials;
        if (out)
            spec.output = *out;
        if (gradient_mode)
            spec.gradient_mode = parse_gradient_mode(*gradient_mode);
        if (attenuation)
            spec.attenuation = parse_attenuation_mode(*attenuation);
        if (fc_ghz)
            spec.fc_ghz = *fc_ghz;
        if (power_dbm)
            spec.power_dbm = *power_dbm;
        if (gamma_p)
            spec.gamma_p = *gamma_p;
        if (side_d)
            spec.side_d = *side_d;
        if (antennas)
            spec.antennas = *antennas;
        if (gap_starts)
            spec.gap_starts = *gap_starts;
    }
};

struct InstanceFlags
{
    std::optional<double> x_p, y_p, x_s, y_s;

    void attach(CLI::App* app)
    {
        app->add_option("--xp", x_p, "primary user x (m)");
        app->add_option("--yp", y_p, "primary user y (m)");
        app->add_option("--xs", x_s, "secondary user x (m)");
        app->add_option("--ys", y_s, "secondary user y (m)");
    }

    // Explicit coordinates, else the first deployment of the seed.
    UserPair users(const ExperimentSpec& spec) const
    {
        const bool any = x_p || y_p || x_s || y_s;
        if (any && !(x_p && y_p && x_s && y_s))
            throw std::invalid_argument("--xp, --yp, --xs and --ys must be given together");
        if (any)
            return {*x_p, *y_p, *x_s, *y_s};
        std::mt19937_64 rng = trial_rng(spec.seed, 0);
        return sample_deployment(rng, spec.side_d);
    }
};

ordered_json users_json(const UserPair& u)
{
    ordered_json j;
    j["x_p"] = u.x_p;
    j["y_p"] = u.y_p;
    j["x_s"] = u.x_s;
    j["y_s"] = u.y_s;
    return j;
}

ordered_json record_json(const TrialRecord& r)
{
    ordered_json j;
    j["scheme"] = to_string(r.scheme);
    if (r.scheme == Scheme::fixed_baseline)
        j["label"] = fixed_baseline_label;
    j["users"] = users_json(r.users);
    j["positions"] = r.positions;
    j["alpha_p"] = r.alloc.alpha_p;
    j["alpha_s"] = r.alloc.alpha_s;
    j["rate_p"] = r.rate_p;
    j["rate_s"] = r.rate_s;
    j["sum_rate"] = r.sum_rate;
    j["outer_iters"] = r.outer_iters;
    j["inner_iters_total"] = r.inner_iters_total;
    j["termination"] = r.termination;
    return j;
}

int run_solve(const CommonFlags& common, const InstanceFlags& inst, const std::string& scheme)
{
    ExperimentSpec spec;
    common.apply(spec);
    const UserPair users = inst.users(spec);
    const double v = spec.power_dbm;
    const TrialRecord r = run_trial(spec, v, 0, users, parse_scheme(scheme));
    ordered_json j = record_json(r);

    const SystemConfig cfg = config_for(spec, v);
    if (r.scheme == Scheme::bcd_sca)
    {
        ScaOptions opts;
        opts.gradient = spec.gradient_mode;
        opts.gap_starts = spec.gap_starts;
        const SolveReport rep = bcd_solve(cfg, users, spec.antennas, opts);
        j["rate_trace"] = rep.rate_trace;
        j["newton_fallback"] = rep.newton_fallback;
    }
    if (r.scheme == Scheme::closed_form_n1 && spec.antennas == 1)
    {
        const SingleAntennaSolution c = solve_n1(cfg, users);
        j["case"] = to_string(c.case_id);
        j["tight"] = to_string(c.tight);
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

int run_oracle(const CommonFlags& common, const InstanceFlags& inst, bool exact, double step)
{
    ExperimentSpec spec;
    common.apply(spec);
    const UserPair users = inst.users(spec);
    const SystemConfig cfg = config_for(spec, spec.power_dbm);
    OracleOptions oo;
    oo.mode = exact ? OracleMode::exact : OracleMode::coarse_to_fine;
    const OracleResult o =
        exhaustive_search(cfg, users, spec.antennas, GridSpec::for_instance(cfg, users, spec.antennas, step), oo);
    ordered_json j;
    j["users"] = users_json(users);
    j["mode"] = exact ? "exact" : "coarse_to_fine";
    j["kernel"] = kernels::to_string(kernels::active_isa());
    j["evaluations"] = o.evaluations;
    j["feasible"] = o.feasible;
    j["positions"] = o.solution.layout.positions;
    j["alpha_p"] = o.solution.alloc.alpha_p;
    j["alpha_s"] = o.solution.alloc.alpha_s;
    j["rate_p"] = o.solution.rate_p;
    j["rate_s"] = o.solution.rate_s;
    std::cout << j.dump(2) << '\n';
    return 0;
}

int run_sweep(const CommonFlags& common, const std::string& config)
{
    ExperimentSpec spec = config.empty() ? ExperimentSpec{} : load_experiment_spec(config);
    common.apply(spec);
    const ExperimentResult res = run_experiment(spec);
    if (spec.output.empty())
    {
        write_csv(res, std::cout);
        return 0;
    }
    save_experiment(spec, res);
    std::cerr << "wrote " << spec.output << " and " << spec.output << ".json\n";
    return 0;
}

int run_compare(const CommonFlags& common, const std::string& config, const std::string& a, const std::string& b)
{
    ExperimentSpec spec = config.empty() ? ExperimentSpec{} : load_experiment_spec(config);
    common.apply(spec);
    spec.schemes = {parse_scheme(a), parse_scheme(b)};
    if (config.empty())
    {
        spec.sweep = SweepVariable::P;
        spec.values = {spec.power_dbm};
    }
    const ExperimentResult res = run_experiment(spec);

    std::printf("%-12s %6s %12s %12s %9s\n", "sweep_value", "trial", a.c_str(), b.c_str(), "ratio");
    for (std::size_t k = 0; k + 1 < res.rows.size(); k += 2)
    {
        const TrialRecord& ra = res.rows[k];
        const TrialRecord& rb = res.rows[k + 1];
        std::printf("%-12g %6d %12.6f %12.6f %9.4f\n", ra.sweep_value, ra.trial, ra.rate_s, rb.rate_s,
                    rb.rate_s > 0.0 ? ra.rate_s / rb.rate_s : 0.0);
    }
    for (std::size_t k = 0; k + 1 < res.summary.size(); k += 2)
    {
        const PointSummary& pa = res.summary[k];
        const PointSummary& pb = res.summary[k + 1];
        std::printf("mean @ %g: %s %.6f  %s %.6f  ratio %.4f\n", pa.sweep_value, a.c_str(), pa.rate_s.mean,
                    b.c_str(), pb.rate_s.mean, pb.rate_s.mean > 0.0 ? pa.rate_s.mean / pb.rate_s.mean : 0.0);
    }
    if (!spec.output.empty())
        save_experiment(spec, res);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Joint antenna placement and NOMA power allocation for pinching-antenna systems"};
    app.require_subcommand(1);

    CommonFlags solve_flags, sweep_flags, oracle_flags, compare_flags;
    InstanceFlags solve_inst, oracle_inst;

    std::string scheme = "bcd_sca";
    auto* solve = app.add_subcommand("solve", "solve one instance and print JSON");
    solve_flags.attach(solve);
    solve_inst.attach(solve);
    solve->add_option("--scheme", scheme, "bcd_sca | closed_form_n1 | exhaustive | oma | fixed_baseline");

    std::string sweep_config;
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from a config file");
    sweep_flags.attach(sweep);
    sweep->add_option("--config", sweep_config, "flat key = value experiment file");

    bool exact = false;
    double step = 0.0;
    auto* oracle = app.add_subcommand("oracle", "exhaustive grid search on one instance");
    oracle_flags.attach(oracle);
    oracle_inst.attach(oracle);
    oracle->add_flag("--exact", exact, "single-pass full grid instead of coarse-to-fine");
    oracle->add_option("--step", step, "grid step in meters (default lambda/50)");

    std::string compare_config, scheme_a = "bcd_sca", scheme_b = "exhaustive";
    auto* compare = app.add_subcommand("compare", "two schemes on paired deployments");
    compare_flags.attach(compare);
    compare->add_option("--config", compare_config, "optional experiment file for the sweep");
    compare->add_option("--a", scheme_a, "first scheme");
    compare->add_option("--b", scheme_b, "second scheme");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*solve)
            return run_solve(solve_flags, solve_inst, scheme);
        if (*sweep)
            return run_sweep(sweep_flags, sweep_config);
        if (*oracle)
            return run_oracle(oracle_flags, oracle_inst, exact, step);
        if (*compare)
            return run_compare(compare_flags, compare_config, scheme_a, scheme_b);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
