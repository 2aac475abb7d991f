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

#include "pinch/harness.hpp"

#include "pinch/baselines.hpp"
#include "pinch/closedform.hpp"
#include "pinch/power.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace pinch
{

namespace
{

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

double parse_number(const std::string& key, const std::string& v)
{
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw std::invalid_argument("bad number for " + key + ": " + v);
    return x;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& v)
{
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw std::invalid_argument("bad integer for " + key + ": " + v);
    return x;
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "on" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "off" || v == "no")
        return false;
    throw std::invalid_argument("bad boolean for " + key + ": " + v);
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform on [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementation.
double unit_uniform(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Moments moments(const std::vector<double>& v)
{
    Moments m;
    if (v.empty())
        return m;
    for (double x : v)
        m.mean += x;
    m.mean /= static_cast<double>(v.size());
    if (v.size() > 1)
    {
        double ss = 0.0;
        for (double x : v)
            ss += (x - m.mean) * (x - m.mean);
        m.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return m;
}

void fill_from_solution(TrialRecord& r, const Solution& s)
{
    r.alloc = s.alloc;
    r.positions = s.layout.positions;
    r.rate_p = s.rate_p;
    r.rate_s = s.rate_s;
    r.sum_rate = s.sum_rate;
    r.outer_iters = s.outer_iters;
    r.inner_iters_total = s.inner_iters_total;
    r.termination = s.termination;
}

// NOMA rates of a layout under the evaluation channel with a fresh power split.
void reevaluate_noma(const SystemConfig& eval_cfg, const UserPair& users, TrialRecord& r)
{
    Solution s;
    s.layout.positions = r.positions;
    const PowerUpdateResult pu = optimal_power_split(eval_cfg, effective_channel(eval_cfg, users, s.layout), s.layout.size());
    s.alloc = pu.alloc;
    evaluate_solution(eval_cfg, users, s);
    r.alloc = s.alloc;
    r.rate_p = s.rate_p;
    r.rate_s = s.rate_s;
    r.sum_rate = s.sum_rate;
    if (pu.infeasible_qos)
        r.termination = "infeasible_qos";
}

} // namespace

const char* to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::bcd_sca: return "bcd_sca";
    case Scheme::closed_form_n1: return "closed_form_n1";
    case Scheme::exhaustive: return "exhaustive";
    case Scheme::oma: return "oma";
    case Scheme::fixed_baseline: return "fixed_baseline";
    }
    return "unknown";
}

const char* to_string(SweepVariable v)
{
    switch (v)
    {
    case SweepVariable::P: return "P";
    case SweepVariable::gamma_p: return "gamma_p";
    case SweepVariable::N: return "N";
    case SweepVariable::D: return "D";
    case SweepVariable::f_c: return "f_c";
    }
    return "unknown";
}

const char* to_string(AttenuationMode m)
{
    switch (m)
    {
    case AttenuationMode::off: return "off";
    case AttenuationMode::both: return "both";
    case AttenuationMode::eval_only: return "eval_only";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& text)
{
    for (Scheme s : {Scheme::bcd_sca, Scheme::closed_form_n1, Scheme::exhaustive, Scheme::oma, Scheme::fixed_baseline})
        if (text == to_string(s))
            return s;
    throw std::invalid_argument("unknown scheme: " + text);
}

SweepVariable parse_sweep_variable(const std::string& text)
{
    for (SweepVariable v : {SweepVariable::P, SweepVariable::gamma_p, SweepVariable::N, SweepVariable::D, SweepVariable::f_c})
        if (text == to_string(v))
            return v;
    throw std::invalid_argument("unknown sweep variable: " + text);
}

AttenuationMode parse_attenuation_mode(const std::string& text)
{
    if (text == "off")
        return AttenuationMode::off;
    if (text == "both" || text == "on")
        return AttenuationMode::both;
    if (text == "eval_only")
        return AttenuationMode::eval_only;
    throw std::invalid_argument("unknown attenuation mode: " + text);
}

void ExperimentSpec::validate() const
{
    if (schemes.empty())
        throw std::invalid_argument("at least one scheme is required");
    if (values.empty())
        throw std::invalid_argument("sweep needs at least one value");
    if (trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    if (!(attenuation_db_per_m >= 0.0))
        throw std::invalid_argument("attenuation_db_per_m must be nonnegative");
    if (gap_starts < 1)
        throw std::invalid_argument("gap_starts must be >= 1");
    for (double v : values)
    {
        if (sweep == SweepVariable::N && (v < 1.0 || v != std::floor(v)))
            throw std::invalid_argument("N sweep values must be positive integers");
        config_for(*this, v).validate();
    }
}

ExperimentSpec parse_experiment_spec(const std::string& text)
{
    ExperimentSpec spec;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "schemes" || key == "scheme")
        {
            spec.schemes.clear();
            for (const auto& s : split_list(val))
                spec.schemes.push_back(parse_scheme(s));
        }
        else if (key == "sweep")
            spec.sweep = parse_sweep_variable(val);
        else if (key == "values")
        {
            spec.values.clear();
            for (const auto& s : split_list(val))
                spec.values.push_back(parse_number(key, s));
        }
        else if (key == "trials")
            spec.trials = static_cast<int>(parse_unsigned(key, val));
        else if (key == "seed")
            spec.seed = parse_unsigned(key, val);
        else if (key == "output")
            spec.output = val;
        else if (key == "gradient_mode")
            spec.gradient_mode = parse_gradient_mode(val);
        else if (key == "attenuation")
            spec.attenuation = parse_attenuation_mode(val);
        else if (key == "attenuation_db_per_m")
            spec.attenuation_db_per_m = parse_number(key, val);
        else if (key == "fc_ghz")
            spec.fc_ghz = parse_number(key, val);
        else if (key == "power_dbm")
            spec.power_dbm = parse_number(key, val);
        else if (key == "noise_dbm")
            spec.noise_dbm = parse_number(key, val);
        else if (key == "gamma_p")
            spec.gamma_p = parse_number(key, val);
        else if (key == "side_d")
            spec.side_d = parse_number(key, val);
        else if (key == "height_d")
            spec.height_d = parse_number(key, val);
        else if (key == "n_neff")
            spec.n_neff = parse_number(key, val);
        else if (key == "x0")
            spec.x0 = parse_number(key, val);
        else if (key == "antennas")
            spec.antennas = static_cast<std::size_t>(parse_unsigned(key, val));
        else if (key == "oracle_mode")
        {
            if (val == "coarse_to_fine")
                spec.oracle_mode = OracleMode::coarse_to_fine;
            else if (val == "exact")
                spec.oracle_mode = OracleMode::exact;
            else
                throw std::invalid_argument("unknown oracle_mode: " + val);
        }
        else if (key == "gap_starts")
            spec.gap_starts = static_cast<int>(parse_unsigned(key, val));
        else if (key == "workers")
            spec.workers = static_cast<unsigned>(parse_unsigned(key, val));
        else if (key == "timing")
            spec.timing = parse_bool(key, val);
        else
            throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    spec.validate();
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_experiment_spec(ss.str());
}

SystemConfig config_for(const ExperimentSpec& spec, double v)
{
    const double fc = (spec.sweep == SweepVariable::f_c ? v : spec.fc_ghz) * 1e9;
    SystemConfig cfg = SystemConfig::with_defaults(fc);
    cfg.transmit_power = dbm_to_watt(spec.sweep == SweepVariable::P ? v : spec.power_dbm);
    cfg.noise_power_primary = dbm_to_watt(spec.noise_dbm);
    cfg.noise_power_secondary = cfg.noise_power_primary;
    cfg.gamma_p = spec.sweep == SweepVariable::gamma_p ? v : spec.gamma_p;
    cfg.region_side = spec.sweep == SweepVariable::D ? v : spec.side_d;
    cfg.waveguide_height = spec.height_d;
    cfg.effective_refractive_index = spec.n_neff;
    cfg.feed_point_x0 = spec.x0;
    if (spec.attenuation == AttenuationMode::both)
        cfg.inwaveguide_attenuation = spec.attenuation_db_per_m;
    if (spec.attenuation == AttenuationMode::eval_only)
        cfg.downstream_only = true;
    return cfg;
}

std::size_t antennas_for(const ExperimentSpec& spec, double v)
{
    return spec.sweep == SweepVariable::N ? static_cast<std::size_t>(std::llround(v)) : spec.antennas;
}

UserPair sample_deployment(std::mt19937_64& rng, double side)
{
    if (!(side > 0.0))
        throw std::invalid_argument("region side must be positive");
    UserPair u;
    u.x_p = side * unit_uniform(rng);
    u.y_p = side * unit_uniform(rng);
    u.x_s = side * unit_uniform(rng);
    u.y_s = side * unit_uniform(rng);
    return u;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial)
{
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ (trial * 0xd1b54a32d192ed03ULL)));
}

TrialRecord run_trial(const ExperimentSpec& spec, double v, int trial, const UserPair& users, Scheme scheme)
{
    const SystemConfig cfg = config_for(spec, v);
    const std::size_t n = antennas_for(spec, v);

    TrialRecord r;
    r.seed = spec.seed;
    r.trial = trial;
    r.sweep_value = v;
    r.users = users;
    r.scheme = scheme;

    ScaOptions opts;
    opts.gradient = spec.gradient_mode;
    opts.gap_starts = spec.gap_starts;

    const auto t0 = std::chrono::steady_clock::now();
    try
    {
        switch (scheme)
        {
        case Scheme::bcd_sca:
            fill_from_solution(r, bcd_solve(cfg, users, n, opts).solution);
            break;
        case Scheme::closed_form_n1: {
            if (n != 1)
            {
                r.termination = "unsupported_n";
                break;
            }
            const SingleAntennaSolution c = solve_n1(cfg, users);
            Solution s;
            s.layout.positions = {c.x_star};
            s.alloc = {c.alpha_p_star, c.alpha_s_star};
            evaluate_solution(cfg, users, s);
            s.termination = c.case_id == SingleAntennaCase::infeasible ? "infeasible_qos" : "converged";
            fill_from_solution(r, s);
            break;
        }
        case Scheme::exhaustive: {
            OracleOptions oo;
            oo.mode = spec.oracle_mode;
            oo.threads = 1;
            const OracleResult o = exhaustive_search(cfg, users, n, GridSpec::for_instance(cfg, users, n), oo);
            fill_from_solution(r, o.solution);
            break;
        }
        case Scheme::oma: {
            const OmaSolution o = oma_solve(cfg, users, n, opts);
            r.alloc = {1.0, 1.0}; // each user owns the full power in its slot
            r.positions = o.layout_p.positions;
            r.positions.insert(r.positions.end(), o.layout_s.positions.begin(), o.layout_s.positions.end());
            r.rate_p = o.rate_p;
            r.rate_s = o.rate_s;
            r.sum_rate = o.sum_rate;
            r.inner_iters_total = o.inner_iters_total;
            r.termination = "converged";
            break;
        }
        case Scheme::fixed_baseline:
            fill_from_solution(r, fixed_baseline(cfg, users, n));
            break;
        }

        if (spec.attenuation == AttenuationMode::eval_only && !r.positions.empty() && r.termination != "unsupported_n")
        {
            SystemConfig eval_cfg = cfg;
            eval_cfg.inwaveguide_attenuation = spec.attenuation_db_per_m;
            if (scheme == Scheme::oma)
            {
                const AntennaLayout lp{std::vector<double>(r.positions.begin(), r.positions.begin() + static_cast<long>(n))};
                const AntennaLayout ls{std::vector<double>(r.positions.begin() + static_cast<long>(n), r.positions.end())};
                r.rate_p = oma_rate(eval_cfg, users, lp, User::primary);
                r.rate_s = oma_rate(eval_cfg, users, ls, User::secondary);
                r.sum_rate = r.rate_p + r.rate_s;
            }
            else
            {
                reevaluate_noma(eval_cfg, users, r);
            }
        }
    }
    catch (const std::exception& e)
    {
        r.termination = std::string("error: ") + e.what();
    }
    if (spec.timing)
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

ExperimentResult run_experiment(const ExperimentSpec& spec)
{
    spec.validate();
    const std::size_t n_values = spec.values.size();
    const auto n_trials = static_cast<std::size_t>(spec.trials);
    const std::size_t n_schemes = spec.schemes.size();

    // Unit-square draws per trial, scaled by the region side of each point.
    std::vector<UserPair> unit(n_trials);
    for (std::size_t t = 0; t < n_trials; ++t)
    {
        std::mt19937_64 rng = trial_rng(spec.seed, t);
        unit[t] = sample_deployment(rng, 1.0);
    }

    ExperimentResult res;
    res.rows.resize(n_values * n_trials * n_schemes);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t job = next++; job < n_values * n_trials; job = next++)
        {
            const std::size_t vi = job / n_trials;
            const std::size_t t = job % n_trials;
            const double v = spec.values[vi];
            const double side = config_for(spec, v).region_side;
            const UserPair& u = unit[t];
            const UserPair users{u.x_p * side, u.y_p * side, u.x_s * side, u.y_s * side};
            for (std::size_t si = 0; si < n_schemes; ++si)
                res.rows[job * n_schemes + si] = run_trial(spec, v, static_cast<int>(t), users, spec.schemes[si]);
        }
    };
    unsigned workers = spec.workers != 0 ? spec.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_values * n_trials));
    if (workers <= 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    for (std::size_t vi = 0; vi < n_values; ++vi)
    {
        for (std::size_t si = 0; si < n_schemes; ++si)
        {
            PointSummary p;
            p.sweep_value = spec.values[vi];
            p.scheme = spec.schemes[si];
            std::vector<double> rp, rs, sr, oi;
            for (std::size_t t = 0; t < n_trials; ++t)
            {
                const TrialRecord& r = res.rows[(vi * n_trials + t) * n_schemes + si];
                ++p.trials;
                if (r.termination == "converged" || r.termination == "max_iter" ||
                    r.termination == "trust_region_collapse")
                    ++p.feasible;
                rp.push_back(r.rate_p);
                rs.push_back(r.rate_s);
                sr.push_back(r.sum_rate);
                oi.push_back(r.outer_iters);
            }
            p.rate_p = moments(rp);
            p.rate_s = moments(rs);
            p.sum_rate = moments(sr);
            p.outer_iters = moments(oi);
            res.summary.push_back(p);
        }
    }
    return res;
}

std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc())
        return "nan";
    return std::string(buf, ptr);
}

void write_csv(const ExperimentResult& result, std::ostream& out)
{
    out << "seed,trial,sweep_value,x_p,y_p,x_s,y_s,scheme,alpha_p,alpha_s,positions,rate_p,rate_s,sum_rate,"
           "outer_iters,inner_iters_total,wall_ms,termination\n";
    for (const TrialRecord& r : result.rows)
    {
        std::string pos;
        for (std::size_t i = 0; i < r.positions.size(); ++i)
        {
            if (i)
                pos += ';';
            pos += format_double(r.positions[i]);
        }
        std::string term = r.termination;
        std::replace(term.begin(), term.end(), ',', ';');
        std::replace(term.begin(), term.end(), '\n', ' ');
        out << r.seed << ',' << r.trial << ',' << format_double(r.sweep_value) << ',' << format_double(r.users.x_p)
            << ',' << format_double(r.users.y_p) << ',' << format_double(r.users.x_s) << ','
            << format_double(r.users.y_s) << ',' << to_string(r.scheme) << ',' << format_double(r.alloc.alpha_p)
            << ',' << format_double(r.alloc.alpha_s) << ',' << pos << ',' << format_double(r.rate_p) << ','
            << format_double(r.rate_s) << ',' << format_double(r.sum_rate) << ',' << r.outer_iters << ','
            << r.inner_iters_total << ',' << format_double(r.wall_ms) << ',' << term << '\n';
    }
}

void write_summary_json(const ExperimentSpec& spec, const ExperimentResult& result, std::ostream& out)
{
    using nlohmann::ordered_json;
    ordered_json j;
    ordered_json s;
    ordered_json schemes = ordered_json::array();
    for (Scheme sc : spec.schemes)
        schemes.push_back(to_string(sc));
    s["schemes"] = schemes;
    s["sweep"] = to_string(spec.sweep);
    s["values"] = spec.values;
    s["trials"] = spec.trials;
    s["seed"] = spec.seed;
    s["gradient_mode"] = to_string(spec.gradient_mode);
    s["attenuation"] = to_string(spec.attenuation);
    s["attenuation_db_per_m"] = spec.attenuation_db_per_m;
    s["fc_ghz"] = spec.fc_ghz;
    s["power_dbm"] = spec.power_dbm;
    s["noise_dbm"] = spec.noise_dbm;
    s["gamma_p"] = spec.gamma_p;
    s["side_d"] = spec.side_d;
    s["height_d"] = spec.height_d;
    s["n_neff"] = spec.n_neff;
    s["x0"] = spec.x0;
    s["antennas"] = spec.antennas;
    s["oracle_mode"] = spec.oracle_mode == OracleMode::exact ? "exact" : "coarse_to_fine";
    s["gap_starts"] = spec.gap_starts;
    j["spec"] = s;

    auto mom = [](const Moments& m) {
        ordered_json o;
        o["mean"] = m.mean;
        o["std"] = m.stddev;
        return o;
    };
    ordered_json points = ordered_json::array();
    for (const PointSummary& p : result.summary)
    {
        ordered_json o;
        o["sweep_value"] = p.sweep_value;
        o["scheme"] = to_string(p.scheme);
        if (p.scheme == Scheme::fixed_baseline)
            o["label"] = fixed_baseline_label;
        o["trials"] = p.trials;
        o["feasible"] = p.feasible;
        o["rate_p"] = mom(p.rate_p);
        o["rate_s"] = mom(p.rate_s);
        o["sum_rate"] = mom(p.sum_rate);
        o["outer_iters"] = mom(p.outer_iters);
        points.push_back(o);
    }
    j["points"] = points;
    out << j.dump(2) << '\n';
}

void save_experiment(const ExperimentSpec& spec, const ExperimentResult& result)
{
    if (spec.output.empty())
        throw std::invalid_argument("no output path set");
    std::ofstream csv(spec.output, std::ios::binary);
    if (!csv)
        throw std::runtime_error("cannot write " + spec.output);
    write_csv(result, csv);
    std::ofstream js(spec.output + ".json", std::ios::binary);
    if (!js)
        throw std::runtime_error("cannot write " + spec.output + ".json");
    write_summary_json(spec, result, js);
}

} // namespace pinch
