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

#include "pinch/sca.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace pinch
{

namespace
{

constexpr double two_pi = 2.0 * std::numbers::pi;

double attenuation_log_slope(const SystemConfig& cfg)
{
    return cfg.inwaveguide_attenuation > 0.0 ? -std::log(10.0) * cfg.inwaveguide_attenuation / 20.0 : 0.0;
}

TermExpansion expand_user(const SystemConfig& cfg, double x_m, double c_m, const std::vector<double>& positions,
                          GradientMode mode)
{
    const std::size_t n = positions.size();
    TermExpansion e;
    e.d.resize(n);
    e.d_slope.resize(n);
    e.t_re.resize(n);
    e.t_im.resize(n);
    e.t_re_slope.resize(n);
    e.t_im_slope.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double x = positions[i];
        const double dx = x - x_m;
        e.d[i] = std::sqrt(dx * dx + c_m);
        e.d_slope[i] = dx / e.d[i];
        const std::complex<double> t = channel_term(cfg, x_m, c_m, x);
        e.t_re[i] = t.real();
        e.t_im[i] = t.imag();
        std::tie(e.t_re_slope[i], e.t_im_slope[i]) = term_slope(cfg, x_m, c_m, x, mode);
        e.g_re += e.t_re[i];
        e.g_im += e.t_im[i];
    }
    return e;
}

// Linearized gain ||g||^2 as G + sum_n w_n u_n, u in wavelengths.
std::vector<double> gain_weights(const TermExpansion& e, double lambda)
{
    std::vector<double> w(e.d.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = 2.0 * lambda * (e.g_re * e.t_re_slope[i] + e.g_im * e.t_im_slope[i]);
    return w;
}

struct Objective
{
    User user = User::secondary;
    double fraction = 0.0; // power share carried by the objective user
};

Objective objective_of(const PowerAllocation& alloc, const ScaOptions& opts)
{
    if (opts.single_user)
        return {*opts.single_user, 1.0};
    return {User::secondary, alloc.alpha_s};
}

// Right side of a linearized QoS row: N sigma_m^2 gamma / (alpha_p P - alpha_s P gamma), in gain units.
double qos_requirement(const SystemConfig& cfg, const PowerAllocation& alloc, User m, std::size_t n)
{
    const double coef = alloc.alpha_p * cfg.transmit_power - alloc.alpha_s * cfg.transmit_power * cfg.gamma_p;
    if (!(coef > 0.0))
        throw std::invalid_argument("QoS linearization requires alpha_p - alpha_s * gamma_p > 0");
    return static_cast<double>(n) * cfg.noise_power(m) * cfg.gamma_p / coef;
}

// Step bounds for antenna i in wavelengths: trust box, guard interval, feed point.
std::pair<double, double> step_bounds(const SystemConfig& cfg, const UserPair& users, double x, double radius)
{
    double lo = users.x_min() - cfg.region_side;
    const double hi = users.x_max() + cfg.region_side;
    if (cfg.requires_downstream())
        lo = std::max(lo, cfg.feed_point_x0);
    const double lambda = cfg.wavelength();
    const double step_lo = std::min(0.0, std::max(-radius, lo - x));
    const double step_hi = std::max(0.0, std::min(radius, hi - x));
    return {step_lo / lambda, step_hi / lambda};
}

void add_spacing_rows(LinearProgram& lp, const SystemConfig& cfg, const std::vector<double>& x)
{
    const double lambda = cfg.wavelength();
    for (std::size_t i = 1; i < x.size(); ++i)
    {
        std::vector<double> row(lp.num_vars(), 0.0);
        row[i - 1] = 1.0;
        row[i] = -1.0;
        lp.add_row(std::move(row), RowSense::less_equal, std::max(x[i] - x[i - 1] - cfg.min_spacing, 0.0) / lambda);
    }
}

double objective_snr(const SystemConfig& cfg, const Objective& obj, double gain, std::size_t n)
{
    return obj.fraction * cfg.transmit_power * gain / (static_cast<double>(n) * cfg.noise_power(obj.user));
}

} // namespace

const char* to_string(GradientMode mode)
{
    return mode == GradientMode::paper ? "paper" : "full";
}

GradientMode parse_gradient_mode(const std::string& text)
{
    if (text == "paper")
        return GradientMode::paper;
    if (text == "full")
        return GradientMode::full;
    throw std::invalid_argument("unknown gradient mode: " + text);
}

std::pair<double, double> term_slope(const SystemConfig& cfg, double x_m, double c_m, double x, GradientMode mode)
{
    const std::complex<double> t = channel_term(cfg, x_m, c_m, x);
    const double k_g = two_pi / cfg.guided_wavelength();
    double rho = 0.0;   // d log(amplitude) / dx
    double omega = k_g; // d phase / dx
    if (mode == GradientMode::full)
    {
        const double dx = x - x_m;
        const double dist = std::sqrt(dx * dx + c_m);
        const double d_slope = dx / dist;
        rho = -d_slope / dist + attenuation_log_slope(cfg);
        omega += two_pi / cfg.wavelength() * d_slope;
    }
    // t = a e^{-j phi}  =>  t' = (rho - j omega) t
    return {rho * t.real() + omega * t.imag(), rho * t.imag() - omega * t.real()};
}

ScaIterate ScaIterate::expand(const SystemConfig& cfg, const UserPair& users, const std::vector<double>& positions,
                              GradientMode mode, double trust_radius)
{
    const double h = cfg.waveguide_height;
    ScaIterate it;
    it.positions = positions;
    it.p = expand_user(cfg, users.x_p, users.c(User::primary, h), positions, mode);
    it.s = expand_user(cfg, users.x_s, users.c(User::secondary, h), positions, mode);
    it.trust_radius = trust_radius;
    return it;
}

Subproblem linearize(const SystemConfig& cfg, const UserPair& users, const ScaIterate& it, const PowerAllocation& alloc,
                     const ScaOptions& opts)
{
    const std::size_t n = it.positions.size();
    const double lambda = cfg.wavelength();
    const Objective obj = objective_of(alloc, opts);

    Subproblem sp;
    for (std::size_t i = 0; i < n; ++i)
    {
        const auto [lo, hi] = step_bounds(cfg, users, it.positions[i], it.trust_radius);
        sp.lp.add_variable(lo, hi);
    }
    const std::size_t z = sp.lp.add_variable(-lp_infinity, lp_infinity, 1.0);

    // Objective cut: z <= (G + w.u) * fraction * P / (N sigma^2).
    const TermExpansion& eo = it.of(obj.user);
    const double g0 = eo.gain();
    sp.z_now = objective_snr(cfg, obj, g0, n);
    std::vector<double> cut(n + 1, 0.0);
    cut[z] = 1.0;
    if (g0 > 0.0 && obj.fraction > 0.0)
    {
        const double scale = objective_snr(cfg, obj, 1.0, n);
        const std::vector<double> w = gain_weights(eo, lambda);
        for (std::size_t i = 0; i < n; ++i)
            cut[i] = -w[i] * scale;
        sp.lp.add_row(std::move(cut), RowSense::less_equal, sp.z_now);
    }
    else
    {
        sp.degenerate_cut = g0 <= 0.0;
        sp.lp.add_row(std::move(cut), RowSense::less_equal, 0.0);
    }

    // QoS rows: linearized gain may not fall below min(requirement, current).
    if (!opts.single_user)
    {
        for (User m : {User::primary, User::secondary})
        {
            const TermExpansion& e = it.of(m);
            const double r = qos_requirement(cfg, alloc, m, n);
            const std::vector<double> w = gain_weights(e, lambda);
            std::vector<double> row(n + 1, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                row[i] = -w[i] / r;
            sp.lp.add_row(std::move(row), RowSense::less_equal, std::max(e.gain() / r - 1.0, 0.0));
        }
    }

    add_spacing_rows(sp.lp, cfg, it.positions);
    return sp;
}

Subproblem linearize_full(const SystemConfig& cfg, const UserPair& users, const ScaIterate& it,
                          const PowerAllocation& alloc, const ScaOptions& opts)
{
    const std::size_t n = it.positions.size();
    const double lambda = cfg.wavelength();
    const Objective obj = objective_of(alloc, opts);

    Subproblem sp;
    LinearProgram& lp = sp.lp;
    for (std::size_t i = 0; i < n; ++i)
    {
        const auto [lo, hi] = step_bounds(cfg, users, it.positions[i], it.trust_radius);
        lp.add_variable(lo, hi);
    }
    const std::size_t z = lp.add_variable(-lp_infinity, lp_infinity, 1.0);

    struct UserVars
    {
        std::size_t d, t_re, t_im, h_re, h_im;
    };
    auto add_user = [&]() {
        UserVars v{};
        v.d = lp.num_vars();
        for (std::size_t i = 0; i < n; ++i)
            lp.add_variable(-lp_infinity, lp_infinity);
        v.t_re = lp.num_vars();
        for (std::size_t i = 0; i < n; ++i)
            lp.add_variable(-lp_infinity, lp_infinity);
        v.t_im = lp.num_vars();
        for (std::size_t i = 0; i < n; ++i)
            lp.add_variable(-lp_infinity, lp_infinity);
        v.h_re = lp.add_variable(-lp_infinity, lp_infinity);
        v.h_im = lp.add_variable(-lp_infinity, lp_infinity);
        return v;
    };
    const UserVars vp = add_user();
    const UserVars vs = add_user();
    const std::size_t nv = lp.num_vars();

    // t and h are carried in units of tau so every row is O(1).
    double d_min = lp_infinity;
    for (const TermExpansion* e : {&it.p, &it.s})
        for (double d : e->d)
            d_min = std::min(d_min, d);
    const double tau = std::sqrt(cfg.eta()) / d_min;

    auto tie_rows = [&](const TermExpansion& e, const UserVars& v) {
        for (std::size_t i = 0; i < n; ++i)
        {
            std::vector<double> rd(nv, 0.0), rr(nv, 0.0), ri(nv, 0.0);
            rd[v.d + i] = 1.0;
            rd[i] = -e.d_slope[i] * lambda;
            lp.add_row(std::move(rd), RowSense::equal, e.d[i]);
            rr[v.t_re + i] = 1.0;
            rr[i] = -e.t_re_slope[i] * lambda / tau;
            lp.add_row(std::move(rr), RowSense::equal, e.t_re[i] / tau);
            ri[v.t_im + i] = 1.0;
            ri[i] = -e.t_im_slope[i] * lambda / tau;
            lp.add_row(std::move(ri), RowSense::equal, e.t_im[i] / tau);
        }
        std::vector<double> hr(nv, 0.0), hi(nv, 0.0);
        hr[v.h_re] = 1.0;
        hi[v.h_im] = 1.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            hr[v.t_re + i] = -1.0;
            hi[v.t_im + i] = -1.0;
        }
        lp.add_row(std::move(hr), RowSense::equal, 0.0);
        lp.add_row(std::move(hi), RowSense::equal, 0.0);
    };
    tie_rows(it.p, vp);
    tie_rows(it.s, vs);

    // G + 2 g.(h - g) = 2 g.h - G
    const TermExpansion& eo = it.of(obj.user);
    const UserVars& vo = obj.user == User::primary ? vp : vs;
    const double g0 = eo.gain();
    sp.z_now = objective_snr(cfg, obj, g0, n);
    std::vector<double> cut(nv, 0.0);
    cut[z] = 1.0;
    if (g0 > 0.0 && obj.fraction > 0.0)
    {
        const double scale = objective_snr(cfg, obj, 1.0, n);
        cut[vo.h_re] = -2.0 * eo.g_re * tau * scale;
        cut[vo.h_im] = -2.0 * eo.g_im * tau * scale;
        lp.add_row(std::move(cut), RowSense::less_equal, -g0 * scale);
    }
    else
    {
        sp.degenerate_cut = g0 <= 0.0;
        lp.add_row(std::move(cut), RowSense::less_equal, 0.0);
    }

    if (!opts.single_user)
    {
        for (User m : {User::primary, User::secondary})
        {
            const TermExpansion& e = it.of(m);
            const UserVars& v = m == User::primary ? vp : vs;
            const double r = qos_requirement(cfg, alloc, m, n);
            std::vector<double> row(nv, 0.0);
            row[v.h_re] = -2.0 * e.g_re * tau / r;
            row[v.h_im] = -2.0 * e.g_im * tau / r;
            lp.add_row(std::move(row), RowSense::less_equal, -(std::min(r, e.gain()) + e.gain()) / r);
        }
    }

    add_spacing_rows(lp, cfg, it.positions);
    return sp;
}

ScaResult sca_solve(const SystemConfig& cfg, const UserPair& users, const AntennaLayout& init,
                    const PowerAllocation& alloc, const ScaOptions& opts)
{
    require_valid_layout(init, cfg.min_spacing);
    const std::size_t n = init.size();
    const double lambda = cfg.wavelength();
    const Objective obj = objective_of(alloc, opts);

    auto true_rate = [&](const EffectiveChannels& ch) {
        return std::log2(1.0 + objective_snr(cfg, obj, std::norm(ch.of(obj.user)), n));
    };

    ScaResult res;
    res.layout = init;
    EffectiveChannels ch = effective_channel(cfg, users, init);
    double rate = true_rate(ch);
    res.accepted_rates.push_back(rate);

    double radius = opts.initial_radius * lambda;
    const double max_radius = opts.max_radius * lambda;
    const double min_radius = opts.min_radius * lambda;

    res.termination = "max_iter";
    while (res.inner_iters < opts.max_inner_iters)
    {
        ++res.inner_iters;
        const ScaIterate it = ScaIterate::expand(cfg, users, res.layout.positions, opts.gradient, radius);
        const Subproblem sp = linearize(cfg, users, it, alloc, opts);
        const LpResult lr = solve_lp(sp.lp);

        bool accepted = false;
        if (lr.status == LpStatus::optimal)
        {
            const double predicted = std::log2(1.0 + std::max(lr.x[n], 0.0)) - std::log2(1.0 + sp.z_now);
            if (predicted < opts.tolerance)
            {
                res.termination = "converged";
                break;
            }

            AntennaLayout cand;
            cand.positions.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                cand.positions[i] = res.layout.positions[i] + lambda * lr.x[i];
            if (cand.is_valid(cfg.min_spacing))
            {
                const EffectiveChannels cch = effective_channel(cfg, users, cand);
                const double cand_rate = true_rate(cch);
                const bool qos_ok = opts.single_user || qos_margins(cfg, cch, alloc, n).worst() >= -opts.qos_slack;
                if (cand_rate > rate && qos_ok)
                {
                    const double gain = cand_rate - rate;
                    res.layout = std::move(cand);
                    rate = cand_rate;
                    res.accepted_rates.push_back(rate);
                    accepted = true;
                    radius = std::min(2.0 * radius, max_radius);
                    if (gain < opts.tolerance)
                    {
                        res.termination = "converged";
                        break;
                    }
                }
            }
        }
        if (!accepted)
        {
            radius *= 0.5;
            if (radius < min_radius)
            {
                res.termination = "trust_region_collapse";
                break;
            }
        }
    }
    res.objective_rate = rate;
    return res;
}

ScaResult restore_qos(const SystemConfig& cfg, const UserPair& users, const AntennaLayout& init,
                      const ScaOptions& opts)
{
    require_valid_layout(init, cfg.min_spacing);
    const std::size_t n = init.size();
    const double lambda = cfg.wavelength();
    std::array<double, 2> scale{};
    for (User m : {User::primary, User::secondary})
        scale[static_cast<int>(m)] =
            cfg.transmit_power / (static_cast<double>(n) * cfg.noise_power(m) * cfg.gamma_p);
    auto worst = [&](const EffectiveChannels& ch) {
        return std::min(std::norm(ch.h_p) * scale[0], std::norm(ch.h_s) * scale[1]);
    };
    constexpr double target = 1.0 + 1e-6;

    ScaResult res;
    res.layout = init;
    double value = worst(effective_channel(cfg, users, init));
    res.accepted_rates.push_back(value);
    double radius = opts.initial_radius * lambda;

    res.termination = "max_iter";
    while (value < target && res.inner_iters < opts.max_inner_iters)
    {
        ++res.inner_iters;
        const ScaIterate it = ScaIterate::expand(cfg, users, res.layout.positions, opts.gradient, radius);
        LinearProgram lp;
        for (std::size_t i = 0; i < n; ++i)
        {
            const auto [lo, hi] = step_bounds(cfg, users, it.positions[i], radius);
            lp.add_variable(lo, hi);
        }
        const std::size_t z = lp.add_variable(-lp_infinity, lp_infinity, 1.0);
        for (User m : {User::primary, User::secondary})
        {
            const TermExpansion& e = it.of(m);
            const double sc = scale[static_cast<int>(m)];
            const std::vector<double> w = gain_weights(e, lambda);
            std::vector<double> row(n + 1, 0.0);
            row[z] = 1.0;
            for (std::size_t i = 0; i < n; ++i)
                row[i] = -w[i] * sc;
            lp.add_row(std::move(row), RowSense::less_equal, e.gain() * sc);
        }
        add_spacing_rows(lp, cfg, it.positions);
        const LpResult lr = solve_lp(lp);

        bool accepted = false;
        if (lr.status == LpStatus::optimal && lr.x[z] > value * (1.0 + 1e-9))
        {
            AntennaLayout cand;
            cand.positions.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                cand.positions[i] = res.layout.positions[i] + lambda * lr.x[i];
            if (cand.is_valid(cfg.min_spacing))
            {
                const double v = worst(effective_channel(cfg, users, cand));
                if (v > value)
                {
                    res.layout = std::move(cand);
                    value = v;
                    res.accepted_rates.push_back(v);
                    accepted = true;
                    radius = std::min(2.0 * radius, opts.max_radius * lambda);
                }
            }
        }
        else if (lr.status == LpStatus::optimal)
        {
            res.termination = "converged";
            break;
        }
        if (!accepted)
        {
            radius *= 0.5;
            if (radius < opts.min_radius * lambda)
            {
                res.termination = "trust_region_collapse";
                break;
            }
        }
    }
    if (value >= target)
        res.termination = "converged";
    res.objective_rate = value;
    return res;
}

double newton_objective(const SystemConfig& cfg, const UserPair& users, std::size_t n, double x1, NewtonWeights w)
{
    const double h = cfg.waveguide_height;
    const double c_p = users.c(User::primary, h);
    const double c_s = users.c(User::secondary, h);
    double g = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double x = x1 + static_cast<double>(i) * cfg.min_spacing;
        const double dp = x - users.x_p;
        const double ds = x - users.x_s;
        g += w.primary / std::sqrt(dp * dp + c_p) + w.secondary / std::sqrt(ds * ds + c_s);
    }
    return g;
}

namespace
{

struct NewtonDerivs
{
    double d1 = 0.0, d2 = 0.0;
};

NewtonDerivs newton_derivs(const SystemConfig& cfg, const UserPair& users, std::size_t n, double x1, NewtonWeights w)
{
    const double h = cfg.waveguide_height;
    NewtonDerivs r;
    auto add = [&](double weight, double x_m, double c_m, double x) {
        const double e = x - x_m;
        const double q = e * e + c_m;
        const double q32 = q * std::sqrt(q);
        r.d1 -= weight * e / q32;
        r.d2 += weight * (3.0 * e * e / (q32 * q) - 1.0 / q32);
    };
    for (std::size_t i = 0; i < n; ++i)
    {
        const double x = x1 + static_cast<double>(i) * cfg.min_spacing;
        add(w.primary, users.x_p, users.c(User::primary, h), x);
        add(w.secondary, users.x_s, users.c(User::secondary, h), x);
    }
    return r;
}

struct NewtonRun
{
    double x1 = 0.0;
    NewtonDerivs at;
    int iterations = 0;
    bool maximum = false;
};

NewtonRun run_newton(const SystemConfig& cfg, const UserPair& users, std::size_t n, NewtonWeights w, double start,
                     double lo, double hi)
{
    NewtonRun run;
    double x = start;
    const double max_step = std::max(cfg.region_side, 1.0) / 4.0;
    for (int k = 0; k < 100; ++k)
    {
        run.at = newton_derivs(cfg, users, n, x, w);
        if (std::abs(run.at.d1) < 1e-8)
            break;
        if (run.at.d2 == 0.0)
            break;
        const double step = std::clamp(-run.at.d1 / run.at.d2, -max_step, max_step);
        x += step;
        ++run.iterations;
        if (!std::isfinite(x) || x < lo || x > hi)
            return run;
    }
    run.at = newton_derivs(cfg, users, n, x, w);
    run.x1 = x;
    run.maximum = std::abs(run.at.d1) < 1e-8 && run.at.d2 < 0.0;
    return run;
}

} // namespace

NewtonInit newton_init(const SystemConfig& cfg, const UserPair& users, std::size_t n, NewtonWeights w)
{
    if (n == 0)
        throw std::invalid_argument("newton_init requires at least one antenna");
    const double span = static_cast<double>(n - 1) * cfg.min_spacing;
    const double lo = users.x_min() - cfg.region_side;
    const double hi = users.x_max();
    const double guard_lo = lo - cfg.region_side;
    const double guard_hi = users.x_max() + cfg.region_side;

    // Midpoint start first, then eight starts spread over [lo, hi]. g may be
    // bimodal when the users are far apart, so the best maximum wins.
    std::vector<double> starts{0.5 * (users.x_p + users.x_s) - span / 2.0};
    for (int k = 0; k < 8; ++k)
        starts.push_back(lo + (hi - lo) * (static_cast<double>(k) + 0.5) / 8.0);

    NewtonInit out;
    std::vector<std::pair<double, double>> found; // (g, x1)
    double best = -std::numeric_limits<double>::infinity();
    for (double s : starts)
    {
        const NewtonRun run = run_newton(cfg, users, n, w, s, guard_lo, guard_hi);
        out.iterations += run.iterations;
        if (!run.maximum)
            continue;
        const double g = newton_objective(cfg, users, n, run.x1, w);
        const bool seen = std::any_of(found.begin(), found.end(),
                                      [&](const auto& f) { return std::abs(f.second - run.x1) < 1e-6; });
        if (!seen)
            found.emplace_back(g, run.x1);
        if (g > best)
        {
            best = g;
            out.x1 = run.x1;
            out.slope = run.at.d1;
            out.curvature = run.at.d2;
        }
    }
    std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& f : found)
        out.maxima.push_back(f.second);
    if (found.empty())
    {
        out.fallback = true;
        out.x1 = starts.front();
        const NewtonDerivs at = newton_derivs(cfg, users, n, out.x1, w);
        out.slope = at.d1;
        out.curvature = at.d2;
    }
    double first = out.x1;
    if (cfg.requires_downstream())
        first = std::max(first, cfg.feed_point_x0);
    out.layout = AntennaLayout::uniform(first, cfg.min_spacing, n);
    return out;
}

void evaluate_solution(const SystemConfig& cfg, const UserPair& users, Solution& sol)
{
    const EffectiveChannels ch = effective_channel(cfg, users, sol.layout);
    const NomaRates r = noma_rates(cfg, ch, sol.alloc, sol.layout.size());
    sol.rate_p = r.rate_p;
    sol.rate_s = r.rate_s;
    sol.sum_rate = r.sum();
}

namespace
{

SolveReport bcd_from(const SystemConfig& cfg, const UserPair& users, const AntennaLayout& start, const ScaOptions& opts)
{
    const std::size_t n = start.size();
    SolveReport rep;
    Solution& sol = rep.solution;
    sol.layout = start;

    PowerUpdateResult pu = optimal_power_split(cfg, effective_channel(cfg, users, sol.layout), n);
    sol.alloc = pu.alloc;
    evaluate_solution(cfg, users, sol);
    if (pu.infeasible_qos)
    {
        const ScaResult fix = restore_qos(cfg, users, sol.layout, opts);
        sol.inner_iters_total += fix.inner_iters;
        sol.layout = fix.layout;
        pu = optimal_power_split(cfg, effective_channel(cfg, users, sol.layout), n);
        sol.alloc = pu.alloc;
        evaluate_solution(cfg, users, sol);
        rep.restored = true;
    }
    rep.rate_trace.push_back(sol.rate_s);
    if (pu.infeasible_qos)
    {
        sol.termination = "infeasible_qos";
        return rep;
    }

    sol.termination = "max_iter";
    for (int outer = 0; outer < opts.max_outer_iters; ++outer)
    {
        const ScaResult sr = sca_solve(cfg, users, sol.layout, sol.alloc, opts);
        ++sol.outer_iters;
        sol.inner_iters_total += sr.inner_iters;
        rep.inner_iters.push_back(sr.inner_iters);

        Solution next = sol;
        next.layout = sr.layout;
        const PowerUpdateResult npu = optimal_power_split(cfg, effective_channel(cfg, users, next.layout), n);
        next.alloc = npu.alloc;
        evaluate_solution(cfg, users, next);

        const double prev = sol.rate_s;
        if (npu.infeasible_qos || next.rate_s < prev)
        {
            // Keep the previous block; the trace stays monotone.
            rep.rate_trace.push_back(prev);
            sol.termination = "converged";
            break;
        }
        sol.layout = std::move(next.layout);
        sol.alloc = next.alloc;
        evaluate_solution(cfg, users, sol);
        rep.rate_trace.push_back(sol.rate_s);
        if (sol.rate_s - prev < opts.tolerance)
        {
            sol.termination = sr.termination == "trust_region_collapse" ? sr.termination : "converged";
            break;
        }
    }
    return rep;
}

} // namespace

SolveReport bcd_solve(const SystemConfig& cfg, const UserPair& users, std::size_t n, const ScaOptions& opts)
{
    cfg.validate();
    const NewtonInit init = newton_init(cfg, users, n);

    std::vector<AntennaLayout> starts{init.layout};
    if (opts.all_newton_maxima)
    {
        for (std::size_t k = 1; k < init.maxima.size(); ++k)
        {
            double first = init.maxima[k];
            if (cfg.requires_downstream())
                first = std::max(first, cfg.feed_point_x0);
            starts.push_back(AntennaLayout::uniform(first, cfg.min_spacing, n));
        }
    }

    if (opts.gap_starts > 1 && n > 1)
    {
        const std::size_t base = starts.size();
        for (std::size_t b = 0; b < base; ++b)
        {
            for (int k = 1; k < opts.gap_starts; ++k)
            {
                const double gap = cfg.min_spacing + cfg.wavelength() * k / opts.gap_starts;
                const double first = starts[b].positions.front() - static_cast<double>(n - 1) * (gap - cfg.min_spacing) / 2.0;
                starts.push_back(AntennaLayout::uniform(
                    cfg.requires_downstream() ? std::max(first, cfg.feed_point_x0) : first, gap, n));
            }
        }
    }

    SolveReport best;
    int inner_total = 0;
    bool restored = false;
    for (std::size_t k = 0; k < starts.size(); ++k)
    {
        SolveReport rep = bcd_from(cfg, users, starts[k], opts);
        inner_total += rep.solution.inner_iters_total;
        restored = restored || rep.restored;
        const bool usable = rep.solution.termination != "infeasible_qos";
        const bool best_usable = k > 0 && best.solution.termination != "infeasible_qos";
        if (k == 0 || (usable && (!best_usable || rep.solution.rate_s > best.solution.rate_s)))
            best = std::move(rep);
    }
    best.newton_fallback = init.fallback;
    best.starts = static_cast<int>(starts.size());
    best.solution.inner_iters_total = inner_total;
    best.restored = restored;
    return best;
}

} // namespace pinch
