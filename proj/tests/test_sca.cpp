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

#include "pinch/power.hpp"
#include "pinch/sca.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

using namespace pinch;

namespace
{

SystemConfig config(double gamma = 0.1, double fc = 28e9)
{
    SystemConfig cfg = SystemConfig::with_defaults(fc);
    cfg.transmit_power = 1.0;
    cfg.noise_power_primary = cfg.noise_power_secondary = 1e-10;
    cfg.gamma_p = gamma;
    return cfg;
}

double objective_snr(const SystemConfig& cfg, const UserPair& u, const std::vector<double>& x,
                     const PowerAllocation& a)
{
    return secondary_snr(cfg, effective_channel(cfg, u, AntennaLayout{x}).h_s, a, x.size());
}

} // namespace

TEST_CASE("gradient mode names")
{
    CHECK(parse_gradient_mode("paper") == GradientMode::paper);
    CHECK(parse_gradient_mode("full") == GradientMode::full);
    CHECK_THROWS(parse_gradient_mode("exact"));
    CHECK(std::string(to_string(GradientMode::full)) == "full");
}

TEST_CASE("expansion reproduces the channel terms")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 50; ++k)
    {
        SystemConfig cfg = config();
        if (k % 2)
            cfg.inwaveguide_attenuation = 0.08;
        const UserPair u{5.0 * unit(rng), 5.0 * unit(rng), 5.0 * unit(rng), 5.0 * unit(rng)};
        const std::size_t n = 1 + k % 5;
        const AntennaLayout layout = AntennaLayout::uniform(0.5 + 3.0 * unit(rng), cfg.min_spacing, n);
        for (GradientMode mode : {GradientMode::paper, GradientMode::full})
        {
            const ScaIterate it = ScaIterate::expand(cfg, u, layout.positions, mode, 0.01);
            const EffectiveChannels ch = effective_channel(cfg, u, layout);
            const double scale = std::sqrt(cfg.eta()) / 3.0 * static_cast<double>(n);
            CHECK(std::abs(std::complex<double>(it.p.g_re, it.p.g_im) - ch.h_p) <= 1e-10 * scale);
            CHECK(std::abs(std::complex<double>(it.s.g_re, it.s.g_im) - ch.h_s) <= 1e-10 * scale);
            for (std::size_t i = 0; i < n; ++i)
            {
                const auto t = channel_term(cfg, u.x_s, u.c(User::secondary, cfg.waveguide_height), layout.positions[i]);
                CHECK(it.s.t_re[i] == doctest::Approx(t.real()).epsilon(1e-12).scale(scale));
                CHECK(it.s.t_im[i] == doctest::Approx(t.imag()).epsilon(1e-12).scale(scale));
                CHECK(it.s.d[i] == doctest::Approx(free_space_distance(u, User::secondary, layout.positions[i],
                                                                      cfg.waveguide_height)));
            }
        }
    }
}

TEST_CASE("slopes match central differences")
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double h = 1e-8;
    for (int k = 0; k < 200; ++k)
    {
        SystemConfig cfg = config(0.1, 6e9 + 22e9 * unit(rng));
        if (k % 2)
            cfg.inwaveguide_attenuation = 0.08;
        const double xm = 5.0 * unit(rng), cm = 9.0 + 25.0 * unit(rng), x = 0.01 + 5.0 * unit(rng);
        const std::complex<double> fd =
            (channel_term(cfg, xm, cm, x + h) - channel_term(cfg, xm, cm, x - h)) / (2.0 * h);
        const auto [re, im] = term_slope(cfg, xm, cm, x, GradientMode::full);
        CHECK(std::abs(std::complex<double>(re, im) - fd) <= 1e-6 * std::abs(fd));

        // Phase-only model: only the in-waveguide phase moves.
        const auto t = channel_term(cfg, xm, cm, x);
        const double kg = 2.0 * std::numbers::pi / cfg.guided_wavelength();
        const auto [pre, pim] = term_slope(cfg, xm, cm, x, GradientMode::paper);
        CHECK(pre == doctest::Approx(kg * t.imag()).epsilon(1e-12));
        CHECK(pim == doctest::Approx(-kg * t.real()).epsilon(1e-12));
    }
}

TEST_CASE("phase-only slopes of the total gain sum to zero over antennas")
{
    const SystemConfig cfg = config();
    const UserPair u{1.0, 2.0, 4.0, 1.0};
    const ScaIterate it =
        ScaIterate::expand(cfg, u, AntennaLayout::uniform(2.0, 0.013, 3).positions, GradientMode::paper, 0.01);
    double total = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
    {
        const double gi = 2.0 * (it.s.g_re * it.s.t_re_slope[i] + it.s.g_im * it.s.t_im_slope[i]);
        total += gi;
        scale += std::abs(gi);
    }
    CHECK(std::abs(total) <= 1e-10 * scale);
}

TEST_CASE("zero trust radius pins the step")
{
    const SystemConfig cfg = config();
    const UserPair u{1.0, 2.0, 4.0, 1.0};
    const ScaIterate it =
        ScaIterate::expand(cfg, u, AntennaLayout::uniform(2.5, cfg.min_spacing, 2).positions, GradientMode::paper, 0.0);
    const PowerAllocation a = optimal_power_split(cfg, effective_channel(cfg, u, AntennaLayout{it.positions}), 2).alloc;
    const Subproblem sp = linearize(cfg, u, it, a);
    const LpResult r = solve_lp(sp.lp);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.x[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(r.x[1] == doctest::Approx(0.0).scale(1.0));
    CHECK(r.objective == doctest::Approx(sp.z_now));
}

TEST_CASE("subproblem optimum never falls below the current objective")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int checked = 0;
    for (int k = 0; k < 100; ++k)
    {
        const SystemConfig cfg = config();
        const UserPair u{5.0 * unit(rng), 5.0 * unit(rng), 5.0 * unit(rng), 5.0 * unit(rng)};
        const std::size_t n = 1 + k % 4;
        const auto x = AntennaLayout::uniform(0.5 * (u.x_p + u.x_s), cfg.min_spacing * 1.5, n).positions;
        const PowerUpdateResult pu = optimal_power_split(cfg, effective_channel(cfg, u, AntennaLayout{x}), n);
        if (pu.infeasible_qos)
            continue;
        const ScaIterate it = ScaIterate::expand(cfg, u, x, k % 2 ? GradientMode::full : GradientMode::paper,
                                                 0.25 * cfg.wavelength());
        const Subproblem sp = linearize(cfg, u, it, pu.alloc);
        const LpResult r = solve_lp(sp.lp);
        REQUIRE(r.status == LpStatus::optimal);
        CHECK(r.objective >= sp.z_now * (1.0 - 1e-9));
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("explicit and substituted subproblems agree")
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int checked = 0;
    for (int k = 0; k < 60; ++k)
    {
        const SystemConfig cfg = config(0.1 + unit(rng));
        const UserPair u{5.0 * unit(rng), 5.0 * unit(rng), 5.0 * unit(rng), 5.0 * unit(rng)};
        const std::size_t n = 1 + k % 3;
        const auto x = AntennaLayout::uniform(0.5 * (u.x_p + u.x_s), cfg.min_spacing * 1.2, n).positions;
        const PowerUpdateResult pu = optimal_power_split(cfg, effective_channel(cfg, u, AntennaLayout{x}), n);
        if (pu.infeasible_qos)
            continue;
        const GradientMode mode = k % 2 ? GradientMode::full : GradientMode::paper;
        const ScaIterate it = ScaIterate::expand(cfg, u, x, mode, 0.25 * cfg.wavelength());
        const Subproblem a = linearize(cfg, u, it, pu.alloc);
        const Subproblem b = linearize_full(cfg, u, it, pu.alloc);
        const LpResult ra = solve_lp(a.lp), rb = solve_lp(b.lp);
        REQUIRE(ra.status == LpStatus::optimal);
        REQUIRE(rb.status == LpStatus::optimal);
        CHECK(rb.objective == doctest::Approx(ra.objective).epsilon(1e-8));
        ++checked;
    }
    CHECK(checked > 30);
}

TEST_CASE("inner loop keeps spacing and improves monotonically")
{
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 40; ++k)
    {
        const SystemConfig cfg = config();
        const UserPair u{5.0 * unit(rng), 5.0 * unit(rng), 5.0 * unit(rng), 5.0 * unit(rng)};
        const std::size_t n = 2 + k % 4;
        const AntennaLayout init = AntennaLayout::uniform(u.x_s, cfg.min_spacing, n);
        const PowerUpdateResult pu = optimal_power_split(cfg, effective_channel(cfg, u, init), n);
        if (pu.infeasible_qos)
            continue;
        ScaOptions opts;
        opts.gradient = k % 2 ? GradientMode::full : GradientMode::paper;
        const ScaResult r = sca_solve(cfg, u, init, pu.alloc, opts);
        CHECK(r.layout.is_valid(cfg.min_spacing));
        for (std::size_t i = 1; i < r.accepted_rates.size(); ++i)
            CHECK(r.accepted_rates[i] >= r.accepted_rates[i - 1]);
        const double start = std::log2(1.0 + objective_snr(cfg, u, init.positions, pu.alloc));
        CHECK(r.objective_rate >= start - 1e-12);
        const QosMargins m = qos_margins(cfg, effective_channel(cfg, u, r.layout), pu.alloc, n);
        CHECK(m.worst() >= -opts.qos_slack);
    }
}

TEST_CASE("restarting the inner loop at its own result stops quickly")
{
    const SystemConfig cfg = config();
    const UserPair u{1.0, 2.0, 4.0, 1.0};
    const AntennaLayout init = AntennaLayout::uniform(3.5, cfg.min_spacing, 2);
    const PowerAllocation a = optimal_power_split(cfg, effective_channel(cfg, u, init), 2).alloc;
    const ScaResult first = sca_solve(cfg, u, init, a);
    const ScaResult again = sca_solve(cfg, u, first.layout, a);
    CHECK(again.objective_rate - first.objective_rate <= 1e-3);
    CHECK(again.inner_iters <= 3);
}

TEST_CASE("Newton initialization for close symmetric users sits at the midpoint")
{
    const SystemConfig cfg = config();
    const UserPair u{2.0, 0.0, 3.0, 0.0};
    const NewtonInit ni = newton_init(cfg, u, 1);
    CHECK_FALSE(ni.fallback);
    CHECK(ni.x1 == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(ni.curvature < 0.0);
    CHECK(std::abs(ni.slope) <= 1e-8);
}

TEST_CASE("Newton initialization with one weight sits above that user")
{
    const SystemConfig cfg = config();
    const UserPair u{1.0, 2.0, 4.0, 1.0};
    CHECK(newton_init(cfg, u, 1, {0.0, 1.0}).x1 == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(newton_init(cfg, u, 1, {1.0, 0.0}).x1 == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Newton initialization reaches the scanned maximum")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const SystemConfig cfg = config();
    const double step = cfg.wavelength() / 50.0;
    for (int k = 0; k < 20; ++k)
    {
        const UserPair u{5.0 * unit(rng), 5.0 * unit(rng), 5.0 * unit(rng), 5.0 * unit(rng)};
        const std::size_t n = 1 + 3 * (k % 4);
        const NewtonInit ni = newton_init(cfg, u, n);
        REQUIRE_FALSE(ni.fallback);
        double best = -1.0;
        for (double x = u.x_min() - 5.0; x <= u.x_max() + 5.0; x += step)
            best = std::max(best, newton_objective(cfg, u, n, x));
        CHECK(newton_objective(cfg, u, n, ni.x1) >= best - 1e-12);
        CHECK(ni.layout.is_valid(cfg.min_spacing));
    }
}

TEST_CASE("restoration repairs a layout with destructive phases")
{
    SystemConfig cfg = config();
    const UserPair u{2.0, 1.0, 2.3, 1.5};
    // Find the gap that nearly cancels the weaker channel.
    double worst_gap = cfg.min_spacing, worst_snr = 1e300;
    for (double gap = cfg.min_spacing; gap <= cfg.min_spacing + cfg.wavelength(); gap += cfg.wavelength() / 400.0)
    {
        const auto ch = effective_channel(cfg, u, AntennaLayout::uniform(2.1, gap, 2));
        const double snr = std::min(std::norm(ch.h_p), std::norm(ch.h_s)) / 2e-10;
        if (snr < worst_snr)
        {
            worst_snr = snr;
            worst_gap = gap;
        }
    }
    const AntennaLayout bad = AntennaLayout::uniform(2.1, worst_gap, 2);
    cfg.gamma_p = 3.0 * worst_snr;
    REQUIRE(optimal_power_split(cfg, effective_channel(cfg, u, bad), 2).infeasible_qos);
    const ScaResult r = restore_qos(cfg, u, bad);
    CHECK(r.layout.is_valid(cfg.min_spacing));
    CHECK(r.objective_rate >= 1.0);
    CHECK_FALSE(optimal_power_split(cfg, effective_channel(cfg, u, r.layout), 2).infeasible_qos);
}

TEST_CASE("BCD-SCA solutions are consistent, feasible and monotone")
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 30; ++k)
    {
        const SystemConfig cfg = config(k % 3 == 0 ? 0.5 : 0.1);
        const UserPair u{5.0 * unit(rng), 5.0 * unit(rng), 5.0 * unit(rng), 5.0 * unit(rng)};
        const std::size_t n = 1 + k % 5;
        ScaOptions opts;
        opts.gradient = k % 2 ? GradientMode::full : GradientMode::paper;
        const SolveReport rep = bcd_solve(cfg, u, n, opts);
        const Solution& s = rep.solution;
        if (s.termination == "infeasible_qos")
            continue;
        CHECK(s.layout.size() == n);
        CHECK(s.layout.is_valid(cfg.min_spacing));
        const EffectiveChannels ch = effective_channel(cfg, u, s.layout);
        CHECK(qos_margins(cfg, ch, s.alloc, n).worst() >= -1e-9);
        Solution again = s;
        evaluate_solution(cfg, u, again);
        CHECK(again.rate_s == doctest::Approx(s.rate_s).epsilon(1e-12));
        CHECK(s.sum_rate == doctest::Approx(s.rate_p + s.rate_s));
        for (std::size_t i = 1; i < rep.rate_trace.size(); ++i)
            CHECK(rep.rate_trace[i] >= rep.rate_trace[i - 1]);
        CHECK(rep.rate_trace.back() == doctest::Approx(s.rate_s).epsilon(1e-12));
        CHECK(s.outer_iters <= opts.max_outer_iters);
    }
}

TEST_CASE("more gap starts never lower the result")
{
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 20; ++k)
    {
        const SystemConfig cfg = config(0.5);
        const UserPair u{5.0 * unit(rng), 5.0 * unit(rng), 5.0 * unit(rng), 5.0 * unit(rng)};
        ScaOptions one;
        one.gap_starts = 1;
        const double single = bcd_solve(cfg, u, 2, one).solution.rate_s;
        CHECK(bcd_solve(cfg, u, 2).solution.rate_s >= single - 1e-12);
    }
}

TEST_CASE("downstream-only placement")
{
    SystemConfig cfg = config();
    cfg.downstream_only = true;
    cfg.feed_point_x0 = 3.0;
    const UserPair u{1.0, 2.0, 2.0, 1.0};
    const SolveReport rep = bcd_solve(cfg, u, 3);
    for (double x : rep.solution.layout.positions)
        CHECK(x >= cfg.feed_point_x0 - 1e-12);
}
