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

#include "pinch/closedform.hpp"
#include "pinch/power.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

using namespace pinch;

namespace
{

SystemConfig config(double p_dbm = 30.0, double gamma = 0.1)
{
    SystemConfig cfg = SystemConfig::with_defaults(28e9);
    cfg.transmit_power = dbm_to_watt(p_dbm);
    cfg.noise_power_primary = cfg.noise_power_secondary = 1e-10;
    cfg.gamma_p = gamma;
    return cfg;
}

// Secondary SNR with one antenna at x through the general model and power split.
double reference_snr(const SystemConfig& cfg, const UserPair& u, double x)
{
    const EffectiveChannels ch = effective_channel(cfg, u, AntennaLayout{{x}});
    const PowerUpdateResult r = optimal_power_split(cfg, ch, 1);
    if (r.infeasible_qos)
        return -1.0;
    return secondary_snr(cfg, ch.h_s, r.alloc, 1);
}

UserPair random_users(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return {5.0 * unit(rng), 5.0 * unit(rng), 5.0 * unit(rng), 5.0 * unit(rng)};
}

} // namespace

TEST_CASE("achievable SNR matches the general model")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 200; ++k)
    {
        const SystemConfig cfg = config(10.0 + 30.0 * unit(rng), 0.05 + unit(rng));
        const UserPair u = random_users(rng);
        const double x = u.x_min() + (u.x_max() - u.x_min()) * unit(rng);
        const double ref = reference_snr(cfg, u, x);
        const double got = single_antenna_snr(cfg, u, x);
        if (ref < 0.0)
            CHECK(got < 0.0);
        else
            CHECK(got == doctest::Approx(ref).epsilon(1e-9).scale(1e-12));
    }
}

TEST_CASE("closed form beats a dense grid")
{
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 100; ++k)
    {
        const SystemConfig cfg = config(5.0 + 35.0 * unit(rng), 0.05 + unit(rng));
        const UserPair u = random_users(rng);
        const SingleAntennaSolution s = solve_n1(cfg, u);
        double best = -1.0;
        const double lo = u.x_min(), hi = u.x_max();
        for (int i = 0; i <= 20000; ++i)
            best = std::max(best, reference_snr(cfg, u, lo + (hi - lo) * i / 20000.0));
        if (s.case_id == SingleAntennaCase::infeasible)
        {
            CHECK(best < 0.0);
            continue;
        }
        const double snr = std::exp2(s.secondary_rate) - 1.0;
        CHECK(snr >= best * (1.0 - 1e-9));
        CHECK(s.x_star >= lo - 1e-12);
        CHECK(s.x_star <= hi + 1e-12);
        CHECK(s.alpha_p_star + s.alpha_s_star == doctest::Approx(1.0));
        CHECK(s.alpha_p_star >= cfg.gamma_p / (1.0 + cfg.gamma_p) - 1e-12);
        CHECK(s.secondary_rate == doctest::Approx(std::log2(1.0 + reference_snr(cfg, u, s.x_star))).epsilon(1e-9));
    }
}

TEST_CASE("exact feasibility agrees with the grid and implies the necessary condition")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int infeasible = 0;
    for (int k = 0; k < 200; ++k)
    {
        const SystemConfig cfg = config(-25.0 + 30.0 * unit(rng), 0.05 + unit(rng));
        const UserPair u = random_users(rng);
        const bool exact = feasible_n1(cfg, u);
        if (exact)
            CHECK(feasible_n1_necessary(cfg, u));
        else
            ++infeasible;
        bool grid = false;
        for (int i = 0; i <= 5000 && !grid; ++i)
            grid = reference_snr(cfg, u, u.x_min() + (u.x_max() - u.x_min()) * i / 5000.0) >= 0.0;
        if (grid)
            CHECK(exact);
        if (!exact)
            CHECK_FALSE(grid);
    }
    CHECK(infeasible > 10);
}

TEST_CASE("necessary condition is not sufficient for separated users")
{
    // Each user alone could be served, but no single position serves both.
    SystemConfig cfg = config(0.0, 1.0);
    const UserPair u{0.0, 0.0, 40.0, 0.0};
    cfg.transmit_power = 1.2 * 9.0 * 1e-10 / cfg.eta();
    CHECK(feasible_n1_necessary(cfg, u));
    CHECK_FALSE(feasible_n1(cfg, u));
    CHECK(solve_n1(cfg, u).case_id == SingleAntennaCase::infeasible);
}

TEST_CASE("boundary case at the feasibility edge")
{
    // Co-located users exactly at the primary limit: all power to the primary.
    SystemConfig cfg = config(0.0, 1.0);
    const UserPair u{1.0, 0.0, 1.0, 0.0};
    cfg.transmit_power = 9.0 * 1e-10 / cfg.eta();
    const SingleAntennaSolution s = solve_n1(cfg, u);
    CHECK(s.case_id != SingleAntennaCase::infeasible);
    CHECK(s.case_id != SingleAntennaCase::interior);
    CHECK(s.alpha_s_star == doctest::Approx(0.0).scale(1.0));
    CHECK(s.x_star == doctest::Approx(1.0));
    CHECK_THROWS_AS(check_tightness(cfg, u, s), std::invalid_argument);
}

TEST_CASE("low-SNR symmetric users: midpoint and both constraints tight")
{
    // Symmetric users with P eta between gamma sigma^2 u(mid) and twice that.
    SystemConfig cfg = config(0.0, 0.5);
    const UserPair u{1.0, 2.0, 4.0, -2.0};
    const double u_mid = 1e-10 * (1.5 * 1.5 + 4.0 + 9.0);
    cfg.transmit_power = 1.5 * cfg.gamma_p * u_mid / cfg.eta();
    const SingleAntennaSolution s = solve_n1(cfg, u);
    REQUIRE(s.case_id == SingleAntennaCase::interior);
    CHECK(s.x_star == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(s.tight == TightSet::both);
    const QosSlacks sl = check_tightness(cfg, u, s);
    CHECK(std::abs(sl.primary) <= 1e-8);
    CHECK(std::abs(sl.sic) <= 1e-8);
    CHECK(s.beta_p == doctest::Approx(1.5));
    CHECK(s.beta_s == doctest::Approx(1.5));
    const auto [op, os] = tight_offsets(cfg, u, s.alpha_p_star);
    CHECK(op == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(os == doctest::Approx(1.5).epsilon(1e-9));
    const double q = cfg.transmit_power * cfg.eta();
    CHECK(s.alpha_p_star == doctest::Approx((q * cfg.gamma_p + cfg.gamma_p * u_mid) / (q * (1.0 + cfg.gamma_p))).epsilon(1e-9));
    CHECK(s.alpha_p_star >= both_tight_alpha_p(cfg, u));
    CHECK(std::exp2(s.secondary_rate) - 1.0 ==
          doctest::Approx(both_tight_snr(cfg.gamma_p, s.alpha_p_star)).epsilon(1e-9));
}

TEST_CASE("high-SNR symmetric users leave the midpoint")
{
    // With ample power only one constraint binds and the secondary pulls the
    // antenna toward itself.
    const SystemConfig cfg = config(30.0, 0.1);
    const UserPair u{1.0, 2.0, 4.0, -2.0};
    const SingleAntennaSolution s = solve_n1(cfg, u);
    REQUIRE(s.case_id == SingleAntennaCase::interior);
    CHECK(std::abs(s.x_star - 2.5) > 0.1);
    CHECK(s.tight != TightSet::both);
}

TEST_CASE("both-tight SNR decreases in alpha_p")
{
    for (double gamma : {0.1, 0.5, 2.0})
    {
        double prev = 1e300;
        for (double a = gamma / (1.0 + gamma) + 1e-3; a <= 1.0; a += 1e-3)
        {
            const double f = both_tight_snr(gamma, a);
            CHECK(f < prev);
            prev = f;
        }
        CHECK(both_tight_snr(gamma, 1.0) == doctest::Approx(0.0).scale(1.0));
    }
}

TEST_CASE("mirroring the deployment mirrors the optimum")
{
    std::mt19937_64 rng(24);
    for (int k = 0; k < 50; ++k)
    {
        const SystemConfig cfg = config(30.0, 0.3);
        const UserPair u = random_users(rng);
        const UserPair m{-u.x_p, u.y_p, -u.x_s, u.y_s};
        const SingleAntennaSolution a = solve_n1(cfg, u), b = solve_n1(cfg, m);
        CHECK(a.case_id == b.case_id);
        CHECK(b.x_star == doctest::Approx(-a.x_star).epsilon(1e-9).scale(1.0));
        CHECK(b.secondary_rate == doctest::Approx(a.secondary_rate).epsilon(1e-12));
    }
}

TEST_CASE("secondary rate grows with power")
{
    const UserPair u{0.5, 3.0, 4.0, 1.0};
    double prev = -1.0;
    for (double p = -20.0; p <= 40.0; p += 2.5)
    {
        const double r = solve_n1(config(p, 0.2), u).secondary_rate;
        CHECK(r >= prev);
        prev = r;
    }
}

TEST_CASE("farther user pulls the antenna at low SNR")
{
    // At the both-tight optimum the antenna is closer to the user farther
    // from the waveguide.
    SystemConfig cfg = config(0.0, 0.5);
    const UserPair u{1.0, 3.0, 4.0, 1.0};
    const double u_mid = 1e-10 * (1.5 * 1.5 + 9.0 + 9.0);
    cfg.transmit_power = 1.3 * cfg.gamma_p * u_mid / cfg.eta();
    const SingleAntennaSolution s = solve_n1(cfg, u);
    REQUIRE(s.case_id == SingleAntennaCase::interior);
    CHECK(s.beta_p < s.beta_s);
}

TEST_CASE("enum names")
{
    CHECK(std::string(to_string(SingleAntennaCase::interior)) == "interior");
    CHECK(std::string(to_string(TightSet::both)) == "both");
}
