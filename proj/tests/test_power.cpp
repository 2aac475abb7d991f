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

#include "pinch/oracle.hpp"
#include "pinch/power.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace pinch;

namespace
{

SystemConfig config(double gamma)
{
    SystemConfig cfg = SystemConfig::with_defaults(28e9);
    cfg.transmit_power = 1.0;
    cfg.noise_power_primary = cfg.noise_power_secondary = 1e-10;
    cfg.gamma_p = gamma;
    return cfg;
}

// Channel with P |h|^2 / (N sigma^2) equal to snr.
std::complex<double> channel_with_snr(const SystemConfig& cfg, double snr, std::size_t n, double phase = 0.3)
{
    return std::polar(std::sqrt(snr * static_cast<double>(n) * 1e-10 / cfg.transmit_power), phase);
}

} // namespace

TEST_CASE("power split at a symmetric high-SNR point")
{
    const SystemConfig cfg = config(0.5);
    const auto h = channel_with_snr(cfg, 1e4, 2);
    const PowerUpdateResult r = optimal_power_split(cfg, {h, h}, 2);
    const double expected = (1.0 - 0.5 / 1e4) / 1.5;
    CHECK(r.alloc.alpha_s == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r.alloc.alpha_p + r.alloc.alpha_s == doctest::Approx(1.0));
    CHECK(r.feasible_with_positive_secondary);
    CHECK_FALSE(r.infeasible_qos);
}

TEST_CASE("weaker user sets the binding constraint")
{
    const SystemConfig cfg = config(0.1);
    const auto strong = channel_with_snr(cfg, 1e3, 1);
    const auto weak = channel_with_snr(cfg, 10.0, 1);
    CHECK(optimal_power_split(cfg, {weak, strong}, 1).binding == User::primary);
    CHECK(optimal_power_split(cfg, {strong, weak}, 1).binding == User::secondary);
}

TEST_CASE("infeasible QoS gives all power to the primary")
{
    const SystemConfig cfg = config(1.0);
    const auto h = channel_with_snr(cfg, 0.5, 1);
    const PowerUpdateResult r = optimal_power_split(cfg, {h, h}, 1);
    CHECK(r.infeasible_qos);
    CHECK(r.alloc.alpha_s == 0.0);
    CHECK(r.alloc.alpha_p == 1.0);
}

TEST_CASE("barely feasible channel gives almost no secondary power")
{
    const SystemConfig cfg = config(1.0);
    const auto h = channel_with_snr(cfg, 1.0 + 1e-9, 1);
    const PowerUpdateResult r = optimal_power_split(cfg, {h, h}, 1);
    CHECK(r.alloc.alpha_s == doctest::Approx(0.5e-9).epsilon(1e-5));
    CHECK_FALSE(r.infeasible_qos);
}

TEST_CASE("power split against a fine scan")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 200; ++k)
    {
        const SystemConfig cfg = config(0.05 + unit(rng));
        const std::size_t n = 1 + k % 4;
        const EffectiveChannels ch{channel_with_snr(cfg, std::pow(10.0, -1.0 + 4.0 * unit(rng)), n, unit(rng) * 6.0),
                                   channel_with_snr(cfg, std::pow(10.0, -1.0 + 4.0 * unit(rng)), n, unit(rng) * 6.0)};
        const PowerUpdateResult r = optimal_power_split(cfg, ch, n);
        const PowerAllocation scan = power_scan(cfg, ch, n, 1e-5);
        CHECK(std::abs(scan.alpha_s - r.alloc.alpha_s) <= 1e-5 + 1e-12);
    }
}

TEST_CASE("after the update both QoS constraints hold and one is tight")
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 200; ++k)
    {
        const SystemConfig cfg = config(0.05 + unit(rng));
        const EffectiveChannels ch{channel_with_snr(cfg, std::pow(10.0, 4.0 * unit(rng)), 2),
                                   channel_with_snr(cfg, std::pow(10.0, 4.0 * unit(rng)), 2)};
        const PowerUpdateResult r = optimal_power_split(cfg, ch, 2);
        if (r.infeasible_qos)
            continue;
        CHECK(verify_qos(cfg, ch, r.alloc, 2).both());
        const QosMargins m = qos_margins(cfg, ch, r.alloc, 2);
        CHECK(m.worst() >= -1e-9);
        CHECK(m.worst() <= 1e-9);
    }
}

TEST_CASE("scaling every gain and noise by the same factor keeps the split")
{
    SystemConfig cfg = config(0.3);
    const EffectiveChannels ch{channel_with_snr(cfg, 50.0, 2), channel_with_snr(cfg, 400.0, 2)};
    const double a = optimal_power_split(cfg, ch, 2).alloc.alpha_s;
    cfg.noise_power_primary *= 1e3;
    cfg.noise_power_secondary *= 1e3;
    const EffectiveChannels scaled{ch.h_p * std::sqrt(1e3), ch.h_s * std::sqrt(1e3)};
    CHECK(optimal_power_split(cfg, scaled, 2).alloc.alpha_s == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("QoS margins are relative SINR slacks")
{
    const SystemConfig cfg = config(0.5);
    const auto h = channel_with_snr(cfg, 100.0, 1);
    const PowerAllocation alloc{0.9, 0.1};
    const QosMargins m = qos_margins(cfg, {h, h}, alloc, 1);
    const double sinr = 0.9 * 100.0 / (0.1 * 100.0 + 1.0);
    CHECK(m.primary == doctest::Approx((sinr - 0.5) / 0.5));
    CHECK(m.sic == doctest::Approx((sinr - 0.5) / 0.5));
}
