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

#include <algorithm>
#include <stdexcept>

namespace pinch
{

namespace
{

// (P|h|^2 - N sigma^2 gamma) / (P|h|^2 (1 + gamma))
double qos_cap(double gain, double noise, double gamma, std::size_t n)
{
    return (gain - static_cast<double>(n) * noise * gamma) / (gain * (1.0 + gamma));
}

} // namespace

PowerUpdateResult optimal_power_split(const SystemConfig& cfg, const EffectiveChannels& ch, std::size_t n)
{
    const double g_p = cfg.transmit_power * std::norm(ch.h_p);
    const double g_s = cfg.transmit_power * std::norm(ch.h_s);
    if (!(g_p > 0.0) || !(g_s > 0.0))
        throw std::invalid_argument("optimal_power_split requires nonzero effective channels");

    const double cap_p = qos_cap(g_p, cfg.noise_power_primary, cfg.gamma_p, n);
    const double cap_s = qos_cap(g_s, cfg.noise_power_secondary, cfg.gamma_p, n);

    PowerUpdateResult r;
    r.binding = cap_p <= cap_s ? User::primary : User::secondary;
    r.cap_A = std::min(cap_p, cap_s);
    r.alloc = PowerAllocation::from_secondary(std::max(0.0, r.cap_A));
    r.feasible_with_positive_secondary = r.cap_A > 0.0;
    r.infeasible_qos = r.cap_A < 0.0;
    return r;
}

QosCheck verify_qos(const SystemConfig& cfg, const EffectiveChannels& ch, const PowerAllocation& alloc, std::size_t n)
{
    constexpr double tol = 1e-9;
    return {primary_sinr(cfg, ch.h_p, alloc, n) >= cfg.gamma_p - tol,
            sic_sinr_at_secondary(cfg, ch.h_s, alloc, n) >= cfg.gamma_p - tol};
}

QosMargins qos_margins(const SystemConfig& cfg, const EffectiveChannels& ch, const PowerAllocation& alloc, std::size_t n)
{
    return {(primary_sinr(cfg, ch.h_p, alloc, n) - cfg.gamma_p) / cfg.gamma_p,
            (sic_sinr_at_secondary(cfg, ch.h_s, alloc, n) - cfg.gamma_p) / cfg.gamma_p};
}

} // namespace pinch
