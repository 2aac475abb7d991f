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

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pinch
{

namespace
{

// Quadratic a x^2 + b x + c = 0; degrades to the linear case when a is
// negligible against the other coefficients.
void real_roots(double a, double b, double c, std::vector<double>& out)
{
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (scale == 0.0)
        return;
    if (std::abs(a) <= 1e-14 * scale)
    {
        if (b != 0.0)
            out.push_back(-c / b);
        return;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0)
        return;
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    if (q != 0.0)
    {
        out.push_back(q / a);
        out.push_back(c / q);
    }
    else
    {
        out.push_back(0.0);
    }
}

struct Geometry
{
    double q;          // P eta
    double gamma;
    double x_p, x_s;
    double c_p, c_s;
    double v_p, v_s;   // sigma^2

    explicit Geometry(const SystemConfig& cfg, const UserPair& users)
        : q(cfg.transmit_power * cfg.eta()), gamma(cfg.gamma_p), x_p(users.x_p), x_s(users.x_s),
          c_p(users.c(User::primary, cfg.waveguide_height)), c_s(users.c(User::secondary, cfg.waveguide_height)),
          v_p(cfg.noise_power_primary), v_s(cfg.noise_power_secondary)
    {
    }

    double u_p(double x) const { return v_p * ((x - x_p) * (x - x_p) + c_p); }
    double u_s(double x) const { return v_s * ((x - x_s) * (x - x_s) + c_s); }

    // QoS headroom of the weaker user at alpha_p = 1.
    double headroom(double x) const { return std::min(q - gamma * u_p(x), q - gamma * u_s(x)); }

    double snr(double x) const { return headroom(x) / ((1.0 + gamma) * u_s(x)); }

    double lo() const { return std::min(x_p, x_s); }
    double hi() const { return std::max(x_p, x_s); }

    // Points where u_p = u_s.
    void crossings(std::vector<double>& out) const
    {
        real_roots(v_p - v_s, -2.0 * (v_p * x_p - v_s * x_s),
                   v_p * (x_p * x_p + c_p) - v_s * (x_s * x_s + c_s), out);
    }

    // Stationary points of (q - gamma u_p) / u_s. With k = gamma sigma_p^2,
    // P(x) = (x - x_p)^2 + C_p and S(x) = (x - x_s)^2 + C_s the condition is
    // k (x - x_p) S(x) + (q - k P(x)) (x - x_s) = 0, whose cubic terms cancel.
    void primary_branch_stationary(std::vector<double>& out) const
    {
        const double k = gamma * v_p;
        // k (x - x_p) S(x)
        const double s0 = x_s * x_s + c_s;
        const std::array<double, 4> a{-k * x_p * s0, k * (s0 + 2.0 * x_p * x_s), k * (-2.0 * x_s - x_p), k};
        // (q - k P(x)) (x - x_s), P(x) = x^2 - 2 x_p x + x_p^2 + C_p
        const double p0 = x_p * x_p + c_p;
        const double m0 = q - k * p0, m1 = 2.0 * k * x_p, m2 = -k;
        const std::array<double, 4> b{-m0 * x_s, m0 - m1 * x_s, m1 - m2 * x_s, m2};
        real_roots(a[2] + b[2], a[1] + b[1], a[0] + b[0], out);
    }
};

double argmax_on_candidates(const Geometry& g, std::vector<double> cand, double (Geometry::*f)(double) const)
{
    const double lo = g.lo(), hi = g.hi();
    cand.push_back(lo);
    cand.push_back(hi);
    std::sort(cand.begin(), cand.end());
    double best_x = lo;
    double best = -INFINITY;
    for (double x : cand)
    {
        if (!std::isfinite(x) || x < lo || x > hi)
            continue;
        const double v = (g.*f)(x);
        if (v > best)
        {
            best = v;
            best_x = x;
        }
    }
    return best_x;
}

} // namespace

const char* to_string(SingleAntennaCase c)
{
    switch (c)
    {
    case SingleAntennaCase::infeasible: return "infeasible";
    case SingleAntennaCase::boundary_primary: return "boundary_primary";
    case SingleAntennaCase::boundary_secondary: return "boundary_secondary";
    case SingleAntennaCase::interior: return "interior";
    }
    return "unknown";
}

const char* to_string(TightSet t)
{
    switch (t)
    {
    case TightSet::none: return "none";
    case TightSet::primary: return "primary";
    case TightSet::sic: return "sic";
    case TightSet::both: return "both";
    }
    return "unknown";
}

bool feasible_n1(const SystemConfig& cfg, const UserPair& users)
{
    const Geometry g(cfg, users);
    std::vector<double> cand{g.x_p, g.x_s};
    g.crossings(cand);
    const double x = argmax_on_candidates(g, std::move(cand), &Geometry::headroom);
    return g.headroom(x) >= -1e-12 * g.q;
}

bool feasible_n1_necessary(const SystemConfig& cfg, const UserPair& users)
{
    const Geometry g(cfg, users);
    return g.q >= g.gamma * std::max(g.c_p * g.v_p, g.c_s * g.v_s);
}

double single_antenna_snr(const SystemConfig& cfg, const UserPair& users, double x)
{
    return Geometry(cfg, users).snr(x);
}

SingleAntennaSolution solve_n1(const SystemConfig& cfg, const UserPair& users)
{
    cfg.validate();
    const Geometry g(cfg, users);
    SingleAntennaSolution sol;
    if (!feasible_n1(cfg, users))
        return sol;

    std::vector<double> cand{g.x_p, g.x_s};
    g.crossings(cand);
    g.primary_branch_stationary(cand);
    sol.x_star = argmax_on_candidates(g, std::move(cand), &Geometry::snr);

    const AntennaLayout layout{{sol.x_star}};
    const EffectiveChannels ch = effective_channel(cfg, users, layout);
    const PowerUpdateResult pu = optimal_power_split(cfg, ch, 1);
    sol.alpha_p_star = pu.alloc.alpha_p;
    sol.alpha_s_star = pu.alloc.alpha_s;
    const NomaRates r = noma_rates(cfg, ch, pu.alloc, 1);
    sol.secondary_rate = r.rate_s;
    sol.primary_rate = r.rate_p;

    const QosMargins m = qos_margins(cfg, ch, pu.alloc, 1);
    constexpr double tight_tol = 1e-9;
    const bool p_tight = std::abs(m.primary) <= tight_tol;
    const bool s_tight = std::abs(m.sic) <= tight_tol;
    sol.tight = p_tight && s_tight ? TightSet::both
              : p_tight           ? TightSet::primary
              : s_tight           ? TightSet::sic
                                  : TightSet::none;

    // alpha_s below 1e-12 is rounding noise at the feasibility edge.
    if (sol.alpha_s_star <= 1e-12)
    {
        sol.case_id = pu.binding == User::primary ? SingleAntennaCase::boundary_primary
                                                  : SingleAntennaCase::boundary_secondary;
    }
    else
    {
        sol.case_id = SingleAntennaCase::interior;
        sol.beta_p = std::abs(sol.x_star - g.x_p);
        sol.beta_s = std::abs(sol.x_star - g.x_s);
    }
    return sol;
}

QosSlacks check_tightness(const SystemConfig& cfg, const UserPair& users, const SingleAntennaSolution& sol)
{
    if (sol.case_id != SingleAntennaCase::interior)
        throw std::invalid_argument("check_tightness requires an interior single-antenna solution");
    const AntennaLayout layout{{sol.x_star}};
    const EffectiveChannels ch = effective_channel(cfg, users, layout);
    const QosMargins m = qos_margins(cfg, ch, {sol.alpha_p_star, sol.alpha_s_star}, 1);
    return {m.primary, m.sic};
}

std::pair<double, double> tight_offsets(const SystemConfig& cfg, const UserPair& users, double alpha_p)
{
    const Geometry g(cfg, users);
    const double lead = g.q * (alpha_p * (1.0 + g.gamma) - g.gamma);
    auto offset = [&](double c, double v) { return std::sqrt(std::abs((lead - c * v * g.gamma) / (v * g.gamma))); };
    return {offset(g.c_p, g.v_p), offset(g.c_s, g.v_s)};
}

double both_tight_alpha_p(const SystemConfig& cfg, const UserPair& users)
{
    const Geometry g(cfg, users);
    const double worst = std::max(g.c_p * g.v_p, g.c_s * g.v_s);
    return (g.q * g.gamma + worst * g.gamma) / (g.q * (1.0 + g.gamma));
}

double both_tight_snr(double gamma, double alpha_p)
{
    return gamma * (1.0 - alpha_p) / ((1.0 + gamma) * alpha_p - gamma);
}

} // namespace pinch
