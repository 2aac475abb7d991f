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

#include "pinch/baselines.hpp"

#include "pinch/power.hpp"

#include <algorithm>

namespace pinch
{

OmaSolution oma_solve(const SystemConfig& cfg, const UserPair& users, std::size_t n, const ScaOptions& opts)
{
    cfg.validate();
    OmaSolution out;
    for (User m : {User::primary, User::secondary})
    {
        const NewtonWeights w = m == User::primary ? NewtonWeights{1.0, 0.0} : NewtonWeights{0.0, 1.0};
        const NewtonInit init = newton_init(cfg, users, n, w);
        ScaOptions o = opts;
        o.single_user = m;
        const ScaResult r = sca_solve(cfg, users, init.layout, PowerAllocation{1.0, 0.0}, o);
        out.inner_iters_total += r.inner_iters;
        const double rate = oma_rate(cfg, users, r.layout, m);
        if (m == User::primary)
        {
            out.layout_p = r.layout;
            out.rate_p = rate;
            out.trace_p = r.accepted_rates;
        }
        else
        {
            out.layout_s = r.layout;
            out.rate_s = rate;
            out.trace_s = r.accepted_rates;
        }
    }
    out.sum_rate = out.rate_p + out.rate_s;
    return out;
}

AntennaLayout centroid_layout(const SystemConfig& cfg, std::size_t n)
{
    const double spacing = std::max(cfg.wavelength() / 2.0, cfg.min_spacing);
    const double center = cfg.feed_point_x0 + cfg.region_side / 2.0;
    const double first = center - static_cast<double>(n - 1) * spacing / 2.0;
    return AntennaLayout::uniform(std::max(first, cfg.requires_downstream() ? cfg.feed_point_x0 : first),
                                  spacing, n);
}

Solution fixed_baseline(const SystemConfig& cfg, const UserPair& users, std::size_t n)
{
    cfg.validate();
    Solution sol;
    sol.layout = centroid_layout(cfg, n);
    const PowerUpdateResult pu = optimal_power_split(cfg, effective_channel(cfg, users, sol.layout), n);
    sol.alloc = pu.alloc;
    evaluate_solution(cfg, users, sol);
    sol.termination = pu.infeasible_qos ? "infeasible_qos" : "converged";
    return sol;
}

} // namespace pinch
