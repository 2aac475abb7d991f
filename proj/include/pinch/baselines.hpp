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

#ifndef PINCH_BASELINES_HPP
#define PINCH_BASELINES_HPP

// Reference schemes: time-shared OMA with per-slot antenna placement, and a
// static layout above the region centroid with the NOMA power split.

#include "pinch/model.hpp"
#include "pinch/sca.hpp"

namespace pinch
{

inline constexpr const char* fixed_baseline_label = "fixed-layout (non-SDR)";

struct OmaSolution
{
    AntennaLayout layout_p; // slot 1
    AntennaLayout layout_s; // slot 2
    double rate_p = 0.0;
    double rate_s = 0.0;
    double sum_rate = 0.0;
    int inner_iters_total = 0;
    std::vector<double> trace_p, trace_s; // accepted single-user rates
};

// Each user gets its own slot at full power; its layout maximizes its own gain.
OmaSolution oma_solve(const SystemConfig& cfg, const UserPair& users, std::size_t n, const ScaOptions& opts = {});

// N antennas at spacing lambda / 2 centered above x0 + D / 2.
AntennaLayout centroid_layout(const SystemConfig& cfg, std::size_t n);

Solution fixed_baseline(const SystemConfig& cfg, const UserPair& users, std::size_t n);

} // namespace pinch

#endif
