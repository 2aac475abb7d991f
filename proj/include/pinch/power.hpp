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

#ifndef PINCH_POWER_HPP
#define PINCH_POWER_HPP

#include "pinch/model.hpp"

namespace pinch
{

struct PowerUpdateResult
{
    PowerAllocation alloc;
    double cap_A = 0.0;                            // upper bound on alpha_s from both QoS constraints
    bool feasible_with_positive_secondary = false; // cap_A > 0
    bool infeasible_qos = false;                   // even alpha_p = 1 misses a QoS target
    User binding = User::primary;                  // user attaining the min in cap_A
};

// Largest alpha_s meeting both the primary SINR target and the SIC condition
// for fixed channels. Throws std::invalid_argument if either channel is zero.
PowerUpdateResult optimal_power_split(const SystemConfig& cfg, const EffectiveChannels& ch, std::size_t n);

struct QosCheck
{
    bool primary_ok = false;
    bool sic_ok = false;
    bool both() const { return primary_ok && sic_ok; }
};

// Both tests use an absolute slack of 1e-9 on the SINR.
QosCheck verify_qos(const SystemConfig& cfg, const EffectiveChannels& ch, const PowerAllocation& alloc, std::size_t n);

// Relative margins (sinr - gamma_p) / gamma_p for primary decoding and SIC.
struct QosMargins
{
    double primary = 0.0;
    double sic = 0.0;
    double worst() const { return primary < sic ? primary : sic; }
};

QosMargins qos_margins(const SystemConfig& cfg, const EffectiveChannels& ch, const PowerAllocation& alloc, std::size_t n);

} // namespace pinch

#endif
