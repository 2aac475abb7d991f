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

#ifndef PINCH_ORACLE_HPP
#define PINCH_ORACLE_HPP

// Brute-force references: exhaustive layout grids with the optimal power
// split at every point, and a 1-D scan over the power split.

#include "pinch/model.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pinch
{

struct GridSpec
{
    double lower = 0.0;
    double upper = 0.0;
    double step = 0.0;
    std::size_t dimensions = 1;

    // Number of grid points on one axis (both ends included).
    std::size_t points() const;

    // Default extent for an instance: the users' span for one antenna, the
    // span widened by N * Delta on each side otherwise. Step defaults to
    // lambda / 50. Clipped at the feed point when attenuation is on.
    static GridSpec for_instance(const SystemConfig& cfg, const UserPair& users, std::size_t n, double step = 0.0);
};

enum class OracleMode
{
    coarse_to_fine,
    exact
};

struct OracleOptions
{
    OracleMode mode = OracleMode::coarse_to_fine;
    std::uint64_t budget = 100'000'000; // layout evaluations
    unsigned threads = 0;               // 0: hardware concurrency
    int coarse_stride = 25;             // coarse step in fine steps (lambda/2 at lambda/50)
    double refine_halfwidth = 1.0;      // refine window, in wavelengths
    int refine_candidates = 8;          // coarse pairs refined
};

class OracleError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct OracleResult
{
    Solution solution;
    std::uint64_t evaluations = 0;
    bool feasible = false;
};

// Throws OracleError("budget_exceeded") when the grid would need more
// evaluations than allowed, std::invalid_argument for N outside {1, 2}. A grid
// without any QoS-feasible point yields feasible = false and termination
// "no_feasible_point".
OracleResult exhaustive_search(const SystemConfig& cfg, const UserPair& users, std::size_t n, const GridSpec& grid,
                               const OracleOptions& opts = {});

// Largest alpha_s on {1, 1 - step, ..., 0} passing both QoS checks. Returns
// alpha_s = 0 when none does.
PowerAllocation power_scan(const SystemConfig& cfg, const EffectiveChannels& ch, std::size_t n, double step);

} // namespace pinch

#endif
