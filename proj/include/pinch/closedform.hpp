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

#ifndef PINCH_CLOSEDFORM_HPP
#define PINCH_CLOSEDFORM_HPP

// Global optimum for a single pinching antenna.
//
// With one antenna the effective gains are |h_m|^2 = eta / ((x - x_m)^2 + C_m)
// and the optimal power split is known in closed form for every x. The
// achievable secondary SNR is then a ratio of quadratics in x,
//
//     F(x) = min_m (P eta - gamma u_m(x)) / ((1 + gamma) u_s(x)),
//     u_m(x) = sigma_m^2 ((x - x_m)^2 + C_m),
//
// and its maximum over [min(x_p, x_s), max(x_p, x_s)] is attained at one of a
// handful of algebraic candidates: the secondary user's projection, the
// stationary points of the primary-limited branch, the crossings of the two
// branches and the interval ends.

#include "pinch/model.hpp"

#include <string>
#include <utility>

namespace pinch
{

enum class SingleAntennaCase
{
    infeasible,
    boundary_primary,   // alpha_s = 0, primary QoS tight
    boundary_secondary, // alpha_s = 0, SIC tight
    interior            // alpha_s > 0
};

const char* to_string(SingleAntennaCase c);

// Which QoS constraints hold with equality at the optimum.
enum class TightSet
{
    none,
    primary,
    sic,
    both
};

const char* to_string(TightSet t);

struct SingleAntennaSolution
{
    double x_star = 0.0;
    double alpha_p_star = 1.0;
    double alpha_s_star = 0.0;
    SingleAntennaCase case_id = SingleAntennaCase::infeasible;
    TightSet tight = TightSet::none;
    double beta_p = 0.0; // |x* - x_p|, interior case
    double beta_s = 0.0; // |x* - x_s|, interior case
    double secondary_rate = 0.0;
    double primary_rate = 0.0;
};

// Exact: some x admits alpha_p = 1 meeting both QoS targets.
bool feasible_n1(const SystemConfig& cfg, const UserPair& users);

// P eta >= max(C_p sigma_p^2, C_s sigma_s^2) gamma. Necessary for
// feasible_n1; sufficient only when x_p = x_s.
bool feasible_n1_necessary(const SystemConfig& cfg, const UserPair& users);

// Achievable secondary SNR with one antenna at x and the optimal power split;
// negative when no split meets both QoS targets.
double single_antenna_snr(const SystemConfig& cfg, const UserPair& users, double x);

SingleAntennaSolution solve_n1(const SystemConfig& cfg, const UserPair& users);

struct QosSlacks
{
    double primary = 0.0; // (SINR_p - gamma) / gamma
    double sic = 0.0;     // (SIC SINR - gamma) / gamma
};

// Relative QoS slacks at (x*, alpha*). Throws std::invalid_argument unless
// sol.case_id is interior.
QosSlacks check_tightness(const SystemConfig& cfg, const UserPair& users, const SingleAntennaSolution& sol);

// Offsets |x - x_m| at which user m's QoS constraint is tight for a given
// alpha_p: sqrt(|(P eta (alpha_p (1 + gamma) - gamma) - C_m sigma_m^2 gamma) / (sigma_m^2 gamma)|).
std::pair<double, double> tight_offsets(const SystemConfig& cfg, const UserPair& users, double alpha_p);

// Smallest alpha_p for which both constraints can be tight simultaneously:
// max_m (P eta gamma + C_m sigma_m^2 gamma) / (P eta (1 + gamma)).
double both_tight_alpha_p(const SystemConfig& cfg, const UserPair& users);

// Secondary SNR when both constraints are tight, as a function of alpha_p:
// gamma (1 - alpha_p) / ((1 + gamma) alpha_p - gamma).
double both_tight_snr(double gamma, double alpha_p);

} // namespace pinch

#endif
