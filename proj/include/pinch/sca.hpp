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

#ifndef PINCH_SCA_HPP
#define PINCH_SCA_HPP

// Position optimization by successive linear programming.
//
// The outer block-coordinate loop alternates between the closed-form power
// split and an inner loop that repeatedly linearizes the channel terms around
// the current positions, solves the resulting LP inside a trust region and
// accepts the step only if the exact objective improves.

#include "pinch/lp.hpp"
#include "pinch/model.hpp"
#include "pinch/power.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pinch
{

// paper: phase-only linearization; only the in-waveguide phase is
// differentiated, amplitude and free-space phase stay frozen.
// full: exact derivative of each channel term.
enum class GradientMode
{
    paper,
    full
};

const char* to_string(GradientMode mode);
GradientMode parse_gradient_mode(const std::string& text);

struct ScaOptions
{
    GradientMode gradient = GradientMode::paper;
    double initial_radius = 0.25;   // trust radius, in wavelengths
    double max_radius = 1.0;        // in wavelengths
    double min_radius = 1e-4;       // collapse threshold, in wavelengths
    int max_inner_iters = 200;
    int max_outer_iters = 50;
    bool all_newton_maxima = false; // also run the outer loop from secondary local maxima of g
    int gap_starts = 4;             // extra starts widen the initial gap by k * lambda / gap_starts
    double tolerance = 1e-3;        // bits/s/Hz, inner and outer loops
    double qos_slack = 1e-6;        // accepted relative QoS violation

    // Set for single-user (OMA) operation: maximize this user's SNR at full
    // power with no QoS rows.
    std::optional<User> single_user;
};

// First-order data of every channel term at one expansion point.
struct TermExpansion
{
    std::vector<double> d, d_slope;         // distance and d'(x)
    std::vector<double> t_re, t_im;         // channel term
    std::vector<double> t_re_slope, t_im_slope;
    double g_re = 0.0, g_im = 0.0;          // sum of the terms

    double gain() const { return g_re * g_re + g_im * g_im; }
};

struct ScaIterate
{
    std::vector<double> positions;
    TermExpansion p, s;
    double trust_radius = 0.0; // meters

    const TermExpansion& of(User m) const { return m == User::primary ? p : s; }

    static ScaIterate expand(const SystemConfig& cfg, const UserPair& users, const std::vector<double>& positions,
                             GradientMode mode, double trust_radius);
};

// Slope of one channel term at x under the chosen model. Returned as
// (d t_re / dx, d t_im / dx).
std::pair<double, double> term_slope(const SystemConfig& cfg, double x_m, double c_m, double x, GradientMode mode);

// Per-iteration LP over (u_1..u_N, z). u_n is the position step in
// wavelengths; z is the linearized objective SNR. Every auxiliary variable of
// the linearization has been substituted out.
struct Subproblem
{
    LinearProgram lp;
    double z_now = 0.0;         // objective SNR at the expansion point
    bool degenerate_cut = false;
};

Subproblem linearize(const SystemConfig& cfg, const UserPair& users, const ScaIterate& it, const PowerAllocation& alloc,
                     const ScaOptions& opts = {});

// Same subproblem with d, t and h kept as explicit LP variables tied by
// equality rows. Variables start with (u_1..u_N, z), followed by auxiliaries;
// t and h are scaled by sqrt(eta) / min distance.
Subproblem linearize_full(const SystemConfig& cfg, const UserPair& users, const ScaIterate& it,
                          const PowerAllocation& alloc, const ScaOptions& opts = {});

struct ScaResult
{
    AntennaLayout layout;
    int inner_iters = 0;
    double objective_rate = 0.0;        // log2(1 + objective SNR) at the result
    std::vector<double> accepted_rates; // one entry per accepted step, starting at the input
    std::string termination = "converged";
};

ScaResult sca_solve(const SystemConfig& cfg, const UserPair& users, const AntennaLayout& init,
                    const PowerAllocation& alloc, const ScaOptions& opts = {});

// Moves a QoS-infeasible layout toward feasibility by maximizing
// min_m P |h_m|^2 / (N sigma_m^2 gamma) with the same trust-region LP steps.
// objective_rate holds that ratio (not a rate); success when it reaches 1.
ScaResult restore_qos(const SystemConfig& cfg, const UserPair& users, const AntennaLayout& init,
                      const ScaOptions& opts = {});

struct NewtonInit
{
    AntennaLayout layout;
    double x1 = 0.0;
    double slope = 0.0;      // g'(x1)
    double curvature = 0.0;  // g''(x1)
    int iterations = 0;      // Newton steps across all starts
    bool fallback = false;   // no start reached a maximum
    std::vector<double> maxima; // distinct local maxima found, best g first
};

struct NewtonWeights
{
    double primary = 1.0;
    double secondary = 1.0;
};

// g(x1) = sum_n w_p f_p(x1 + (n-1) Delta) + w_s f_s(...), f_m = 1/distance.
double newton_objective(const SystemConfig& cfg, const UserPair& users, std::size_t n, double x1,
                        NewtonWeights w = {});

NewtonInit newton_init(const SystemConfig& cfg, const UserPair& users, std::size_t n, NewtonWeights w = {});

struct SolveReport
{
    Solution solution;
    std::vector<double> rate_trace; // secondary rate after init and after every outer iteration
    std::vector<int> inner_iters;   // per outer iteration
    bool newton_fallback = false;
    int starts = 1;                 // outer loops run, one per Newton maximum
    bool restored = false;          // init was QoS-infeasible and had to be repaired
};

SolveReport bcd_solve(const SystemConfig& cfg, const UserPair& users, std::size_t n, const ScaOptions& opts = {});

// Fills rates in a Solution from its layout and allocation.
void evaluate_solution(const SystemConfig& cfg, const UserPair& users, Solution& sol);

} // namespace pinch

#endif
