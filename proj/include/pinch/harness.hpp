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

#ifndef PINCH_HARNESS_HPP
#define PINCH_HARNESS_HPP

// Monte Carlo experiments: seeded random deployments, parameter sweeps over
// one variable, per-trial records and per-point aggregates.

#include "pinch/model.hpp"
#include "pinch/oracle.hpp"
#include "pinch/sca.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace pinch
{

enum class Scheme
{
    bcd_sca,
    closed_form_n1,
    exhaustive,
    oma,
    fixed_baseline
};

enum class SweepVariable
{
    P,
    gamma_p,
    N,
    D,
    f_c
};

// off: no loss anywhere. both: loss seen by the optimizer and the evaluation.
// eval_only: optimize without loss, then evaluate the layout with loss.
enum class AttenuationMode
{
    off,
    both,
    eval_only
};

const char* to_string(Scheme s);
const char* to_string(SweepVariable v);
const char* to_string(AttenuationMode m);
Scheme parse_scheme(const std::string& text);
SweepVariable parse_sweep_variable(const std::string& text);
AttenuationMode parse_attenuation_mode(const std::string& text);

struct ExperimentSpec
{
    std::vector<Scheme> schemes{Scheme::bcd_sca};
    SweepVariable sweep = SweepVariable::P;
    std::vector<double> values{30.0};
    int trials = 20;
    std::uint64_t seed = 1;
    std::string output;                   // CSV path; summary goes to <output>.json
    GradientMode gradient_mode = GradientMode::paper;
    AttenuationMode attenuation = AttenuationMode::off;
    double attenuation_db_per_m = 0.08;

    // Values used for every variable that is not swept.
    double fc_ghz = 28.0;
    double power_dbm = 30.0;
    double noise_dbm = -70.0;
    double gamma_p = 0.1;
    double side_d = 5.0;
    double height_d = 3.0;
    double n_neff = 1.4;
    double x0 = 0.0;
    std::size_t antennas = 2;

    OracleMode oracle_mode = OracleMode::coarse_to_fine;
    int gap_starts = 4;
    unsigned workers = 0;                 // 0: hardware concurrency
    bool timing = false;                  // record wall_ms; off keeps the CSV bit-reproducible

    // Throws std::invalid_argument on out-of-range fields.
    void validate() const;
};

// Flat "key = value" text, '#' comments. Keys are the ExperimentSpec field
// names; list fields take comma-separated values. Unknown keys throw.
ExperimentSpec parse_experiment_spec(const std::string& text);
ExperimentSpec load_experiment_spec(const std::string& path);

// System configuration for one sweep point.
SystemConfig config_for(const ExperimentSpec& spec, double sweep_value);
std::size_t antennas_for(const ExperimentSpec& spec, double sweep_value);

// Both users uniform on [0, D]^2, primary drawn first.
UserPair sample_deployment(std::mt19937_64& rng, double side);

// Deterministic generator for one trial. Deployments are shared across sweep
// values (common random numbers); region size scales them.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

struct TrialRecord
{
    std::uint64_t seed = 0;
    int trial = 0;
    double sweep_value = 0.0;
    UserPair users;
    Scheme scheme = Scheme::bcd_sca;
    PowerAllocation alloc;
    std::vector<double> positions;
    double rate_p = 0.0;
    double rate_s = 0.0;
    double sum_rate = 0.0;
    int outer_iters = 0;
    int inner_iters_total = 0;
    double wall_ms = 0.0;
    std::string termination;
};

struct Moments
{
    double mean = 0.0;
    double stddev = 0.0;
};

struct PointSummary
{
    double sweep_value = 0.0;
    Scheme scheme = Scheme::bcd_sca;
    int trials = 0;
    int feasible = 0;
    Moments rate_p, rate_s, sum_rate, outer_iters;
};

struct ExperimentResult
{
    std::vector<TrialRecord> rows;     // sweep-value order, then trial, then scheme
    std::vector<PointSummary> summary; // sweep-value order, then scheme
};

// Runs one scheme on one instance. Failures land in the record's termination.
TrialRecord run_trial(const ExperimentSpec& spec, double sweep_value, int trial, const UserPair& users, Scheme scheme);

ExperimentResult run_experiment(const ExperimentSpec& spec);

void write_csv(const ExperimentResult& result, std::ostream& out);
void write_summary_json(const ExperimentSpec& spec, const ExperimentResult& result, std::ostream& out);

// Writes <spec.output> and <spec.output>.json.
void save_experiment(const ExperimentSpec& spec, const ExperimentResult& result);

// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

} // namespace pinch

#endif
