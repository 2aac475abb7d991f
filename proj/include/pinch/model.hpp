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

#ifndef PINCH_MODEL_HPP
#define PINCH_MODEL_HPP

// Physical model of a two-user downlink served by pinching antennas on one
// dielectric waveguide. The waveguide runs parallel to the x-axis at height d,
// users sit in the z = 0 plane. All quantities are SI and linear.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace pinch
{

inline constexpr double speed_of_light = 299792458.0; // m/s

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

enum class User
{
    primary,
    secondary
};

struct SystemConfig
{
    double carrier_frequency = 28e9;          // Hz
    double transmit_power = 1.0;              // W (30 dBm)
    double noise_power_primary = 1e-10;       // W (-70 dBm)
    double noise_power_secondary = 1e-10;     // W (-70 dBm)
    double gamma_p = 0.1;                     // primary SINR target, linear
    double waveguide_height = 3.0;            // d, m
    double min_spacing = 0.0;                 // Delta, m; 0 selects lambda/2 in with_defaults()
    double region_side = 5.0;                 // D, m
    double feed_point_x0 = 0.0;               // m
    double effective_refractive_index = 1.4;  // n_neff
    double inwaveguide_attenuation = 0.0;     // dB/m, 0 disables
    bool downstream_only = false;             // keep antennas at x >= x0 even without attenuation

    double wavelength() const { return speed_of_light / carrier_frequency; }
    double guided_wavelength() const { return wavelength() / effective_refractive_index; }

    // c^2 / (16 pi^2 f_c^2)
    double eta() const
    {
        const double pi = std::numbers::pi;
        return speed_of_light * speed_of_light / (16.0 * pi * pi * carrier_frequency * carrier_frequency);
    }

    // Antennas may not sit upstream of the feed point.
    bool requires_downstream() const { return downstream_only || inwaveguide_attenuation > 0.0; }

    double noise_power(User m) const { return m == User::primary ? noise_power_primary : noise_power_secondary; }

    // Throws std::invalid_argument on any violated invariant.
    void validate() const;

    // Default geometry with Delta = lambda/2 for the given carrier.
    static SystemConfig with_defaults(double carrier_frequency_hz = 28e9);

    // Returns a copy retuned to a new carrier; Delta tracks lambda/2.
    SystemConfig retuned(double carrier_frequency_hz) const;
};

struct UserPair
{
    double x_p = 0.0, y_p = 0.0;
    double x_s = 0.0, y_s = 0.0;

    double x(User m) const { return m == User::primary ? x_p : x_s; }
    double y(User m) const { return m == User::primary ? y_p : y_s; }

    // C_m = y_m^2 + d^2
    double c(User m, double height) const { return y(m) * y(m) + height * height; }

    double x_min() const { return x_p < x_s ? x_p : x_s; }
    double x_max() const { return x_p < x_s ? x_s : x_p; }

    UserPair shifted(double dx) const { return {x_p + dx, y_p, x_s + dx, y_s}; }
};

// Ordered pinching-antenna x-coordinates along the waveguide.
struct AntennaLayout
{
    std::vector<double> positions;

    std::size_t size() const { return positions.size(); }

    // Strictly increasing with every gap >= delta - 1e-9.
    bool is_valid(double delta) const;

    // Equally spaced layout x_1, x_1 + delta, ...
    static AntennaLayout uniform(double first, double delta, std::size_t count);
};

// Throws std::invalid_argument when the layout is empty or violates spacing.
void require_valid_layout(const AntennaLayout& layout, double delta);

struct EffectiveChannels
{
    std::complex<double> h_p;
    std::complex<double> h_s;

    const std::complex<double>& of(User m) const { return m == User::primary ? h_p : h_s; }
};

struct PowerAllocation
{
    double alpha_p = 1.0;
    double alpha_s = 0.0;

    static PowerAllocation from_secondary(double alpha_s) { return {1.0 - alpha_s, alpha_s}; }
};

// sqrt((x - x_m)^2 + C_m)
double free_space_distance(const UserPair& users, User m, double x, double height);

// One antenna's contribution to h_m, including optional in-waveguide loss.
std::complex<double> channel_term(const SystemConfig& cfg, double x_m, double c_m, double x);

// Sum of channel_term over the layout for both users. Rejects antennas
// upstream of the feed point when attenuation is enabled.
EffectiveChannels effective_channel(const SystemConfig& cfg, const UserPair& users, const AntennaLayout& layout);

double sic_sinr_at_secondary(const SystemConfig& cfg, std::complex<double> h_s, const PowerAllocation& alloc, std::size_t n);
double secondary_snr(const SystemConfig& cfg, std::complex<double> h_s, const PowerAllocation& alloc, std::size_t n);
double primary_sinr(const SystemConfig& cfg, std::complex<double> h_p, const PowerAllocation& alloc, std::size_t n);

struct NomaRates
{
    double rate_p = 0.0; // bits/s/Hz
    double rate_s = 0.0;
    double sum() const { return rate_p + rate_s; }
};

NomaRates noma_rates(const SystemConfig& cfg, const EffectiveChannels& ch, const PowerAllocation& alloc, std::size_t n);

// (1/2) log2(1 + |h_m|^2 P / (N sigma_m^2)); the 1/2 is the TDMA share.
double oma_rate(const SystemConfig& cfg, const UserPair& users, const AntennaLayout& layout, User m);

// Full solver output shared by every scheme.
struct Solution
{
    AntennaLayout layout;
    PowerAllocation alloc;
    double rate_p = 0.0;
    double rate_s = 0.0;
    double sum_rate = 0.0;
    int outer_iters = 0;
    int inner_iters_total = 0;
    std::string termination = "converged";
};

} // namespace pinch

#endif
