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

#include "pinch/model.hpp"

#include <cmath>
#include <stdexcept>

namespace pinch
{

void SystemConfig::validate() const
{
    if (!(carrier_frequency > 0.0))
        throw std::invalid_argument("carrier frequency must be positive");
    if (!(transmit_power > 0.0))
        throw std::invalid_argument("transmit power must be positive");
    if (!(noise_power_primary > 0.0) || !(noise_power_secondary > 0.0))
        throw std::invalid_argument("noise powers must be positive");
    if (!(gamma_p > 0.0))
        throw std::invalid_argument("gamma_p must be positive");
    if (!(waveguide_height > 0.0))
        throw std::invalid_argument("waveguide height must be positive");
    if (!(min_spacing > 0.0))
        throw std::invalid_argument("minimum antenna spacing must be positive");
    if (!(region_side > 0.0))
        throw std::invalid_argument("region side must be positive");
    if (!(effective_refractive_index >= 1.0))
        throw std::invalid_argument("effective refractive index must be >= 1");
    if (!(inwaveguide_attenuation >= 0.0))
        throw std::invalid_argument("in-waveguide attenuation must be nonnegative");
}

SystemConfig SystemConfig::with_defaults(double carrier_frequency_hz)
{
    SystemConfig cfg;
    cfg.carrier_frequency = carrier_frequency_hz;
    cfg.min_spacing = cfg.wavelength() / 2.0;
    return cfg;
}

SystemConfig SystemConfig::retuned(double carrier_frequency_hz) const
{
    SystemConfig cfg = *this;
    cfg.carrier_frequency = carrier_frequency_hz;
    cfg.min_spacing = cfg.wavelength() / 2.0;
    return cfg;
}

bool AntennaLayout::is_valid(double delta) const
{
    if (positions.empty())
        return false;
    for (std::size_t n = 0; n < positions.size(); ++n)
    {
        if (!std::isfinite(positions[n]))
            return false;
        if (n > 0 && (positions[n] - positions[n - 1] < delta - 1e-9 || positions[n] <= positions[n - 1]))
            return false;
    }
    return true;
}

AntennaLayout AntennaLayout::uniform(double first, double delta, std::size_t count)
{
    AntennaLayout layout;
    layout.positions.resize(count);
    for (std::size_t n = 0; n < count; ++n)
        layout.positions[n] = first + static_cast<double>(n) * delta;
    return layout;
}

void require_valid_layout(const AntennaLayout& layout, double delta)
{
    if (layout.positions.empty())
        throw std::invalid_argument("antenna layout is empty");
    if (!layout.is_valid(delta))
        throw std::invalid_argument("antenna layout violates the minimum spacing");
}

double free_space_distance(const UserPair& users, User m, double x, double height)
{
    const double dx = x - users.x(m);
    return std::sqrt(dx * dx + users.c(m, height));
}

std::complex<double> channel_term(const SystemConfig& cfg, double x_m, double c_m, double x)
{
    const double pi = std::numbers::pi;
    const double dx = x - x_m;
    const double dist = std::sqrt(dx * dx + c_m);
    const double phase = 2.0 * pi / cfg.wavelength() * dist + 2.0 * pi / cfg.guided_wavelength() * (x - cfg.feed_point_x0);
    double amplitude = std::sqrt(cfg.eta()) / dist;
    if (cfg.inwaveguide_attenuation > 0.0)
        amplitude *= std::pow(10.0, -cfg.inwaveguide_attenuation * (x - cfg.feed_point_x0) / 20.0);
    return {amplitude * std::cos(phase), -amplitude * std::sin(phase)};
}

EffectiveChannels effective_channel(const SystemConfig& cfg, const UserPair& users, const AntennaLayout& layout)
{
    if (layout.positions.empty())
        throw std::invalid_argument("antenna layout is empty");

    const double d = cfg.waveguide_height;
    const double c_p = users.c(User::primary, d);
    const double c_s = users.c(User::secondary, d);

    EffectiveChannels ch{};
    for (double x : layout.positions)
    {
        if (cfg.inwaveguide_attenuation > 0.0 && x < cfg.feed_point_x0)
            throw std::invalid_argument("antenna lies upstream of the feed point");
        ch.h_p += channel_term(cfg, users.x_p, c_p, x);
        ch.h_s += channel_term(cfg, users.x_s, c_s, x);
    }
    return ch;
}

double sic_sinr_at_secondary(const SystemConfig& cfg, std::complex<double> h_s, const PowerAllocation& alloc, std::size_t n)
{
    const double g = cfg.transmit_power * std::norm(h_s);
    return alloc.alpha_p * g / (alloc.alpha_s * g + static_cast<double>(n) * cfg.noise_power_secondary);
}

double secondary_snr(const SystemConfig& cfg, std::complex<double> h_s, const PowerAllocation& alloc, std::size_t n)
{
    return alloc.alpha_s * cfg.transmit_power * std::norm(h_s) / (static_cast<double>(n) * cfg.noise_power_secondary);
}

double primary_sinr(const SystemConfig& cfg, std::complex<double> h_p, const PowerAllocation& alloc, std::size_t n)
{
    const double g = cfg.transmit_power * std::norm(h_p);
    return alloc.alpha_p * g / (alloc.alpha_s * g + static_cast<double>(n) * cfg.noise_power_primary);
}

NomaRates noma_rates(const SystemConfig& cfg, const EffectiveChannels& ch, const PowerAllocation& alloc, std::size_t n)
{
    return {std::log2(1.0 + primary_sinr(cfg, ch.h_p, alloc, n)), std::log2(1.0 + secondary_snr(cfg, ch.h_s, alloc, n))};
}

double oma_rate(const SystemConfig& cfg, const UserPair& users, const AntennaLayout& layout, User m)
{
    const EffectiveChannels ch = effective_channel(cfg, users, layout);
    const double snr = std::norm(ch.of(m)) * cfg.transmit_power / (static_cast<double>(layout.size()) * cfg.noise_power(m));
    return 0.5 * std::log2(1.0 + snr);
}

} // namespace pinch
