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

#include "pinch/oracle.hpp"

#include "pinch/kernels.hpp"
#include "pinch/power.hpp"
#include "pinch/sca.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace pinch
{

namespace
{

struct TermTable
{
    std::vector<double> x;
    std::vector<double> p_re, p_im, s_re, s_im;

    kernels::PairScanParams params(const SystemConfig& cfg, std::size_t n) const
    {
        kernels::PairScanParams k;
        k.p_re = p_re.data();
        k.p_im = p_im.data();
        k.s_re = s_re.data();
        k.s_im = s_im.data();
        k.power = cfg.transmit_power;
        k.noise_p = static_cast<double>(n) * cfg.noise_power_primary;
        k.noise_s = static_cast<double>(n) * cfg.noise_power_secondary;
        k.gamma = cfg.gamma_p;
        return k;
    }
};

TermTable build_terms(const SystemConfig& cfg, const UserPair& users, const GridSpec& grid, std::size_t stride)
{
    const double h = cfg.waveguide_height;
    const double c_p = users.c(User::primary, h);
    const double c_s = users.c(User::secondary, h);
    const std::size_t m = grid.points();
    TermTable t;
    for (std::size_t j = 0; j < m; j += stride)
    {
        const double x = grid.lower + static_cast<double>(j) * grid.step;
        const std::complex<double> tp = channel_term(cfg, users.x_p, c_p, x);
        const std::complex<double> ts = channel_term(cfg, users.x_s, c_s, x);
        t.x.push_back(x);
        t.p_re.push_back(tp.real());
        t.p_im.push_back(tp.imag());
        t.s_re.push_back(ts.real());
        t.s_im.push_back(ts.imag());
    }
    return t;
}

// Smallest index offset k with k * step >= Delta (up to the layout slack).
std::size_t min_offset(double delta, double step)
{
    auto k = static_cast<std::size_t>(std::ceil((delta - 1e-9) / step - 1e-9));
    while (static_cast<double>(k) * step < delta - 1e-9)
        ++k;
    return std::max<std::size_t>(k, 1);
}

struct PairBest
{
    double score = -INFINITY;
    std::size_t i = kernels::no_index;
    std::size_t j = kernels::no_index;

    // Higher score wins; ties go to the lexicographically smaller layout.
    bool beats(const PairBest& o) const
    {
        if (i == kernels::no_index)
            return false;
        if (o.i == kernels::no_index || score > o.score)
            return true;
        return score == o.score && (i < o.i || (i == o.i && j < o.j));
    }
};

struct RowRange
{
    std::size_t first_row, last_row;                // inclusive
    std::size_t col_lo, col_hi;                     // inclusive clamp on j
    std::size_t offset;                             // j >= i + offset
};

// Best pair per row over rows [first_row, last_row].
std::vector<PairBest> scan_rows(const TermTable& t, const kernels::PairScanParams& base, const RowRange& rr,
                                kernels::Isa isa, unsigned threads)
{
    const std::size_t rows = rr.last_row >= rr.first_row ? rr.last_row - rr.first_row + 1 : 0;
    std::vector<PairBest> out(rows);
    auto work = [&](std::size_t r0, std::size_t r1) {
        for (std::size_t r = r0; r < r1; ++r)
        {
            const std::size_t i = rr.first_row + r;
            const std::size_t begin = std::max(i + rr.offset, rr.col_lo);
            const std::size_t end = std::min(rr.col_hi + 1, t.x.size());
            if (begin >= end)
                continue;
            kernels::PairScanParams k = base;
            k.anchor_p_re = t.p_re[i];
            k.anchor_p_im = t.p_im[i];
            k.anchor_s_re = t.s_re[i];
            k.anchor_s_im = t.s_im[i];
            const kernels::ScanBest b = kernels::scan_row(isa, k, begin, end);
            out[r] = {b.score, i, b.index};
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rows / 64 + 1)));
    if (workers == 1)
    {
        work(0, rows);
        return out;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (rows + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w)
    {
        const std::size_t r0 = w * chunk;
        const std::size_t r1 = std::min(rows, r0 + chunk);
        if (r0 < r1)
            pool.emplace_back(work, r0, r1);
    }
    for (auto& th : pool)
        th.join();
    return out;
}

std::uint64_t pair_count(const RowRange& rr, std::size_t points)
{
    std::uint64_t total = 0;
    for (std::size_t i = rr.first_row; i <= rr.last_row && i < points; ++i)
    {
        const std::size_t begin = std::max(i + rr.offset, rr.col_lo);
        const std::size_t end = std::min(rr.col_hi + 1, points);
        if (begin < end)
            total += end - begin;
    }
    return total;
}

unsigned resolve_threads(unsigned requested)
{
    if (requested != 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

OracleResult finish(const SystemConfig& cfg, const UserPair& users, std::size_t n, std::vector<double> positions,
                    std::uint64_t evaluations)
{
    OracleResult res;
    res.evaluations = evaluations;
    Solution& sol = res.solution;
    sol.layout.positions = std::move(positions);
    const PowerUpdateResult pu = optimal_power_split(cfg, effective_channel(cfg, users, sol.layout), n);
    sol.alloc = pu.alloc;
    evaluate_solution(cfg, users, sol);
    res.feasible = !pu.infeasible_qos;
    sol.termination = res.feasible ? "converged" : "no_feasible_point";
    return res;
}

} // namespace

std::size_t GridSpec::points() const
{
    if (!(step > 0.0) || !(upper >= lower))
        return 0;
    return static_cast<std::size_t>(std::floor((upper - lower) / step + 1e-9)) + 1;
}

GridSpec GridSpec::for_instance(const SystemConfig& cfg, const UserPair& users, std::size_t n, double step)
{
    GridSpec g;
    g.dimensions = n;
    g.step = step > 0.0 ? step : cfg.wavelength() / 50.0;
    const double pad = n == 1 ? 0.0 : static_cast<double>(n) * cfg.min_spacing;
    g.lower = users.x_min() - pad;
    g.upper = users.x_max() + pad;
    if (cfg.requires_downstream())
    {
        g.lower = std::max(g.lower, cfg.feed_point_x0);
        g.upper = std::max(g.upper, g.lower);
    }
    return g;
}

OracleResult exhaustive_search(const SystemConfig& cfg, const UserPair& users, std::size_t n, const GridSpec& grid,
                               const OracleOptions& opts)
{
    cfg.validate();
    if (n != 1 && n != 2)
        throw std::invalid_argument("exhaustive_search supports N = 1 or N = 2");
    if (!(grid.step > 0.0) || !(grid.upper >= grid.lower))
        throw std::invalid_argument("invalid grid");

    const kernels::Isa isa = kernels::active_isa();
    const unsigned threads = resolve_threads(opts.threads);
    const std::size_t m = grid.points();

    if (n == 1)
    {
        if (m > opts.budget)
            throw OracleError("budget_exceeded");
        const TermTable t = build_terms(cfg, users, grid, 1);
        const kernels::ScanBest b = kernels::scan_row(isa, t.params(cfg, 1), 0, m);
        if (b.index == kernels::no_index || b.score < 0.0)
        {
            OracleResult r = finish(cfg, users, 1, {t.x.front()}, m);
            r.feasible = false;
            r.solution.termination = "no_feasible_point";
            return r;
        }
        return finish(cfg, users, 1, {t.x[b.index]}, m);
    }

    const std::size_t offset = min_offset(cfg.min_spacing, grid.step);
    if (m <= offset)
        throw std::invalid_argument("grid too short for two antennas at the minimum spacing");

    auto best_of = [](const std::vector<PairBest>& rows) {
        PairBest best;
        for (const PairBest& r : rows)
            if (r.beats(best))
                best = r;
        return best;
    };

    if (opts.mode == OracleMode::exact)
    {
        const RowRange rr{0, m - 1, 0, m - 1, offset};
        const std::uint64_t evals = pair_count(rr, m);
        if (evals > opts.budget)
            throw OracleError("budget_exceeded");
        const TermTable t = build_terms(cfg, users, grid, 1);
        const PairBest b = best_of(scan_rows(t, t.params(cfg, 2), rr, isa, threads));
        if (b.i == kernels::no_index || b.score < 0.0)
        {
            OracleResult r = finish(cfg, users, 2, {t.x[0], t.x[offset]}, evals);
            r.feasible = false;
            r.solution.termination = "no_feasible_point";
            return r;
        }
        return finish(cfg, users, 2, {t.x[b.i], t.x[b.j]}, evals);
    }

    // Coarse pass on every stride-th grid point.
    const auto stride = static_cast<std::size_t>(std::max(opts.coarse_stride, 1));
    const TermTable coarse = build_terms(cfg, users, grid, stride);
    GridSpec coarse_grid = grid;
    coarse_grid.step = grid.step * static_cast<double>(stride);
    const std::size_t mc = coarse.x.size();
    const std::size_t coarse_offset = min_offset(cfg.min_spacing, coarse_grid.step);
    const TermTable fine = build_terms(cfg, users, grid, 1);

    std::uint64_t evals = 0;
    std::vector<PairBest> coarse_rows;
    if (mc > coarse_offset)
    {
        const RowRange rr{0, mc - 1, 0, mc - 1, coarse_offset};
        evals += pair_count(rr, mc);
        if (evals > opts.budget)
            throw OracleError("budget_exceeded");
        coarse_rows = scan_rows(coarse, coarse.params(cfg, 2), rr, isa, threads);
    }
    std::vector<PairBest> ranked;
    for (const PairBest& r : coarse_rows)
        if (r.i != kernels::no_index)
            ranked.push_back(r);
    std::stable_sort(ranked.begin(), ranked.end(), [](const PairBest& a, const PairBest& b) { return a.beats(b); });
    if (ranked.size() > static_cast<std::size_t>(std::max(opts.refine_candidates, 1)))
        ranked.resize(static_cast<std::size_t>(std::max(opts.refine_candidates, 1)));
    if (ranked.empty())
        ranked.push_back({0.0, 0, coarse_offset}); // degenerate coarse grid: refine near the left edge

    // Fine pass: window of +-refine_halfwidth around each coarse pair.
    const auto half = static_cast<std::size_t>(std::llround(opts.refine_halfwidth * cfg.wavelength() / grid.step));
    PairBest best;
    for (const PairBest& c : ranked)
    {
        const std::size_t ci = c.i * stride;
        const std::size_t cj = std::min(c.j * stride, m - 1);
        const RowRange rr{ci > half ? ci - half : 0, std::min(ci + half, m - 1), cj > half ? cj - half : 0,
                          std::min(cj + half, m - 1), offset};
        evals += pair_count(rr, m);
        if (evals > opts.budget)
            throw OracleError("budget_exceeded");
        const PairBest b = best_of(scan_rows(fine, fine.params(cfg, 2), rr, isa, threads));
        if (b.beats(best))
            best = b;
    }
    if (best.i == kernels::no_index || best.score < 0.0)
    {
        OracleResult r = finish(cfg, users, 2, {fine.x[0], fine.x[offset]}, evals);
        r.feasible = false;
        r.solution.termination = "no_feasible_point";
        return r;
    }
    return finish(cfg, users, 2, {fine.x[best.i], fine.x[best.j]}, evals);
}

PowerAllocation power_scan(const SystemConfig& cfg, const EffectiveChannels& ch, std::size_t n, double step)
{
    if (!(step > 0.0) || step > 0.01)
        throw std::invalid_argument("power_scan step must lie in (0, 0.01]");
    const auto steps = static_cast<std::size_t>(std::floor(1.0 / step + 1e-9));
    for (std::size_t k = 0; k <= steps; ++k)
    {
        const double alpha_s = std::max(0.0, 1.0 - static_cast<double>(k) * step);
        const PowerAllocation a = PowerAllocation::from_secondary(alpha_s);
        if (verify_qos(cfg, ch, a, n).both())
            return a;
    }
    return PowerAllocation::from_secondary(0.0);
}

} // namespace pinch
