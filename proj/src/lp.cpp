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

#include "pinch/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pinch
{

std::size_t LinearProgram::add_variable(double lo, double hi, double cost)
{
    objective.push_back(cost);
    lower.push_back(lo);
    upper.push_back(hi);
    for (auto& row : rows)
        row.coeffs.resize(objective.size(), 0.0);
    return objective.size() - 1;
}

void LinearProgram::add_row(std::vector<double> coeffs, RowSense sense, double bound)
{
    if (coeffs.size() > num_vars())
        throw std::invalid_argument("LP row has more coefficients than variables");
    coeffs.resize(num_vars(), 0.0);
    rows.push_back({std::move(coeffs), sense, bound});
}

const char* to_string(LpStatus s)
{
    switch (s)
    {
    case LpStatus::optimal:
        return "optimal";
    case LpStatus::infeasible:
        return "infeasible";
    case LpStatus::unbounded:
        return "unbounded";
    case LpStatus::iteration_limit:
        return "iteration_limit";
    }
    return "unknown";
}

namespace
{

// x_j = offset + sum over its columns of scale * y, y >= 0
struct VarMap
{
    double offset = 0.0;
    int col_pos = -1; // y with coefficient +scale
    int col_neg = -1; // y with coefficient -1 (free variables only)
    double scale = 1.0;
};

struct StdRow
{
    std::vector<double> a; // over y columns
    RowSense sense;
    double rhs;
};

constexpr double pivot_tol = 1e-11;
constexpr double cost_tol = 1e-10;

class Tableau
{
  public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), t_(rows * (cols + 1), 0.0), basis_(rows, 0) {}

    double& at(std::size_t r, std::size_t c) { return t_[r * (cols_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return t_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    double rhs(std::size_t r) const { return at(r, cols_); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::vector<std::size_t>& basis() { return basis_; }

    void pivot(std::size_t pr, std::size_t pc, std::vector<double>& reduced)
    {
        const double inv = 1.0 / at(pr, pc);
        for (std::size_t c = 0; c <= cols_; ++c)
            at(pr, c) *= inv;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r < rows_; ++r)
        {
            if (r == pr)
                continue;
            const double f = at(r, pc);
            if (f == 0.0)
                continue;
            for (std::size_t c = 0; c <= cols_; ++c)
                at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
        const double f = reduced[pc];
        if (f != 0.0)
        {
            for (std::size_t c = 0; c <= cols_; ++c)
                reduced[c] -= f * at(pr, c);
            reduced[pc] = 0.0;
        }
        basis_[pr] = pc;
    }

  private:
    std::size_t rows_, cols_;
    std::vector<double> t_;
    std::vector<std::size_t> basis_;
};

// reduced[c] = cost[c] - sum_r cost[basis[r]] * T[r][c]; reduced[cols] holds -objective.
std::vector<double> reduced_costs(const Tableau& tab, const std::vector<std::size_t>& basis, const std::vector<double>& cost)
{
    std::vector<double> d(tab.cols() + 1, 0.0);
    for (std::size_t c = 0; c < tab.cols(); ++c)
        d[c] = cost[c];
    for (std::size_t r = 0; r < tab.rows(); ++r)
    {
        const double cb = cost[basis[r]];
        if (cb == 0.0)
            continue;
        for (std::size_t c = 0; c <= tab.cols(); ++c)
            d[c] -= cb * tab.at(r, c);
    }
    return d;
}

enum class PhaseResult
{
    optimal,
    unbounded,
    iteration_limit
};

// Bland's rule: lowest-index improving column, lowest-index basic variable on ratio ties.
PhaseResult run_simplex(Tableau& tab, std::vector<double>& reduced, const std::vector<bool>& allowed, int& budget)
{
    while (true)
    {
        std::size_t enter = tab.cols();
        for (std::size_t c = 0; c < tab.cols(); ++c)
        {
            if (allowed[c] && reduced[c] > cost_tol)
            {
                enter = c;
                break;
            }
        }
        if (enter == tab.cols())
            return PhaseResult::optimal;
        if (--budget < 0)
            return PhaseResult::iteration_limit;

        std::size_t leave = tab.rows();
        double best_ratio = 0.0;
        for (std::size_t r = 0; r < tab.rows(); ++r)
        {
            const double a = tab.at(r, enter);
            if (a <= pivot_tol)
                continue;
            const double ratio = std::max(tab.rhs(r), 0.0) / a;
            const double eps = 1e-12 * (1.0 + best_ratio);
            if (leave == tab.rows() || ratio < best_ratio - eps)
            {
                leave = r;
                best_ratio = ratio;
            }
            else if (ratio <= best_ratio + eps && tab.basis()[r] < tab.basis()[leave])
            {
                leave = r;
                best_ratio = std::min(best_ratio, ratio);
            }
        }
        if (leave == tab.rows())
            return PhaseResult::unbounded;
        tab.pivot(leave, enter, reduced);
    }
}

} // namespace

LpResult solve_lp(const LinearProgram& lp)
{
    const std::size_t n = lp.num_vars();
    if (lp.lower.size() != n || lp.upper.size() != n)
        throw std::invalid_argument("LP bounds do not match the number of variables");

    LpResult result;

    // Substitute bounds.
    std::vector<VarMap> map(n);
    std::size_t ycols = 0;
    std::vector<StdRow> rows;
    std::vector<std::size_t> box_rows; // y columns bounded by 1
    for (std::size_t j = 0; j < n; ++j)
    {
        const double lo = lp.lower[j], hi = lp.upper[j];
        if (lo > hi)
            return result;
        VarMap& m = map[j];
        const bool lo_f = std::isfinite(lo), hi_f = std::isfinite(hi);
        if (lo_f && hi_f)
        {
            m.offset = lo;
            if (hi > lo)
            {
                m.col_pos = static_cast<int>(ycols++);
                m.scale = hi - lo;
                box_rows.push_back(static_cast<std::size_t>(m.col_pos));
            }
        }
        else if (lo_f)
        {
            m.offset = lo;
            m.col_pos = static_cast<int>(ycols++);
        }
        else if (hi_f)
        {
            m.offset = hi;
            m.col_pos = static_cast<int>(ycols++);
            m.scale = -1.0;
        }
        else
        {
            m.col_pos = static_cast<int>(ycols++);
            m.col_neg = static_cast<int>(ycols++);
        }
    }

    auto expand = [&](const std::vector<double>& a, double& constant) {
        std::vector<double> y(ycols, 0.0);
        constant = 0.0;
        for (std::size_t j = 0; j < n; ++j)
        {
            const double aj = j < a.size() ? a[j] : 0.0;
            if (aj == 0.0)
                continue;
            constant += aj * map[j].offset;
            if (map[j].col_pos >= 0)
                y[map[j].col_pos] += aj * map[j].scale;
            if (map[j].col_neg >= 0)
                y[map[j].col_neg] -= aj;
        }
        return y;
    };

    for (const auto& row : lp.rows)
    {
        double constant = 0.0;
        StdRow sr{expand(row.coeffs, constant), row.sense, row.bound};
        sr.rhs -= constant;
        rows.push_back(std::move(sr));
    }
    for (std::size_t col : box_rows)
    {
        StdRow sr{std::vector<double>(ycols, 0.0), RowSense::less_equal, 1.0};
        sr.a[col] = 1.0;
        rows.push_back(std::move(sr));
    }

    // Equilibrate, drop empty rows, make every rhs nonnegative.
    std::vector<StdRow> kept;
    for (auto& sr : rows)
    {
        double amax = 0.0;
        for (double v : sr.a)
            amax = std::max(amax, std::abs(v));
        if (amax == 0.0)
        {
            const double tol = 1e-11 * (1.0 + std::abs(sr.rhs));
            const bool ok = (sr.sense == RowSense::less_equal && sr.rhs >= -tol) ||
                            (sr.sense == RowSense::greater_equal && sr.rhs <= tol) ||
                            (sr.sense == RowSense::equal && std::abs(sr.rhs) <= tol);
            if (!ok)
                return result;
            continue;
        }
        for (double& v : sr.a)
            v /= amax;
        sr.rhs /= amax;
        if (sr.rhs < 0.0)
        {
            for (double& v : sr.a)
                v = -v;
            sr.rhs = -sr.rhs;
            if (sr.sense == RowSense::less_equal)
                sr.sense = RowSense::greater_equal;
            else if (sr.sense == RowSense::greater_equal)
                sr.sense = RowSense::less_equal;
        }
        kept.push_back(std::move(sr));
    }

    double obj_const = 0.0;
    std::vector<double> cy = expand(lp.objective, obj_const);
    double cmax = 0.0;
    for (double v : cy)
        cmax = std::max(cmax, std::abs(v));
    const double cscale = cmax > 0.0 ? 1.0 / cmax : 1.0;

    const std::size_t m = kept.size();
    std::size_t n_slack = 0, n_art = 0;
    for (const auto& sr : kept)
    {
        if (sr.sense != RowSense::equal)
            ++n_slack;
        if (sr.sense != RowSense::less_equal)
            ++n_art;
    }
    const std::size_t cols = ycols + n_slack + n_art;
    Tableau tab(m, cols);
    std::vector<bool> is_art(cols, false);
    {
        std::size_t s = ycols, a = ycols + n_slack;
        for (std::size_t r = 0; r < m; ++r)
        {
            const auto& sr = kept[r];
            for (std::size_t c = 0; c < ycols; ++c)
                tab.at(r, c) = sr.a[c];
            tab.rhs(r) = sr.rhs;
            if (sr.sense == RowSense::less_equal)
            {
                tab.at(r, s) = 1.0;
                tab.basis()[r] = s++;
            }
            else
            {
                if (sr.sense == RowSense::greater_equal)
                    tab.at(r, s++) = -1.0;
                tab.at(r, a) = 1.0;
                is_art[a] = true;
                tab.basis()[r] = a++;
            }
        }
    }

    int budget = 20000;
    std::vector<bool> allowed(cols, true);

    if (n_art > 0)
    {
        std::vector<double> cost1(cols, 0.0);
        for (std::size_t c = 0; c < cols; ++c)
            if (is_art[c])
                cost1[c] = -1.0;
        std::vector<double> d = reduced_costs(tab, tab.basis(), cost1);
        const PhaseResult pr = run_simplex(tab, d, allowed, budget);
        if (pr == PhaseResult::iteration_limit)
        {
            result.status = LpStatus::iteration_limit;
            return result;
        }
        double infeas = 0.0, rhs_scale = 1.0;
        for (std::size_t r = 0; r < m; ++r)
        {
            rhs_scale = std::max(rhs_scale, std::abs(kept[r].rhs));
            if (is_art[tab.basis()[r]])
                infeas += std::max(tab.rhs(r), 0.0);
        }
        if (infeas > 1e-9 * rhs_scale)
            return result;

        // Drive zero-level artificials out of the basis where possible.
        for (std::size_t r = 0; r < m; ++r)
        {
            if (!is_art[tab.basis()[r]])
                continue;
            for (std::size_t c = 0; c < cols; ++c)
            {
                if (!is_art[c] && std::abs(tab.at(r, c)) > 1e-9)
                {
                    tab.pivot(r, c, d);
                    break;
                }
            }
        }
        for (std::size_t c = 0; c < cols; ++c)
            if (is_art[c])
                allowed[c] = false;
    }

    std::vector<double> cost2(cols, 0.0);
    for (std::size_t c = 0; c < ycols; ++c)
        cost2[c] = cy[c] * cscale;
    std::vector<double> d = reduced_costs(tab, tab.basis(), cost2);
    const PhaseResult pr = run_simplex(tab, d, allowed, budget);
    if (pr == PhaseResult::iteration_limit)
    {
        result.status = LpStatus::iteration_limit;
        return result;
    }
    if (pr == PhaseResult::unbounded)
    {
        result.status = LpStatus::unbounded;
        return result;
    }

    std::vector<double> y(cols, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        y[tab.basis()[r]] = std::max(tab.rhs(r), 0.0);

    result.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
    {
        double v = map[j].offset;
        if (map[j].col_pos >= 0)
            v += map[j].scale * y[map[j].col_pos];
        if (map[j].col_neg >= 0)
            v -= y[map[j].col_neg];
        // Clip rounding excursions back into the box.
        result.x[j] = std::clamp(v, lp.lower[j], lp.upper[j]);
    }
    result.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        result.objective += lp.objective[j] * result.x[j];
    result.status = LpStatus::optimal;
    return result;
}

double lp_max_violation(const LinearProgram& lp, const std::vector<double>& x)
{
    double worst = 0.0;
    for (const auto& row : lp.rows)
    {
        double ax = 0.0;
        for (std::size_t j = 0; j < row.coeffs.size(); ++j)
            ax += row.coeffs[j] * x[j];
        switch (row.sense)
        {
        case RowSense::less_equal:
            worst = std::max(worst, ax - row.bound);
            break;
        case RowSense::greater_equal:
            worst = std::max(worst, row.bound - ax);
            break;
        case RowSense::equal:
            worst = std::max(worst, std::abs(ax - row.bound));
            break;
        }
    }
    for (std::size_t j = 0; j < x.size(); ++j)
    {
        worst = std::max(worst, lp.lower[j] - x[j]);
        worst = std::max(worst, x[j] - lp.upper[j]);
    }
    return worst;
}

} // namespace pinch
