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

#ifndef PINCH_LP_HPP
#define PINCH_LP_HPP

// Small dense linear programs: maximize c'x subject to row constraints and
// per-variable bounds. Sized for the position subproblems (tens of
// variables), not for general use.

#include <cstddef>
#include <limits>
#include <vector>

namespace pinch
{

inline constexpr double lp_infinity = std::numeric_limits<double>::infinity();

enum class RowSense
{
    less_equal,
    greater_equal,
    equal
};

struct LpRow
{
    std::vector<double> coeffs;
    RowSense sense = RowSense::less_equal;
    double bound = 0.0;
};

struct LinearProgram
{
    std::vector<double> objective; // maximized
    std::vector<LpRow> rows;
    std::vector<double> lower;     // -lp_infinity allowed
    std::vector<double> upper;     // +lp_infinity allowed

    std::size_t num_vars() const { return objective.size(); }

    // New variable with bounds; returns its index. Existing rows are padded.
    std::size_t add_variable(double lo, double hi, double cost = 0.0);
    void add_row(std::vector<double> coeffs, RowSense sense, double bound);
};

enum class LpStatus
{
    optimal,
    infeasible,
    unbounded,
    iteration_limit
};

const char* to_string(LpStatus s);

struct LpResult
{
    LpStatus status = LpStatus::infeasible;
    std::vector<double> x;
    double objective = 0.0;
};

// Two-phase primal simplex on a dense tableau with Bland's rule. Bounds are
// folded in by substitution and rows are equilibrated before pivoting, so
// badly scaled inputs (coefficients around 1e-7) are fine.
LpResult solve_lp(const LinearProgram& lp);

// Largest violation of any row or bound at x (0 when feasible).
double lp_max_violation(const LinearProgram& lp, const std::vector<double>& x);

} // namespace pinch

#endif
