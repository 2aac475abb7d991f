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

#ifndef PINCH_KERNELS_HPP
#define PINCH_KERNELS_HPP

// Data-parallel inner loop of the exhaustive position search. Every grid
// point j carries its precomputed channel terms for both users; the kernel
// adds a fixed "anchor" term (the other antennas of the layout), applies the
// closed-form power split and returns the best secondary SNR over a range.
//
// The scalar kernel is the reference. Vector kernels use the same operation
// order without contraction, so their results are bit-identical to it.

#include <cstddef>
#include <limits>

namespace pinch::kernels
{

enum class Isa
{
    scalar,
    avx2
};

const char* to_string(Isa isa);

struct PairScanParams
{
    const double* p_re = nullptr; // primary term, real part, per grid point
    const double* p_im = nullptr;
    const double* s_re = nullptr; // secondary term
    const double* s_im = nullptr;
    double anchor_p_re = 0.0, anchor_p_im = 0.0;
    double anchor_s_re = 0.0, anchor_s_im = 0.0;
    double power = 1.0;          // P
    double noise_p = 1.0;        // N * sigma_p^2
    double noise_s = 1.0;        // N * sigma_s^2
    double gamma = 0.1;          // primary SINR target
};

inline constexpr std::size_t no_index = std::numeric_limits<std::size_t>::max();

// score = -1 marks "no QoS-feasible point seen".
struct ScanBest
{
    double score = -std::numeric_limits<double>::infinity();
    std::size_t index = no_index;
};

// Secondary SNR at one grid point, or -1 if the QoS targets cannot be met.
double pair_score(const PairScanParams& p, std::size_t j);

// Best score over [begin, end); ties resolve to the lowest index.
ScanBest scan_row(Isa isa, const PairScanParams& p, std::size_t begin, std::size_t end);

// Fastest kernel the running CPU supports, unless overridden.
Isa active_isa();
bool isa_available(Isa isa);

// Pins the kernel choice process-wide (tests, benchmarking). Throws
// std::invalid_argument if the CPU lacks the requested ISA.
void force_isa(Isa isa);
void reset_isa();

namespace detail
{
ScanBest scan_row_scalar(const PairScanParams& p, std::size_t begin, std::size_t end);
#if defined(PINCH_HAVE_AVX2_KERNEL)
ScanBest scan_row_avx2(const PairScanParams& p, std::size_t begin, std::size_t end);
#endif
} // namespace detail

} // namespace pinch::kernels

#endif
