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

#include "pinch/kernels.hpp"

namespace pinch::kernels
{

double pair_score(const PairScanParams& p, std::size_t j)
{
    const double np_g = p.noise_p * p.gamma;
    const double ns_g = p.noise_s * p.gamma;
    const double one_g = 1.0 + p.gamma;

    const double pr = p.anchor_p_re + p.p_re[j];
    const double pi = p.anchor_p_im + p.p_im[j];
    const double sr = p.anchor_s_re + p.s_re[j];
    const double si = p.anchor_s_im + p.s_im[j];
    const double gp = p.power * (pr * pr + pi * pi);
    const double gs = p.power * (sr * sr + si * si);
    const double cap_p = (gp - np_g) / (gp * one_g);
    const double cap_s = (gs - ns_g) / (gs * one_g);
    const double a = cap_p < cap_s ? cap_p : cap_s;
    return a >= 0.0 ? (a * gs) / p.noise_s : -1.0;
}

namespace detail
{

ScanBest scan_row_scalar(const PairScanParams& p, std::size_t begin, std::size_t end)
{
    ScanBest best;
    for (std::size_t j = begin; j < end; ++j)
    {
        const double score = pair_score(p, j);
        if (score > best.score)
        {
            best.score = score;
            best.index = j;
        }
    }
    return best;
}

} // namespace detail

} // namespace pinch::kernels
