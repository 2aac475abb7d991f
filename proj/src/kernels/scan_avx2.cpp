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

#include <immintrin.h>

namespace pinch::kernels::detail
{

ScanBest scan_row_avx2(const PairScanParams& p, std::size_t begin, std::size_t end)
{
    ScanBest best;
    if (end <= begin)
        return best;

    const __m256d apr = _mm256_set1_pd(p.anchor_p_re);
    const __m256d api = _mm256_set1_pd(p.anchor_p_im);
    const __m256d asr = _mm256_set1_pd(p.anchor_s_re);
    const __m256d asi = _mm256_set1_pd(p.anchor_s_im);
    const __m256d power = _mm256_set1_pd(p.power);
    const __m256d np_g = _mm256_set1_pd(p.noise_p * p.gamma);
    const __m256d ns_g = _mm256_set1_pd(p.noise_s * p.gamma);
    const __m256d one_g = _mm256_set1_pd(1.0 + p.gamma);
    const __m256d noise_s = _mm256_set1_pd(p.noise_s);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d minus_one = _mm256_set1_pd(-1.0);
    const __m256d four = _mm256_set1_pd(4.0);

    __m256d best_score = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    __m256d best_idx = _mm256_set1_pd(-1.0);
    __m256d idx = _mm256_setr_pd(static_cast<double>(begin), static_cast<double>(begin + 1),
                                 static_cast<double>(begin + 2), static_cast<double>(begin + 3));

    std::size_t j = begin;
    for (; j + 4 <= end; j += 4)
    {
        const __m256d pr = _mm256_add_pd(apr, _mm256_loadu_pd(p.p_re + j));
        const __m256d pi = _mm256_add_pd(api, _mm256_loadu_pd(p.p_im + j));
        const __m256d sr = _mm256_add_pd(asr, _mm256_loadu_pd(p.s_re + j));
        const __m256d si = _mm256_add_pd(asi, _mm256_loadu_pd(p.s_im + j));
        const __m256d gp = _mm256_mul_pd(power, _mm256_add_pd(_mm256_mul_pd(pr, pr), _mm256_mul_pd(pi, pi)));
        const __m256d gs = _mm256_mul_pd(power, _mm256_add_pd(_mm256_mul_pd(sr, sr), _mm256_mul_pd(si, si)));
        const __m256d cap_p = _mm256_div_pd(_mm256_sub_pd(gp, np_g), _mm256_mul_pd(gp, one_g));
        const __m256d cap_s = _mm256_div_pd(_mm256_sub_pd(gs, ns_g), _mm256_mul_pd(gs, one_g));
        // Same select as the scalar `cap_p < cap_s ? cap_p : cap_s`.
        const __m256d a = _mm256_blendv_pd(cap_s, cap_p, _mm256_cmp_pd(cap_p, cap_s, _CMP_LT_OQ));
        const __m256d snr = _mm256_div_pd(_mm256_mul_pd(a, gs), noise_s);
        const __m256d score = _mm256_blendv_pd(minus_one, snr, _mm256_cmp_pd(a, zero, _CMP_GE_OQ));

        const __m256d better = _mm256_cmp_pd(score, best_score, _CMP_GT_OQ);
        best_score = _mm256_blendv_pd(best_score, score, better);
        best_idx = _mm256_blendv_pd(best_idx, idx, better);
        idx = _mm256_add_pd(idx, four);
    }

    alignas(32) double lane_score[4];
    alignas(32) double lane_idx[4];
    _mm256_store_pd(lane_score, best_score);
    _mm256_store_pd(lane_idx, best_idx);
    for (int l = 0; l < 4; ++l)
    {
        if (lane_idx[l] < 0.0)
            continue;
        const auto li = static_cast<std::size_t>(lane_idx[l]);
        if (lane_score[l] > best.score || (lane_score[l] == best.score && li < best.index))
        {
            best.score = lane_score[l];
            best.index = li;
        }
    }

    for (; j < end; ++j)
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

} // namespace pinch::kernels::detail
