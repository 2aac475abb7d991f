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

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace pinch::kernels
{

namespace
{

Isa detect()
{
#if defined(PINCH_HAVE_AVX2_KERNEL) && (defined(__GNUC__) || defined(__clang__))
    if (const char* env = std::getenv("PINCH_FORCE_SCALAR"); env != nullptr && std::strcmp(env, "0") != 0)
        return Isa::scalar;
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2"))
        return Isa::avx2;
#endif
    return Isa::scalar;
}

std::atomic<int> forced{-1};

} // namespace

const char* to_string(Isa isa)
{
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool isa_available(Isa isa)
{
    if (isa == Isa::scalar)
        return true;
#if defined(PINCH_HAVE_AVX2_KERNEL) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa active_isa()
{
    static const Isa detected = detect();
    const int f = forced.load(std::memory_order_relaxed);
    return f >= 0 ? static_cast<Isa>(f) : detected;
}

void force_isa(Isa isa)
{
    if (!isa_available(isa))
        throw std::invalid_argument(std::string("ISA not available on this CPU: ") + to_string(isa));
    forced.store(static_cast<int>(isa), std::memory_order_relaxed);
}

void reset_isa()
{
    forced.store(-1, std::memory_order_relaxed);
}

ScanBest scan_row(Isa isa, const PairScanParams& p, std::size_t begin, std::size_t end)
{
#if defined(PINCH_HAVE_AVX2_KERNEL)
    if (isa == Isa::avx2)
        return detail::scan_row_avx2(p, begin, end);
#endif
    (void)isa;
    return detail::scan_row_scalar(p, begin, end);
}

} // namespace pinch::kernels
