// Copyright 2026-present the pagdec project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AVX2 kernels. Compiled with -mavx2; only dispatched on CPUs that have it.
// Lanes 0..3 live in the low __m256d accumulator, lanes 4..7 in the high
// one, matching the scalar lane layout. Tails are zero-padded into a full
// eight-float block; the padding contributes +0.0 per lane, which cannot
// change any partial sum (lane sums never reach -0.0 from a +0.0 start).

#include "pag/kernels.hpp"

#if defined(PAG_HAVE_AVX2)

#include <immintrin.h>

#include <cstring>

namespace pag::kernels::avx2 {

namespace {

inline double combine8(__m256d lo, __m256d hi) {
    alignas(32) double l[8];
    _mm256_store_pd(l, lo);
    _mm256_store_pd(l + 4, hi);
    return ((l[0] + l[1]) + (l[2] + l[3])) + ((l[4] + l[5]) + (l[6] + l[7]));
}

}  // namespace

double dot(const float* a, const float* b, std::size_t n) {
    __m256d acc_lo = _mm256_setzero_pd();
    __m256d acc_hi = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 av = _mm256_loadu_ps(a + i);
        const __m256 bv = _mm256_loadu_ps(b + i);
        const __m256d a_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(av));
        const __m256d a_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(av, 1));
        const __m256d b_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(bv));
        const __m256d b_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(bv, 1));
        acc_lo = _mm256_add_pd(acc_lo, _mm256_mul_pd(a_lo, b_lo));
        acc_hi = _mm256_add_pd(acc_hi, _mm256_mul_pd(a_hi, b_hi));
    }
    if (i < n) {
        alignas(32) float ta[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        alignas(32) float tb[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        std::memcpy(ta, a + i, (n - i) * sizeof(float));
        std::memcpy(tb, b + i, (n - i) * sizeof(float));
        const __m256 av = _mm256_load_ps(ta);
        const __m256 bv = _mm256_load_ps(tb);
        const __m256d a_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(av));
        const __m256d a_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(av, 1));
        const __m256d b_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(bv));
        const __m256d b_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(bv, 1));
        acc_lo = _mm256_add_pd(acc_lo, _mm256_mul_pd(a_lo, b_lo));
        acc_hi = _mm256_add_pd(acc_hi, _mm256_mul_pd(a_hi, b_hi));
    }
    return combine8(acc_lo, acc_hi);
}

double l2sqr(const float* a, const float* b, std::size_t n) {
    __m256d acc_lo = _mm256_setzero_pd();
    __m256d acc_hi = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 av = _mm256_loadu_ps(a + i);
        const __m256 bv = _mm256_loadu_ps(b + i);
        const __m256d d_lo = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(av)),
                                           _mm256_cvtps_pd(_mm256_castps256_ps128(bv)));
        const __m256d d_hi = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(av, 1)),
                                           _mm256_cvtps_pd(_mm256_extractf128_ps(bv, 1)));
        acc_lo = _mm256_add_pd(acc_lo, _mm256_mul_pd(d_lo, d_lo));
        acc_hi = _mm256_add_pd(acc_hi, _mm256_mul_pd(d_hi, d_hi));
    }
    if (i < n) {
        alignas(32) float ta[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        alignas(32) float tb[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        std::memcpy(ta, a + i, (n - i) * sizeof(float));
        std::memcpy(tb, b + i, (n - i) * sizeof(float));
        const __m256 av = _mm256_load_ps(ta);
        const __m256 bv = _mm256_load_ps(tb);
        const __m256d d_lo = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(av)),
                                           _mm256_cvtps_pd(_mm256_castps256_ps128(bv)));
        const __m256d d_hi = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(av, 1)),
                                           _mm256_cvtps_pd(_mm256_extractf128_ps(bv, 1)));
        acc_lo = _mm256_add_pd(acc_lo, _mm256_mul_pd(d_lo, d_lo));
        acc_hi = _mm256_add_pd(acc_hi, _mm256_mul_pd(d_hi, d_hi));
    }
    return combine8(acc_lo, acc_hi);
}

float max(const float* x, std::size_t n) {
    std::size_t i = 0;
    float best = x[0];
    if (n >= 8) {
        __m256 acc = _mm256_loadu_ps(x);
        for (i = 8; i + 8 <= n; i += 8) {
            acc = _mm256_max_ps(acc, _mm256_loadu_ps(x + i));
        }
        alignas(32) float lanes[8];
        _mm256_store_ps(lanes, acc);
        best = lanes[0];
        for (std::size_t j = 1; j < 8; ++j) {
            if (lanes[j] > best) {
                best = lanes[j];
            }
        }
    }
    for (; i < n; ++i) {
        if (x[i] > best) {
            best = x[i];
        }
    }
    return best;
}

void accumulate(double* acc, const float* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_cvtps_pd(_mm_loadu_ps(x + i));
        _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), xv));
    }
    for (; i < n; ++i) {
        acc[i] += static_cast<double>(x[i]);
    }
}

void mix(const float* base, const double* m, double scale, float* out, std::size_t n) {
    const __m256d sv = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d bv = _mm256_cvtps_pd(_mm_loadu_ps(base + i));
        const __m256d mv = _mm256_loadu_pd(m + i);
        const __m256d r = _mm256_add_pd(bv, _mm256_mul_pd(sv, mv));
        _mm_storeu_ps(out + i, _mm256_cvtpd_ps(r));
    }
    for (; i < n; ++i) {
        out[i] = static_cast<float>(static_cast<double>(base[i]) + scale * m[i]);
    }
}

}  // namespace pag::kernels::avx2

#endif  // PAG_HAVE_AVX2
