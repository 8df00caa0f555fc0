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

// NEON (aarch64) kernels. Lane j of the canonical eight-lane accumulation
// lives in register j/2, element j%2. Tails are zero-padded like the AVX2
// backend.

#include "pag/kernels.hpp"

#if defined(PAG_HAVE_NEON)

#include <arm_neon.h>

#include <cstring>

namespace pag::kernels::neon {

namespace {

inline double combine8(float64x2_t a01, float64x2_t a23, float64x2_t a45, float64x2_t a67) {
    const double l0 = vgetq_lane_f64(a01, 0), l1 = vgetq_lane_f64(a01, 1);
    const double l2 = vgetq_lane_f64(a23, 0), l3 = vgetq_lane_f64(a23, 1);
    const double l4 = vgetq_lane_f64(a45, 0), l5 = vgetq_lane_f64(a45, 1);
    const double l6 = vgetq_lane_f64(a67, 0), l7 = vgetq_lane_f64(a67, 1);
    return ((l0 + l1) + (l2 + l3)) + ((l4 + l5) + (l6 + l7));
}

}  // namespace

double dot(const float* a, const float* b, std::size_t n) {
    float64x2_t acc01 = vdupq_n_f64(0), acc23 = vdupq_n_f64(0);
    float64x2_t acc45 = vdupq_n_f64(0), acc67 = vdupq_n_f64(0);
    std::size_t i = 0;
    auto step = [&](const float* pa, const float* pb) {
        const float32x4_t alo = vld1q_f32(pa), ahi = vld1q_f32(pa + 4);
        const float32x4_t blo = vld1q_f32(pb), bhi = vld1q_f32(pb + 4);
        acc01 = vaddq_f64(acc01, vmulq_f64(vcvt_f64_f32(vget_low_f32(alo)),
                                           vcvt_f64_f32(vget_low_f32(blo))));
        acc23 = vaddq_f64(acc23, vmulq_f64(vcvt_f64_f32(vget_high_f32(alo)),
                                           vcvt_f64_f32(vget_high_f32(blo))));
        acc45 = vaddq_f64(acc45, vmulq_f64(vcvt_f64_f32(vget_low_f32(ahi)),
                                           vcvt_f64_f32(vget_low_f32(bhi))));
        acc67 = vaddq_f64(acc67, vmulq_f64(vcvt_f64_f32(vget_high_f32(ahi)),
                                           vcvt_f64_f32(vget_high_f32(bhi))));
    };
    for (; i + 8 <= n; i += 8) {
        step(a + i, b + i);
    }
    if (i < n) {
        float ta[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        float tb[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        std::memcpy(ta, a + i, (n - i) * sizeof(float));
        std::memcpy(tb, b + i, (n - i) * sizeof(float));
        step(ta, tb);
    }
    return combine8(acc01, acc23, acc45, acc67);
}

double l2sqr(const float* a, const float* b, std::size_t n) {
    float64x2_t acc01 = vdupq_n_f64(0), acc23 = vdupq_n_f64(0);
    float64x2_t acc45 = vdupq_n_f64(0), acc67 = vdupq_n_f64(0);
    std::size_t i = 0;
    auto step = [&](const float* pa, const float* pb) {
        const float32x4_t alo = vld1q_f32(pa), ahi = vld1q_f32(pa + 4);
        const float32x4_t blo = vld1q_f32(pb), bhi = vld1q_f32(pb + 4);
        const float64x2_t d01 = vsubq_f64(vcvt_f64_f32(vget_low_f32(alo)),
                                          vcvt_f64_f32(vget_low_f32(blo)));
        const float64x2_t d23 = vsubq_f64(vcvt_f64_f32(vget_high_f32(alo)),
                                          vcvt_f64_f32(vget_high_f32(blo)));
        const float64x2_t d45 = vsubq_f64(vcvt_f64_f32(vget_low_f32(ahi)),
                                          vcvt_f64_f32(vget_low_f32(bhi)));
        const float64x2_t d67 = vsubq_f64(vcvt_f64_f32(vget_high_f32(ahi)),
                                          vcvt_f64_f32(vget_high_f32(bhi)));
        acc01 = vaddq_f64(acc01, vmulq_f64(d01, d01));
        acc23 = vaddq_f64(acc23, vmulq_f64(d23, d23));
        acc45 = vaddq_f64(acc45, vmulq_f64(d45, d45));
        acc67 = vaddq_f64(acc67, vmulq_f64(d67, d67));
    };
    for (; i + 8 <= n; i += 8) {
        step(a + i, b + i);
    }
    if (i < n) {
        float ta[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        float tb[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        std::memcpy(ta, a + i, (n - i) * sizeof(float));
        std::memcpy(tb, b + i, (n - i) * sizeof(float));
        step(ta, tb);
    }
    return combine8(acc01, acc23, acc45, acc67);
}

float max(const float* x, std::size_t n) {
    std::size_t i = 0;
    float best = x[0];
    if (n >= 4) {
        float32x4_t acc = vld1q_f32(x);
        for (i = 4; i + 4 <= n; i += 4) {
            acc = vmaxq_f32(acc, vld1q_f32(x + i));
        }
        best = vmaxvq_f32(acc);
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
        const float32x4_t xv = vld1q_f32(x + i);
        vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vcvt_f64_f32(vget_low_f32(xv))));
        vst1q_f64(acc + i + 2,
                  vaddq_f64(vld1q_f64(acc + i + 2), vcvt_f64_f32(vget_high_f32(xv))));
    }
    for (; i < n; ++i) {
        acc[i] += static_cast<double>(x[i]);
    }
}

void mix(const float* base, const double* m, double scale, float* out, std::size_t n) {
    const float64x2_t sv = vdupq_n_f64(scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float32x4_t bv = vld1q_f32(base + i);
        const float64x2_t lo =
            vaddq_f64(vcvt_f64_f32(vget_low_f32(bv)), vmulq_f64(sv, vld1q_f64(m + i)));
        const float64x2_t hi =
            vaddq_f64(vcvt_f64_f32(vget_high_f32(bv)), vmulq_f64(sv, vld1q_f64(m + i + 2)));
        vst1q_f32(out + i, vcombine_f32(vcvt_f32_f64(lo), vcvt_f32_f64(hi)));
    }
    for (; i < n; ++i) {
        out[i] = static_cast<float>(static_cast<double>(base[i]) + scale * m[i]);
    }
}

}  // namespace pag::kernels::neon

#endif  // PAG_HAVE_NEON
