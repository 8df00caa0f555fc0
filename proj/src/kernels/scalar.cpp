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

// Reference kernels. These define the canonical eight-lane accumulation
// order; the SIMD backends must reproduce it bit-for-bit.

#include "pag/kernels.hpp"

namespace pag::kernels::scalar {

namespace {

inline double combine8(const double* l) {
    return ((l[0] + l[1]) + (l[2] + l[3])) + ((l[4] + l[5]) + (l[6] + l[7]));
}

}  // namespace

double dot(const float* a, const float* b, std::size_t n) {
    double lane[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        for (std::size_t j = 0; j < 8; ++j) {
            lane[j] += static_cast<double>(a[i + j]) * static_cast<double>(b[i + j]);
        }
    }
    for (; i < n; ++i) {
        lane[i % 8] += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    }
    return combine8(lane);
}

double l2sqr(const float* a, const float* b, std::size_t n) {
    double lane[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        for (std::size_t j = 0; j < 8; ++j) {
            const double d = static_cast<double>(a[i + j]) - static_cast<double>(b[i + j]);
            lane[j] += d * d;
        }
    }
    for (; i < n; ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        lane[i % 8] += d * d;
    }
    return combine8(lane);
}

float max(const float* x, std::size_t n) {
    float best = x[0];
    for (std::size_t i = 1; i < n; ++i) {
        if (x[i] > best) {
            best = x[i];
        }
    }
    return best;
}

void accumulate(double* acc, const float* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        acc[i] += static_cast<double>(x[i]);
    }
}

void mix(const float* base, const double* m, double scale, float* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<float>(static_cast<double>(base[i]) + scale * m[i]);
    }
}

}  // namespace pag::kernels::scalar
