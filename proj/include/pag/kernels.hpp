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

#pragma once

#include <cstddef>
#include <vector>

namespace pag::kernels {

// Reduction kernels accumulate in double precision across eight interleaved
// lanes (element i feeds lane i % 8) and combine the lanes as
//   ((l0+l1) + (l2+l3)) + ((l4+l5) + (l6+l7)).
// Every backend implements exactly this order, so kernel results are
// bit-identical across scalar, AVX2 and NEON builds. Elementwise kernels are
// trivially order-free. Higher layers rely on this for exact cross-route
// score equalities; never change the order in one backend only.

using DotFn = double (*)(const float*, const float*, std::size_t);
using L2SqrFn = double (*)(const float*, const float*, std::size_t);
using MaxFn = float (*)(const float*, std::size_t);
// acc[i] += x[i]
using AccumulateFn = void (*)(double*, const float*, std::size_t);
// out[i] = float(base[i] + scale * mix[i])
using MixFn = void (*)(const float*, const double*, double, float*, std::size_t);

struct Backend {
    const char* name;
    DotFn dot;
    L2SqrFn l2sqr;
    MaxFn max;
    AccumulateFn accumulate;
    MixFn mix;
};

/// Backend selected at startup: best available ISA, overridable with
/// PAG_KERNELS=scalar|avx2|neon.
const Backend& active();

/// All backends usable on this machine (scalar always included).
const std::vector<const Backend*>& available();

namespace scalar {
double dot(const float* a, const float* b, std::size_t n);
double l2sqr(const float* a, const float* b, std::size_t n);
float max(const float* x, std::size_t n);
void accumulate(double* acc, const float* x, std::size_t n);
void mix(const float* base, const double* m, double scale, float* out, std::size_t n);
}  // namespace scalar

#if defined(PAG_HAVE_AVX2)
namespace avx2 {
double dot(const float* a, const float* b, std::size_t n);
double l2sqr(const float* a, const float* b, std::size_t n);
float max(const float* x, std::size_t n);
void accumulate(double* acc, const float* x, std::size_t n);
void mix(const float* base, const double* m, double scale, float* out, std::size_t n);
}  // namespace avx2
#endif

#if defined(PAG_HAVE_NEON)
namespace neon {
double dot(const float* a, const float* b, std::size_t n);
double l2sqr(const float* a, const float* b, std::size_t n);
float max(const float* x, std::size_t n);
void accumulate(double* acc, const float* x, std::size_t n);
void mix(const float* base, const double* m, double scale, float* out, std::size_t n);
}  // namespace neon
#endif

inline double dot(const float* a, const float* b, std::size_t n) {
    return active().dot(a, b, n);
}
inline double l2sqr(const float* a, const float* b, std::size_t n) {
    return active().l2sqr(a, b, n);
}
inline float max(const float* x, std::size_t n) {
    return active().max(x, n);
}
inline void accumulate(double* acc, const float* x, std::size_t n) {
    active().accumulate(acc, x, n);
}
inline void mix(const float* base, const double* m, double scale, float* out, std::size_t n) {
    active().mix(base, m, scale, out, n);
}

}  // namespace pag::kernels
