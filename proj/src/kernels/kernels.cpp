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

#include "pag/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace pag::kernels {

namespace {

constexpr Backend kScalarBackend = {
    "scalar", scalar::dot, scalar::l2sqr, scalar::max, scalar::accumulate, scalar::mix,
};

#if defined(PAG_HAVE_AVX2)
constexpr Backend kAvx2Backend = {
    "avx2", avx2::dot, avx2::l2sqr, avx2::max, avx2::accumulate, avx2::mix,
};

bool cpu_has_avx2() {
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}
#endif

#if defined(PAG_HAVE_NEON)
constexpr Backend kNeonBackend = {
    "neon", neon::dot, neon::l2sqr, neon::max, neon::accumulate, neon::mix,
};
#endif

std::vector<const Backend*> detect_available() {
    std::vector<const Backend*> list;
    list.push_back(&kScalarBackend);
#if defined(PAG_HAVE_AVX2)
    if (cpu_has_avx2()) {
        list.push_back(&kAvx2Backend);
    }
#endif
#if defined(PAG_HAVE_NEON)
    list.push_back(&kNeonBackend);
#endif
    return list;
}

const Backend* select_active(const std::vector<const Backend*>& list) {
    if (const char* env = std::getenv("PAG_KERNELS")) {
        for (const Backend* b : list) {
            if (std::strcmp(b->name, env) == 0) {
                return b;
            }
        }
        // Unknown or unavailable name: fall through to the default choice.
    }
    return list.back();
}

}  // namespace

const std::vector<const Backend*>& available() {
    static const std::vector<const Backend*> list = detect_available();
    return list;
}

const Backend& active() {
    static const Backend* chosen = select_active(available());
    return *chosen;
}

}  // namespace pag::kernels
