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

#include <cstdint>
#include <span>
#include <vector>

#include "pag/types.hpp"

namespace pag {

/// Per-position token embedding tables for sequential DocIDs.
/// Storage is flat, level-major / code-major / dim-minor, matching the
/// on-disk codebook layout.
struct CodebookSet {
    std::uint32_t levels = 0;         // L
    std::uint32_t codebook_size = 0;  // V
    std::uint32_t dim = 0;            // D
    std::vector<float> tables;        // levels * codebook_size * dim

    CodebookSet() = default;
    CodebookSet(std::uint32_t L, std::uint32_t V, std::uint32_t D)
        : levels(L),
          codebook_size(V),
          dim(D),
          tables(static_cast<std::size_t>(L) * V * D, 0.0f) {}

    std::span<const float> row(std::size_t level, std::size_t code) const {
        return {tables.data() + (level * codebook_size + code) * dim, dim};
    }
    std::span<float> row_mut(std::size_t level, std::size_t code) {
        return {tables.data() + (level * codebook_size + code) * dim, dim};
    }

    /// Throws ValidationError on inconsistent shape or non-finite values.
    void validate() const;
};

struct RqTrainParams {
    std::uint32_t levels = 8;
    std::uint32_t codebook_size = 2048;
    std::uint32_t kmeans_iters = 20;
    std::uint64_t seed = 0;
};

/// Trains residual-quantization codebooks level by level: level i runs
/// k-means with V centroids on the residuals left after levels < i.
/// Deterministic given the seed. Requires N >= V training vectors.
CodebookSet rq_train(std::span<const float> vectors, std::size_t count, std::size_t dim,
                     const RqTrainParams& params);

/// Greedy residual assignment: at each level, pick the centroid minimizing
/// the squared residual norm; ties break to the lowest code index.
SequentialDocId rq_encode(std::span<const float> vec, const CodebookSet& cb);

/// Sum of the selected codewords, accumulated elementwise in double and
/// rounded to float once at the end.
DenseVector rq_reconstruct(const SequentialDocId& id, const CodebookSet& cb);

/// Double-precision reconstruction, for exact score identities.
std::vector<double> rq_reconstruct_f64(const SequentialDocId& id, const CodebookSet& cb);

/// Encodes every document and resolves colliding code sequences by
/// reassigning the final-position code of all but the lowest-ordinal
/// collider to the next-nearest centroid (increasing reconstruction error,
/// ties to the lower code) until all DocIDs are distinct.
std::vector<SequentialDocId> assign_unique_docids(std::span<const float> vectors,
                                                  std::size_t count, const CodebookSet& cb);

namespace detail {
/// Squared norm of the residual of `vec` after subtracting the codewords of
/// `id` up to `prefix_levels`. Exposed for tests measuring per-level error.
double residual_sqnorm(std::span<const float> vec, const SequentialDocId& id,
                       const CodebookSet& cb, std::size_t prefix_levels);
}  // namespace detail

}  // namespace pag
