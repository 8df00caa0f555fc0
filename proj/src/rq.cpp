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

#include "pag/rq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "pag/kernels.hpp"
#include "pag/parallel.hpp"
#include "pag/rng.hpp"

namespace pag {

namespace {

struct SeqHash {
    std::size_t operator()(const SequentialDocId& id) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint32_t c : id) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

void check_finite(std::span<const float> values, const char* what) {
    for (float v : values) {
        if (!std::isfinite(v)) {
            throw ValidationError(std::string(what) + ": non-finite value");
        }
    }
}

/// Nearest centroid by squared distance, ties to the lowest code.
std::uint32_t nearest_centroid(const float* point, const float* centroids, std::size_t v,
                               std::size_t dim) {
    std::uint32_t best = 0;
    double best_d = kernels::l2sqr(point, centroids, dim);
    for (std::size_t c = 1; c < v; ++c) {
        const double d = kernels::l2sqr(point, centroids + c * dim, dim);
        if (d < best_d) {
            best_d = d;
            best = static_cast<std::uint32_t>(c);
        }
    }
    return best;
}

void assign_all(const std::vector<float>& points, std::size_t n, std::size_t dim,
                const std::vector<float>& centroids, std::size_t v,
                std::vector<std::uint32_t>& out) {
    parallel_for(n, 0, [&](std::size_t p) {
        out[p] = nearest_centroid(points.data() + p * dim, centroids.data(), v, dim);
    });
}

/// Mean update over the current assignment; point order is ascending, so the
/// result matches a sequential run regardless of assignment parallelism.
void update_centroids(const std::vector<float>& points, std::size_t n, std::size_t dim,
                      const std::vector<std::uint32_t>& assign, std::size_t v,
                      std::vector<float>& centroids, std::vector<std::size_t>& counts) {
    std::vector<double> sums(v * dim, 0.0);
    counts.assign(v, 0);
    for (std::size_t p = 0; p < n; ++p) {
        const std::uint32_t c = assign[p];
        kernels::accumulate(sums.data() + static_cast<std::size_t>(c) * dim,
                            points.data() + p * dim, dim);
        ++counts[c];
    }
    for (std::size_t c = 0; c < v; ++c) {
        if (counts[c] == 0) {
            continue;  // keep previous centroid
        }
        const double inv = 1.0 / static_cast<double>(counts[c]);
        for (std::size_t j = 0; j < dim; ++j) {
            centroids[c * dim + j] = static_cast<float>(sums[c * dim + j] * inv);
        }
    }
}

/// Re-seeds empty clusters from the largest one: the centroid is copied with
/// an alternating +-1/1024 per-dim perturbation and the donor gets the
/// opposite sign, so the pair separates on the next assignment.
void repair_empty(std::vector<float>& centroids, std::vector<std::size_t>& counts,
                  std::size_t v, std::size_t dim) {
    constexpr float kEps = 1.0f / 1024.0f;
    for (std::size_t e = 0; e < v; ++e) {
        if (counts[e] != 0) {
            continue;
        }
        std::size_t donor = 0;
        for (std::size_t c = 1; c < v; ++c) {
            if (counts[c] > counts[donor]) {
                donor = c;
            }
        }
        if (counts[donor] == 0) {
            break;  // no points at all; nothing to split
        }
        for (std::size_t j = 0; j < dim; ++j) {
            const float base = centroids[donor * dim + j];
            const float sign = (j % 2 == 0) ? kEps : -kEps;
            centroids[e * dim + j] = base * (1.0f + sign);
            centroids[donor * dim + j] = base * (1.0f - sign);
        }
        counts[e] = counts[donor] / 2;
        counts[donor] -= counts[e];
    }
}

/// Lloyd iterations from a seeded sample of V distinct points. Ends with a
/// clean assign+update pass (no repair), so final centroids are exact means
/// of their clusters and per-level error can only shrink.
std::vector<float> kmeans(const std::vector<float>& points, std::size_t n, std::size_t dim,
                          std::size_t v, std::uint32_t iters, Rng& rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < v; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.bounded(n - i));
        std::swap(order[i], order[j]);
    }
    std::vector<float> centroids(v * dim);
    for (std::size_t c = 0; c < v; ++c) {
        std::copy_n(points.data() + order[c] * dim, dim, centroids.data() + c * dim);
    }

    std::vector<std::uint32_t> assign(n);
    std::vector<std::size_t> counts(v);
    for (std::uint32_t it = 0; it < iters; ++it) {
        assign_all(points, n, dim, centroids, v, assign);
        update_centroids(points, n, dim, assign, v, centroids, counts);
        repair_empty(centroids, counts, v, dim);
    }
    assign_all(points, n, dim, centroids, v, assign);
    update_centroids(points, n, dim, assign, v, centroids, counts);
    return centroids;
}

}  // namespace

void CodebookSet::validate() const {
    if (levels == 0 || codebook_size == 0 || dim == 0) {
        throw ValidationError("codebooks: empty shape");
    }
    if (tables.size() != static_cast<std::size_t>(levels) * codebook_size * dim) {
        throw ValidationError("codebooks: table size does not match L*V*D");
    }
    check_finite(tables, "codebooks");
}

CodebookSet rq_train(std::span<const float> vectors, std::size_t count, std::size_t dim,
                     const RqTrainParams& params) {
    if (params.levels == 0 || params.codebook_size == 0 || dim == 0) {
        throw ValidationError("rq_train: L, V and D must be positive");
    }
    if (vectors.size() != count * dim) {
        throw ValidationError("rq_train: vector buffer does not match count*dim");
    }
    if (count < params.codebook_size) {
        throw InsufficientDataError("rq_train: need at least V training vectors");
    }
    check_finite(vectors, "rq_train");

    CodebookSet cb(params.levels, params.codebook_size,
                   static_cast<std::uint32_t>(dim));
    Rng rng(params.seed);
    std::vector<float> residuals(vectors.begin(), vectors.end());
    std::vector<std::uint32_t> assign(count);
    for (std::uint32_t level = 0; level < params.levels; ++level) {
        const std::vector<float> centroids =
            kmeans(residuals, count, dim, params.codebook_size, params.kmeans_iters, rng);
        std::copy(centroids.begin(), centroids.end(),
                  cb.tables.begin() + static_cast<std::size_t>(level) *
                                          params.codebook_size * dim);
        assign_all(residuals, count, dim, centroids, params.codebook_size, assign);
        for (std::size_t p = 0; p < count; ++p) {
            const float* cent = centroids.data() + static_cast<std::size_t>(assign[p]) * dim;
            float* r = residuals.data() + p * dim;
            for (std::size_t j = 0; j < dim; ++j) {
                r[j] -= cent[j];
            }
        }
    }
    return cb;
}

SequentialDocId rq_encode(std::span<const float> vec, const CodebookSet& cb) {
    if (vec.size() != cb.dim) {
        throw ValidationError("rq_encode: vector dimension does not match codebooks");
    }
    SequentialDocId codes;
    codes.reserve(cb.levels);
    std::vector<float> residual(vec.begin(), vec.end());
    for (std::uint32_t level = 0; level < cb.levels; ++level) {
        const std::uint32_t best = nearest_centroid(
            residual.data(), cb.tables.data() + static_cast<std::size_t>(level) *
                                                    cb.codebook_size * cb.dim,
            cb.codebook_size, cb.dim);
        codes.push_back(best);
        const auto row = cb.row(level, best);
        for (std::size_t j = 0; j < cb.dim; ++j) {
            residual[j] -= row[j];
        }
    }
    return codes;
}

namespace {

void check_id(const SequentialDocId& id, const CodebookSet& cb) {
    if (id.size() != cb.levels) {
        throw ValidationError("docid length does not match codebook levels");
    }
    for (std::uint32_t c : id) {
        if (c >= cb.codebook_size) {
            throw ValidationError("docid code out of range");
        }
    }
}

}  // namespace

DenseVector rq_reconstruct(const SequentialDocId& id, const CodebookSet& cb) {
    const std::vector<double> acc = rq_reconstruct_f64(id, cb);
    DenseVector out(cb.dim);
    for (std::size_t j = 0; j < cb.dim; ++j) {
        out[j] = static_cast<float>(acc[j]);
    }
    return out;
}

std::vector<double> rq_reconstruct_f64(const SequentialDocId& id, const CodebookSet& cb) {
    check_id(id, cb);
    std::vector<double> acc(cb.dim, 0.0);
    for (std::uint32_t level = 0; level < cb.levels; ++level) {
        kernels::accumulate(acc.data(), cb.row(level, id[level]).data(), cb.dim);
    }
    return acc;
}

double detail::residual_sqnorm(std::span<const float> vec, const SequentialDocId& id,
                               const CodebookSet& cb, std::size_t prefix_levels) {
    if (vec.size() != cb.dim || prefix_levels > id.size()) {
        throw ValidationError("residual_sqnorm: bad arguments");
    }
    std::vector<float> residual(vec.begin(), vec.end());
    for (std::size_t level = 0; level < prefix_levels; ++level) {
        const auto row = cb.row(level, id[level]);
        for (std::size_t j = 0; j < cb.dim; ++j) {
            residual[j] -= row[j];
        }
    }
    return kernels::dot(residual.data(), residual.data(), cb.dim);
}

std::vector<SequentialDocId> assign_unique_docids(std::span<const float> vectors,
                                                  std::size_t count, const CodebookSet& cb) {
    cb.validate();
    if (vectors.size() != count * cb.dim) {
        throw ValidationError("assign_unique_docids: buffer does not match count*dim");
    }
    // V^L >= N, with saturation to avoid overflow.
    {
        std::size_t cap = 1;
        for (std::uint32_t i = 0; i < cb.levels && cap < count; ++i) {
            if (cap > std::numeric_limits<std::size_t>::max() / cb.codebook_size) {
                cap = std::numeric_limits<std::size_t>::max();
                break;
            }
            cap *= cb.codebook_size;
        }
        if (cap < count) {
            throw CapacityError("assign_unique_docids: V^L smaller than corpus");
        }
    }

    std::vector<SequentialDocId> ids(count);
    parallel_for(count, 0, [&](std::size_t d) {
        ids[d] = rq_encode(std::span<const float>(vectors.data() + d * cb.dim, cb.dim), cb);
    });

    std::unordered_set<SequentialDocId, SeqHash> claimed;
    claimed.reserve(count * 2);
    std::vector<std::size_t> pending;
    for (std::size_t d = 0; d < count; ++d) {
        if (!claimed.insert(ids[d]).second) {
            pending.push_back(d);
        }
    }

    const std::uint32_t last = cb.levels - 1;
    std::vector<std::pair<double, std::uint32_t>> candidates(cb.codebook_size);
    for (const std::size_t d : pending) {
        // Residual before the final level; candidate codes ranked by the
        // reconstruction error they would leave.
        std::vector<float> residual(vectors.begin() + d * cb.dim,
                                    vectors.begin() + (d + 1) * cb.dim);
        for (std::uint32_t level = 0; level < last; ++level) {
            const auto row = cb.row(level, ids[d][level]);
            for (std::size_t j = 0; j < cb.dim; ++j) {
                residual[j] -= row[j];
            }
        }
        for (std::uint32_t c = 0; c < cb.codebook_size; ++c) {
            candidates[c] = {kernels::l2sqr(residual.data(), cb.row(last, c).data(), cb.dim),
                             c};
        }
        std::sort(candidates.begin(), candidates.end());
        bool placed = false;
        SequentialDocId trial = ids[d];
        for (const auto& [err, code] : candidates) {
            trial[last] = code;
            if (claimed.insert(trial).second) {
                ids[d][last] = code;
                placed = true;
                break;
            }
        }
        if (!placed) {
            throw CollisionError(
                "assign_unique_docids: exhausted all final-position codes for document " +
                std::to_string(d) +
                " (more than V documents share one length-(L-1) prefix; increase V or L,"
                " or spread the corpus)");
        }
    }
    return ids;
}

}  // namespace pag
