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

#include "pag/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "pag/kernels.hpp"

namespace pag {

void SparseVector::validate() const {
    std::uint32_t prev = 0;
    bool first = true;
    for (const auto& e : entries) {
        if (e.token >= vocab_size) {
            throw ValidationError("sparse vector: token id out of vocabulary");
        }
        if (!(e.weight >= 0.0f) || !std::isfinite(e.weight)) {
            throw ValidationError("sparse vector: weight must be finite and >= 0");
        }
        if (!first && e.token <= prev) {
            throw ValidationError("sparse vector: tokens must be strictly ascending");
        }
        prev = e.token;
        first = false;
    }
}

float SparseVector::at(std::uint32_t token) const {
    const auto it = std::lower_bound(
        entries.begin(), entries.end(), token,
        [](const SparseEntry& e, std::uint32_t t) { return e.token < t; });
    if (it != entries.end() && it->token == token) {
        return it->weight;
    }
    return 0.0f;
}

SparseVector log_sat_maxpool(std::span<const float> scores, std::size_t vocab_size,
                             std::size_t positions) {
    if (vocab_size == 0 || positions == 0) {
        throw ValidationError("log_sat_maxpool: empty score matrix");
    }
    if (scores.size() != vocab_size * positions) {
        throw ValidationError("log_sat_maxpool: matrix size does not match V_T*|q|");
    }
    for (float v : scores) {
        if (!std::isfinite(v)) {
            throw ValidationError("log_sat_maxpool: non-finite score");
        }
    }
    SparseVector out;
    out.vocab_size = static_cast<std::uint32_t>(vocab_size);
    for (std::size_t t = 0; t < vocab_size; ++t) {
        const float best = kernels::max(scores.data() + t * positions, positions);
        if (best <= 0.0f) {
            continue;
        }
        const float w = static_cast<float>(std::log1p(static_cast<double>(best)));
        if (w > 0.0f) {
            out.entries.push_back({static_cast<std::uint32_t>(t), w});
        }
    }
    return out;
}

SetDocId extract_set_docid(const SparseVector& h_d, std::size_t m, bool* padded) {
    h_d.validate();
    if (m == 0 || m > h_d.vocab_size) {
        throw ValidationError("extract_set_docid: m must be in [1, V_T]");
    }
    std::vector<SparseEntry> positive;
    positive.reserve(h_d.entries.size());
    for (const auto& e : h_d.entries) {
        if (e.weight > 0.0f) {
            positive.push_back(e);
        }
    }
    const std::size_t take = std::min(m, positive.size());
    std::partial_sort(positive.begin(), positive.begin() + take, positive.end(),
                      [](const SparseEntry& a, const SparseEntry& b) {
                          if (a.weight != b.weight) {
                              return a.weight > b.weight;
                          }
                          return a.token < b.token;
                      });
    SetDocId id;
    id.reserve(m);
    for (std::size_t i = 0; i < take; ++i) {
        id.push_back(positive[i].token);
    }
    std::sort(id.begin(), id.end());
    if (take < m) {
        // Keep the positives and pad with the lowest-id unused tokens.
        if (padded) {
            *padded = true;
        }
        std::vector<bool> used(h_d.vocab_size, false);
        for (const std::uint32_t t : id) {
            used[t] = true;
        }
        for (std::uint32_t t = 0; t < h_d.vocab_size && id.size() < m; ++t) {
            if (!used[t]) {
                id.push_back(t);
            }
        }
        std::sort(id.begin(), id.end());
        return id;
    }
    if (padded) {
        *padded = false;
    }
    return id;
}

double simul_score(const SparseVector& h_q, const SetDocId& t_d) {
    double s = 0.0;
    for (const std::uint32_t t : t_d) {
        if (t >= h_q.vocab_size) {
            throw ValidationError("simul_score: token outside query vocabulary");
        }
        s += static_cast<double>(h_q.at(t));
    }
    return s;
}

InvertedIndex build_inverted_index(std::span<const SetDocId> set_docids,
                                   std::uint32_t vocab_size) {
    InvertedIndex idx;
    idx.vocab_size = vocab_size;
    idx.doc_count = static_cast<std::uint32_t>(set_docids.size());
    idx.set_size = set_docids.empty() ? 0 : static_cast<std::uint32_t>(set_docids[0].size());
    std::vector<std::uint64_t> counts(vocab_size + 1, 0);
    for (const auto& id : set_docids) {
        if (id.size() != idx.set_size) {
            throw ValidationError("build_inverted_index: inconsistent set size m");
        }
        std::uint32_t prev = 0;
        bool first = true;
        for (const std::uint32_t t : id) {
            if (t >= vocab_size) {
                throw ValidationError("build_inverted_index: token id out of vocabulary");
            }
            if (!first && t <= prev) {
                throw ValidationError("build_inverted_index: set tokens must be ascending");
            }
            prev = t;
            first = false;
            ++counts[t + 1];
        }
    }
    idx.offsets.assign(vocab_size + 1, 0);
    for (std::uint32_t t = 0; t < vocab_size; ++t) {
        idx.offsets[t + 1] = idx.offsets[t] + counts[t + 1];
    }
    idx.postings.resize(idx.offsets[vocab_size]);
    std::vector<std::uint64_t> cursor(idx.offsets.begin(), idx.offsets.end() - 1);
    for (std::uint32_t d = 0; d < idx.doc_count; ++d) {
        for (const std::uint32_t t : set_docids[d]) {
            idx.postings[cursor[t]++] = d;
        }
    }
    return idx;
}

Ranking topn_simul(const SparseVector& h_q, const InvertedIndex& idx, std::size_t n) {
    if (n == 0) {
        throw ValidationError("topn_simul: n must be >= 1");
    }
    if (idx.doc_count == 0) {
        throw ValidationError("topn_simul: empty index");
    }
    if (h_q.vocab_size != idx.vocab_size) {
        throw ValidationError("topn_simul: query and index vocabularies differ");
    }
    // Query entries ascend by token, postings ascend by ordinal, so each
    // document accumulates its matched weights in ascending token order --
    // the same order simul_score uses. Zero-weight entries add exactly 0 to
    // any sum and are skipped.
    std::vector<double> acc(idx.doc_count, 0.0);
    for (const auto& e : h_q.entries) {
        if (e.weight <= 0.0f) {
            continue;
        }
        const double w = static_cast<double>(e.weight);
        for (const std::uint32_t d : idx.postings_for(e.token)) {
            acc[d] += w;
        }
    }
    std::vector<ScoredDoc> positive;
    positive.reserve(idx.doc_count);
    for (std::uint32_t d = 0; d < idx.doc_count; ++d) {
        if (acc[d] > 0.0) {
            positive.push_back({d, acc[d]});
        }
    }
    const std::size_t want = std::min<std::size_t>(n, idx.doc_count);
    const auto by_score = [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.doc < b.doc;
    };
    // (score, doc) pairs are totally ordered, so nth_element + sort of the
    // kept block selects exactly the same top-n as a full sort.
    if (positive.size() > want) {
        std::nth_element(positive.begin(), positive.begin() + want, positive.end(),
                         by_score);
        positive.resize(want);
    }
    std::sort(positive.begin(), positive.end(), by_score);
    if (positive.size() < want) {
        std::vector<bool> taken(idx.doc_count, false);
        for (const auto& sd : positive) {
            taken[sd.doc] = true;
        }
        for (std::uint32_t d = 0; d < idx.doc_count && positive.size() < want; ++d) {
            if (!taken[d]) {
                positive.push_back({d, 0.0});
            }
        }
    }
    return positive;
}

double flops_reg(std::span<const SparseVector> batch) {
    if (batch.empty()) {
        throw ValidationError("flops_reg: empty batch");
    }
    const std::uint32_t vocab = batch[0].vocab_size;
    for (const auto& v : batch) {
        if (v.vocab_size != vocab) {
            throw ValidationError("flops_reg: mixed vocabulary sizes");
        }
    }
    std::vector<double> sums(vocab, 0.0);
    for (const auto& v : batch) {
        for (const auto& e : v.entries) {
            sums[e.token] += static_cast<double>(e.weight);
        }
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    double total = 0.0;
    for (std::uint32_t t = 0; t < vocab; ++t) {
        const double mean = sums[t] * inv;
        total += mean * mean;
    }
    return total;
}

}  // namespace pag
