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

struct SparseEntry {
    std::uint32_t token;
    float weight;
};

/// Sparse lexical weights over a token vocabulary. Entries are kept sorted
/// by ascending token id with non-negative finite weights; accumulation
/// anywhere in this module walks entries in that order, which is what makes
/// the inverted-index route agree bit-for-bit with the naive one.
struct SparseVector {
    std::uint32_t vocab_size = 0;  // V_T
    std::vector<SparseEntry> entries;

    void validate() const;
    /// Weight for a token, 0 when absent.
    float at(std::uint32_t token) const;
};

/// Builds the sparse weight vector from a token-major score matrix
/// (vocab_size rows, `positions` columns): out[t] is the max over positions
/// of log1p(relu(score)). Zero weights are omitted.
SparseVector log_sat_maxpool(std::span<const float> scores, std::size_t vocab_size,
                             std::size_t positions);

/// Top-m tokens by weight (ties to the lower token id), returned sorted
/// ascending. Documents with fewer than m positive weights are padded with
/// the lowest-id unused tokens; `padded`, when given, reports that.
SetDocId extract_set_docid(const SparseVector& h_d, std::size_t m, bool* padded = nullptr);

/// Document-level score: sum of the query weights of the document's tokens,
/// walked in ascending token order, accumulated in double.
double simul_score(const SparseVector& h_q, const SetDocId& t_d);

/// Static postings lists in CSR form; built once, then read-only.
struct InvertedIndex {
    std::uint32_t doc_count = 0;
    std::uint32_t set_size = 0;    // m
    std::uint32_t vocab_size = 0;  // V_T
    std::vector<std::uint64_t> offsets;  // vocab_size + 1
    std::vector<std::uint32_t> postings;  // doc ordinals, ascending per token

    std::span<const std::uint32_t> postings_for(std::uint32_t token) const {
        return {postings.data() + offsets[token],
                static_cast<std::size_t>(offsets[token + 1] - offsets[token])};
    }
};

InvertedIndex build_inverted_index(std::span<const SetDocId> set_docids,
                                   std::uint32_t vocab_size);

/// Top-n documents by simultaneous score, descending, ties to the lower
/// ordinal; slots beyond the positive-scoring documents are filled with
/// zero-score documents in ascending ordinal order.
Ranking topn_simul(const SparseVector& h_q, const InvertedIndex& idx, std::size_t n);

/// Sparsity penalty of a batch: sum over tokens of the squared mean weight.
double flops_reg(std::span<const SparseVector> batch);

}  // namespace pag
