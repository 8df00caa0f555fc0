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
#include <string>
#include <string_view>

#include "pag/rq.hpp"
#include "pag/sparse.hpp"
#include "pag/types.hpp"

namespace pag {

/// Deterministic stand-ins for a neural step scorer.
///   dot_product:   the hidden state is the query vector at every step, so a
///                  sequence score reduces to query . reconstruction and every
///                  brute-force oracle is a plain dot product.
///   prefix_mixing: the hidden state leans toward the decoded prefix,
///                  h = q + beta * normalize(sum of chosen codewords), which
///                  makes step scores genuinely prefix-dependent.
enum class ScorerKind { kDotProduct, kPrefixMixing };

ScorerKind scorer_kind_from_string(std::string_view name);
std::string_view to_string(ScorerKind kind);

struct ScorerConfig {
    ScorerKind kind = ScorerKind::kDotProduct;
    double beta = 0.0;        // mixing weight, prefix_mixing only
    std::uint64_t seed = 0;   // reserved for stochastic scorer kinds

    void validate() const;
};

/// Per-query inputs to scoring: the dense vector drives sequential scores,
/// the sparse vector drives simultaneous scores.
struct QueryEncoding {
    std::string query_id;
    DenseVector dense;
    SparseVector sparse;
};

/// Walks one prefix left to right, one level per advance. All sequence and
/// prefix scores in the project go through this class, so any two routes
/// that walk the same prefix produce bit-identical sums.
class PrefixCursor {
public:
    PrefixCursor(const QueryEncoding& q, const CodebookSet& cb, const ScorerConfig& cfg);

    /// Hidden state for the current prefix; stable until the next advance.
    const DenseVector& hidden() const { return hidden_; }

    /// Score of extending the current prefix by `code` at the current level.
    double score_candidate(std::uint32_t code) const;

    /// Extends the prefix by `code`, folding its step score into total().
    void advance(std::uint32_t code);

    std::size_t level() const { return level_; }
    double total() const { return total_; }

private:
    void refresh_hidden();

    const QueryEncoding* query_;
    const CodebookSet* cb_;
    ScorerConfig cfg_;
    std::size_t level_ = 0;
    double total_ = 0.0;
    std::vector<double> mix_;  // running codeword sum (prefix_mixing only)
    DenseVector hidden_;
};

/// Hidden representation the surrogate model produces for the step after
/// `prefix` (|prefix| < L).
DenseVector step_hidden(const QueryEncoding& q, std::span<const std::uint32_t> prefix,
                        const CodebookSet& cb, const ScorerConfig& cfg);

/// Codeword-vs-hidden dot product at a position (0-based level).
double step_score(const DenseVector& hidden, const CodebookSet& cb, std::size_t level,
                  std::uint32_t code);

/// Accumulated step scores over the whole DocID.
double seq_score(const QueryEncoding& q, const SequentialDocId& id, const CodebookSet& cb,
                 const ScorerConfig& cfg);

/// Accumulated step scores over a partial prefix (1 <= |prefix| <= L).
double prefix_score(const QueryEncoding& q, std::span<const std::uint32_t> prefix,
                    const CodebookSet& cb, const ScorerConfig& cfg);

}  // namespace pag
