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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pag/prefix_tree.hpp"
#include "pag/scorer.hpp"
#include "pag/sparse.hpp"
#include "pag/types.hpp"

namespace pag {

enum class PriorAggregation { kMax, kMean, kMin };

PriorAggregation prior_aggregation_from_string(std::string_view name);

/// Document-level score prior over DocID prefixes: for every prefix of every
/// backing document, the aggregated (max by default) simultaneous score of
/// the backing documents sharing that prefix. Prefixes outside the backing
/// set carry no entry; guided search skips them rather than doing arithmetic
/// with a sentinel.
class PrefixPrior {
public:
    PrefixPrior() = default;

    /// topn: (doc, simultaneous score) pairs; every doc must have a DocID in
    /// the tree.
    static PrefixPrior build(const Ranking& topn, std::span<const SequentialDocId> docids,
                             const PrefixTree& tree,
                             PriorAggregation agg = PriorAggregation::kMax);

    bool empty() const { return backing_.empty(); }
    bool has(PrefixTree::NodeId node) const { return has_[node] != 0; }
    double value(PrefixTree::NodeId node) const { return value_[node]; }

    /// Prefix lookup for tests and diagnostics; nullopt when absent.
    std::optional<double> lookup(std::span<const std::uint32_t> prefix) const;

    const Ranking& backing() const { return backing_; }

private:
    const PrefixTree* tree_ = nullptr;
    std::vector<double> value_;
    std::vector<char> has_;
    Ranking backing_;
};

PrefixPrior build_prefix_prior(const Ranking& topn, std::span<const SequentialDocId> docids,
                               const PrefixTree& tree,
                               PriorAggregation agg = PriorAggregation::kMax);

/// Scores every document (sequence score, plus its simultaneous score when
/// `simul_scores` is given) and sorts descending, ties to the lower ordinal.
Ranking brute_force_decode(const QueryEncoding& q, std::span<const SequentialDocId> docids,
                           const CodebookSet& cb, const ScorerConfig& cfg,
                           std::span<const double> simul_scores = {});

/// Depth-L beam search over the tree keeping the k best prefixes by
/// sequence score (ties to the lexicographically smaller prefix). Returns
/// surviving full-length hypotheses as documents, descending score.
Ranking constrained_beam_search(const QueryEncoding& q, const PrefixTree& tree,
                                const CodebookSet& cb, const ScorerConfig& cfg,
                                std::size_t k);

/// Beam search guided by the prior: candidates are ranked and returned by
/// guided score = prior[prefix] + sequence score, and only prefixes present
/// in the prior are expanded.
Ranking planning_ahead_search(const QueryEncoding& q, const PrefixTree& tree,
                              const CodebookSet& cb, const ScorerConfig& cfg,
                              const PrefixPrior& prior, std::size_t k);

struct FlopsCost {
    double seq_flops;
    double simul_flops;
    double delta;
};

/// Closed-form decoding cost model: sequential decoding needs L*k forward
/// calls; simultaneous decoding needs one call plus corpus_size*m score
/// additions.
FlopsCost flops_cost_model(double per_call_flops, double L, double k, double corpus_size,
                           double m);

}  // namespace pag
