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

#include "pag/decoder.hpp"

#include <algorithm>
#include <iostream>

namespace pag {

PriorAggregation prior_aggregation_from_string(std::string_view name) {
    if (name == "max") {
        return PriorAggregation::kMax;
    }
    if (name == "mean") {
        return PriorAggregation::kMean;
    }
    if (name == "min") {
        return PriorAggregation::kMin;
    }
    throw ValidationError("unknown prior aggregation: " + std::string(name));
}

PrefixPrior PrefixPrior::build(const Ranking& topn, std::span<const SequentialDocId> docids,
                               const PrefixTree& tree, PriorAggregation agg) {
    PrefixPrior prior;
    prior.tree_ = &tree;
    prior.backing_ = topn;
    prior.value_.assign(tree.node_count(), 0.0);
    prior.has_.assign(tree.node_count(), 0);
    std::vector<std::uint64_t> counts;
    if (agg == PriorAggregation::kMean) {
        counts.assign(tree.node_count(), 0);
    }
    for (const auto& [doc, score] : topn) {
        if (doc >= docids.size()) {
            throw ValidationError("prefix prior: document without a DocID");
        }
        PrefixTree::NodeId node = PrefixTree::kRoot;
        for (const std::uint32_t code : docids[doc]) {
            node = tree.child(node, code);
            if (node == PrefixTree::kNone) {
                throw ValidationError("prefix prior: DocID not present in the tree");
            }
            switch (agg) {
                case PriorAggregation::kMax:
                    if (!prior.has_[node] || score > prior.value_[node]) {
                        prior.value_[node] = score;
                    }
                    break;
                case PriorAggregation::kMin:
                    if (!prior.has_[node] || score < prior.value_[node]) {
                        prior.value_[node] = score;
                    }
                    break;
                case PriorAggregation::kMean:
                    prior.value_[node] += score;
                    ++counts[node];
                    break;
            }
            prior.has_[node] = 1;
        }
    }
    if (agg == PriorAggregation::kMean) {
        for (std::size_t n = 0; n < prior.value_.size(); ++n) {
            if (prior.has_[n]) {
                prior.value_[n] /= static_cast<double>(counts[n]);
            }
        }
    }
    return prior;
}

std::optional<double> PrefixPrior::lookup(std::span<const std::uint32_t> prefix) const {
    if (tree_ == nullptr) {
        return std::nullopt;
    }
    const PrefixTree::NodeId node = tree_->find(prefix);
    if (node == PrefixTree::kNone || !has_[node]) {
        return std::nullopt;
    }
    return value_[node];
}

PrefixPrior build_prefix_prior(const Ranking& topn, std::span<const SequentialDocId> docids,
                               const PrefixTree& tree, PriorAggregation agg) {
    return PrefixPrior::build(topn, docids, tree, agg);
}

Ranking brute_force_decode(const QueryEncoding& q, std::span<const SequentialDocId> docids,
                           const CodebookSet& cb, const ScorerConfig& cfg,
                           std::span<const double> simul_scores) {
    const bool combine = !simul_scores.empty();
    if (combine && simul_scores.size() != docids.size()) {
        throw ValidationError("brute_force_decode: simultaneous scores do not cover corpus");
    }
    Ranking ranking(docids.size());
    for (std::uint32_t d = 0; d < docids.size(); ++d) {
        double s = seq_score(q, docids[d], cb, cfg);
        if (combine) {
            s += simul_scores[d];
        }
        ranking[d] = {d, s};
    }
    std::sort(ranking.begin(), ranking.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.doc < b.doc;
    });
    return ranking;
}

namespace {

struct Hyp {
    PrefixTree::NodeId node;
    SequentialDocId prefix;
    PrefixCursor cursor;
    double guided;
};

struct Candidate {
    std::uint32_t parent;
    std::uint32_t code;
    PrefixTree::NodeId node;
    double key;  // selection score: seq, or prior + seq when guided
};

/// (key desc, extended prefix lexicographic asc); prefixes at one level all
/// have the same length and are pairwise distinct, so this is a total order.
struct CandidateLess {
    const std::vector<Hyp>* hyps;
    bool operator()(const Candidate& a, const Candidate& b) const {
        if (a.key != b.key) {
            return a.key > b.key;
        }
        const auto& pa = (*hyps)[a.parent].prefix;
        const auto& pb = (*hyps)[b.parent].prefix;
        for (std::size_t j = 0; j < pa.size(); ++j) {
            if (pa[j] != pb[j]) {
                return pa[j] < pb[j];
            }
        }
        return a.code < b.code;
    }
};

Ranking beam_search_impl(const QueryEncoding& q, const PrefixTree& tree,
                         const CodebookSet& cb, const ScorerConfig& cfg, std::size_t k,
                         const PrefixPrior* prior) {
    if (k == 0) {
        throw ValidationError("beam search: k must be >= 1");
    }
    if (tree.empty()) {
        return {};
    }
    if (tree.depth() != cb.levels) {
        throw ValidationError("beam search: tree depth does not match codebook levels");
    }
    std::vector<Hyp> beam;
    beam.push_back({PrefixTree::kRoot, {}, PrefixCursor(q, cb, cfg), 0.0});

    std::vector<Candidate> candidates;
    for (std::size_t level = 0; level < tree.depth(); ++level) {
        candidates.clear();
        for (std::uint32_t h = 0; h < beam.size(); ++h) {
            const Hyp& hyp = beam[h];
            const auto codes = tree.child_codes(hyp.node);
            const auto nodes = tree.child_nodes(hyp.node);
            for (std::size_t c = 0; c < codes.size(); ++c) {
                if (prior != nullptr && !prior->has(nodes[c])) {
                    continue;  // outside the backing set: -inf prior
                }
                const double seq = hyp.cursor.total() + hyp.cursor.score_candidate(codes[c]);
                const double key = prior != nullptr ? prior->value(nodes[c]) + seq : seq;
                candidates.push_back({h, codes[c], nodes[c], key});
            }
        }
        const CandidateLess less{&beam};
        if (candidates.size() > k) {
            std::nth_element(candidates.begin(), candidates.begin() + k, candidates.end(),
                             less);
            candidates.resize(k);
        }
        std::sort(candidates.begin(), candidates.end(), less);

        std::vector<Hyp> next;
        next.reserve(candidates.size());
        for (const Candidate& cand : candidates) {
            Hyp child{cand.node, beam[cand.parent].prefix, beam[cand.parent].cursor,
                      cand.key};
            child.prefix.push_back(cand.code);
            child.cursor.advance(cand.code);
            next.push_back(std::move(child));
        }
        beam = std::move(next);
        if (beam.empty()) {
            return {};
        }
    }

    // Survivors are sorted by (key desc, prefix lex asc) already; the final
    // ranking uses the same order. DocIDs are unique, so docs are distinct.
    Ranking ranking;
    ranking.reserve(beam.size());
    for (const Hyp& hyp : beam) {
        ranking.push_back({tree.doc_at(hyp.node), hyp.guided});
    }
    return ranking;
}

}  // namespace

Ranking constrained_beam_search(const QueryEncoding& q, const PrefixTree& tree,
                                const CodebookSet& cb, const ScorerConfig& cfg,
                                std::size_t k) {
    return beam_search_impl(q, tree, cb, cfg, k, nullptr);
}

Ranking planning_ahead_search(const QueryEncoding& q, const PrefixTree& tree,
                              const CodebookSet& cb, const ScorerConfig& cfg,
                              const PrefixPrior& prior, std::size_t k) {
    if (prior.empty()) {
        std::clog << "planning_ahead_search: empty prior for query '" << q.query_id
                  << "', returning no results\n";
        return {};
    }
    return beam_search_impl(q, tree, cb, cfg, k, &prior);
}

FlopsCost flops_cost_model(double per_call_flops, double L, double k, double corpus_size,
                           double m) {
    if (!(per_call_flops > 0) || !(L > 0) || !(k > 0) || !(corpus_size > 0) || !(m > 0)) {
        throw ValidationError("flops_cost_model: all inputs must be positive");
    }
    FlopsCost cost;
    cost.seq_flops = L * k * per_call_flops;
    cost.simul_flops = per_call_flops + corpus_size * m;
    cost.delta = cost.seq_flops - cost.simul_flops;
    return cost;
}

}  // namespace pag
