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
#include <map>
#include <set>
#include <vector>

#include <doctest.h>

#include "pag/rng.hpp"

using namespace pag;

namespace {

struct Fixture {
    CodebookSet cb;
    std::vector<SequentialDocId> docids;
    PrefixTree tree;
    std::vector<SetDocId> sets;
    InvertedIndex inverted;
    std::uint32_t vocab = 0;
};

Fixture make_fixture(Rng& rng, std::size_t docs, std::uint32_t L, std::uint32_t V,
                     std::uint32_t D, std::uint32_t vocab, std::uint32_t m) {
    Fixture f;
    f.vocab = vocab;
    f.cb = CodebookSet(L, V, D);
    for (auto& v : f.cb.tables) {
        v = static_cast<float>(rng.normal());
    }
    std::set<SequentialDocId> distinct;
    while (distinct.size() < docs) {
        SequentialDocId id(L);
        for (auto& c : id) {
            c = static_cast<std::uint32_t>(rng.bounded(V));
        }
        distinct.insert(id);
    }
    f.docids.assign(distinct.begin(), distinct.end());
    f.tree = PrefixTree::build(f.docids);
    for (std::size_t d = 0; d < docs; ++d) {
        std::set<std::uint32_t> tokens;
        while (tokens.size() < m) {
            tokens.insert(static_cast<std::uint32_t>(rng.bounded(vocab)));
        }
        f.sets.emplace_back(tokens.begin(), tokens.end());
    }
    f.inverted = build_inverted_index(f.sets, vocab);
    return f;
}

QueryEncoding make_query(Rng& rng, std::uint32_t D, std::uint32_t vocab,
                         std::size_t query_terms) {
    QueryEncoding q;
    q.query_id = "q";
    q.dense.resize(D);
    for (auto& v : q.dense) {
        v = static_cast<float>(rng.normal());
    }
    std::set<std::uint32_t> tokens;
    while (tokens.size() < query_terms) {
        tokens.insert(static_cast<std::uint32_t>(rng.bounded(vocab)));
    }
    q.sparse.vocab_size = vocab;
    for (const std::uint32_t t : tokens) {
        q.sparse.entries.push_back({t, static_cast<float>(rng.uniform(0.1, 2.0))});
    }
    return q;
}

// Reference beam search written directly from the prefix-expansion rule: no
// tree navigation, no incremental cursors. Extensions come from a linear
// scan of the DocIDs and every candidate is rescored from scratch.
Ranking reference_beam(const QueryEncoding& q, const std::vector<SequentialDocId>& docids,
                       const CodebookSet& cb, const ScorerConfig& cfg, std::size_t k) {
    struct RefHyp {
        SequentialDocId prefix;
        double score;
    };
    std::vector<RefHyp> beam = {{{}, 0.0}};
    const std::size_t L = cb.levels;
    for (std::size_t level = 0; level < L; ++level) {
        std::vector<RefHyp> candidates;
        for (const RefHyp& hyp : beam) {
            std::set<std::uint32_t> extensions;
            for (const auto& id : docids) {
                if (std::equal(hyp.prefix.begin(), hyp.prefix.end(), id.begin())) {
                    extensions.insert(id[level]);
                }
            }
            for (const std::uint32_t x : extensions) {
                SequentialDocId ext = hyp.prefix;
                ext.push_back(x);
                candidates.push_back({ext, prefix_score(q, ext, cb, cfg)});
            }
        }
        std::sort(candidates.begin(), candidates.end(),
                  [](const RefHyp& a, const RefHyp& b) {
                      if (a.score != b.score) {
                          return a.score > b.score;
                      }
                      return a.prefix < b.prefix;
                  });
        if (candidates.size() > k) {
            candidates.resize(k);
        }
        beam = std::move(candidates);
    }
    Ranking out;
    for (const RefHyp& hyp : beam) {
        for (std::uint32_t d = 0; d < docids.size(); ++d) {
            if (docids[d] == hyp.prefix) {
                out.push_back({d, hyp.score});
                break;
            }
        }
    }
    return out;
}

void check_rankings_equal(const Ranking& got, const Ranking& expected) {
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].doc == expected[i].doc);
        CHECK(got[i].score == expected[i].score);
    }
}

const ScorerConfig kDot{ScorerKind::kDotProduct, 0.0, 0};
const ScorerConfig kMix{ScorerKind::kPrefixMixing, 0.4, 0};

}  // namespace

TEST_SUITE("decoder") {

TEST_CASE("single-document corpus ranks that document first") {
    Rng rng(61);
    const Fixture f = make_fixture(rng, 1, 3, 4, 8, 32, 4);
    const QueryEncoding q = make_query(rng, 8, 32, 4);
    const Ranking r = brute_force_decode(q, f.docids, f.cb, kDot);
    REQUIRE(r.size() == 1);
    CHECK(r[0].doc == 0);
}

TEST_CASE("zero simultaneous scores leave the brute-force order unchanged") {
    Rng rng(62);
    const Fixture f = make_fixture(rng, 50, 3, 4, 8, 32, 4);
    const QueryEncoding q = make_query(rng, 8, 32, 4);
    const std::vector<double> zeros(f.docids.size(), 0.0);
    const Ranking pure = brute_force_decode(q, f.docids, f.cb, kDot);
    const Ranking combined = brute_force_decode(q, f.docids, f.cb, kDot, zeros);
    check_rankings_equal(combined, pure);
}

TEST_CASE("brute force matches an independent sort oracle") {
    Rng rng(63);
    const Fixture f = make_fixture(rng, 2000, 4, 8, 16, 64, 6);
    for (const ScorerConfig& cfg : {kDot, kMix}) {
        const QueryEncoding q = make_query(rng, 16, 64, 8);
        std::vector<double> simul(f.docids.size());
        for (std::uint32_t d = 0; d < f.sets.size(); ++d) {
            simul[d] = simul_score(q.sparse, f.sets[d]);
        }
        const Ranking got = brute_force_decode(q, f.docids, f.cb, cfg, simul);

        std::vector<std::pair<double, std::uint32_t>> expected;
        for (std::uint32_t d = 0; d < f.docids.size(); ++d) {
            expected.emplace_back(seq_score(q, f.docids[d], f.cb, cfg) + simul[d], d);
        }
        std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) {
                return a.first > b.first;
            }
            return a.second < b.second;
        });
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].doc == expected[i].second);
            CHECK(got[i].score == expected[i].first);
        }
    }
}

TEST_CASE("saturated beam equals brute force exactly") {
    Rng rng(64);
    const Fixture f = make_fixture(rng, 300, 4, 6, 12, 64, 6);
    for (const ScorerConfig& cfg : {kDot, kMix}) {
        const QueryEncoding q = make_query(rng, 12, 64, 8);
        const Ranking beam = constrained_beam_search(q, f.tree, f.cb, cfg, 300);
        const Ranking brute = brute_force_decode(q, f.docids, f.cb, cfg);
        check_rankings_equal(beam, brute);
    }
}

TEST_CASE("beam of one keeps the stronger first token") {
    CodebookSet cb(2, 2, 2);
    cb.row_mut(0, 0)[0] = 1.0f;
    cb.row_mut(0, 1)[0] = -1.0f;
    cb.row_mut(1, 0)[1] = 0.5f;
    cb.row_mut(1, 1)[1] = 0.5f;
    const std::vector<SequentialDocId> docids = {{0, 0}, {1, 1}};
    const PrefixTree tree = PrefixTree::build(docids);
    QueryEncoding q;
    q.query_id = "q";
    q.dense = {1.0f, 0.0f};  // favors first token 0
    q.sparse.vocab_size = 1;
    const Ranking r = constrained_beam_search(q, tree, cb, kDot, 1);
    REQUIRE(r.size() == 1);
    CHECK(r[0].doc == 0);
}

TEST_CASE("beam search equals the from-scratch reference implementation") {
    Rng rng(65);
    const Fixture f = make_fixture(rng, 2000, 4, 8, 16, 64, 6);
    for (const ScorerConfig& cfg : {kDot, kMix}) {
        for (const std::size_t k : {std::size_t{10}, std::size_t{100}}) {
            const QueryEncoding q = make_query(rng, 16, 64, 8);
            const Ranking got = constrained_beam_search(q, f.tree, f.cb, cfg, k);
            const Ranking expected = reference_beam(q, f.docids, f.cb, cfg, k);
            check_rankings_equal(got, expected);
        }
    }
}

TEST_CASE("larger beams never lower the best score") {
    Rng rng(66);
    const Fixture f = make_fixture(rng, 500, 4, 8, 12, 64, 6);
    const QueryEncoding q = make_query(rng, 12, 64, 8);
    for (const ScorerConfig& cfg : {kDot, kMix}) {
        double prev_best = -1e300;
        for (const std::size_t k : {1, 5, 20, 100, 500}) {
            const Ranking r = constrained_beam_search(q, f.tree, f.cb, cfg, k);
            REQUIRE_FALSE(r.empty());
            CHECK(r[0].score >= prev_best);
            prev_best = r[0].score;
        }
    }
}

TEST_CASE("prefix prior aggregates by max over covered documents") {
    const std::vector<SequentialDocId> docids = {{1, 2}, {1, 3}};
    const PrefixTree tree = PrefixTree::build(docids);

    const Ranking one = {{0, 3.0}};
    const PrefixPrior p1 = build_prefix_prior(one, docids, tree);
    CHECK(p1.lookup(std::vector<std::uint32_t>{1}) == 3.0);
    CHECK(p1.lookup(std::vector<std::uint32_t>{1, 2}) == 3.0);
    CHECK_FALSE(p1.lookup(std::vector<std::uint32_t>{1, 3}).has_value());

    const Ranking two = {{1, 5.0}, {0, 3.0}};
    const PrefixPrior p2 = build_prefix_prior(two, docids, tree);
    CHECK(p2.lookup(std::vector<std::uint32_t>{1}) == 5.0);
    CHECK(p2.lookup(std::vector<std::uint32_t>{1, 2}) == 3.0);
    CHECK(p2.lookup(std::vector<std::uint32_t>{1, 3}) == 5.0);
}

TEST_CASE("prefix prior matches the filter-and-aggregate oracle") {
    Rng rng(67);
    const Fixture f = make_fixture(rng, 600, 4, 8, 12, 64, 6);
    const QueryEncoding q = make_query(rng, 12, 64, 10);
    const Ranking topn = topn_simul(q.sparse, f.inverted, 500);

    for (const PriorAggregation agg :
         {PriorAggregation::kMax, PriorAggregation::kMean, PriorAggregation::kMin}) {
        const PrefixPrior prior = build_prefix_prior(topn, f.docids, f.tree, agg);
        for (std::size_t len = 1; len <= f.cb.levels; ++len) {
            for (const auto& [doc, score] : topn) {
                const std::span<const std::uint32_t> prefix(f.docids[doc].data(), len);
                // Oracle: scan D for documents sharing the prefix.
                double best = 0.0;
                double sum = 0.0;
                std::size_t count = 0;
                for (const auto& [d2, s2] : topn) {
                    if (std::equal(prefix.begin(), prefix.end(), f.docids[d2].begin())) {
                        if (count == 0) {
                            best = s2;
                        } else if (agg == PriorAggregation::kMax) {
                            best = std::max(best, s2);
                        } else if (agg == PriorAggregation::kMin) {
                            best = std::min(best, s2);
                        }
                        sum += s2;
                        ++count;
                    }
                }
                const auto got = prior.lookup(prefix);
                REQUIRE(got.has_value());
                if (agg == PriorAggregation::kMean) {
                    CHECK(*got == doctest::Approx(sum / count).epsilon(1e-12));
                } else {
                    CHECK(*got == best);
                }
            }
        }
    }
}

TEST_CASE("planning-ahead at full n and k equals combined brute force") {
    Rng rng(68);
    const Fixture f = make_fixture(rng, 400, 4, 6, 12, 64, 6);
    for (const ScorerConfig& cfg : {kDot, kMix}) {
        const QueryEncoding q = make_query(rng, 12, 64, 8);
        const Ranking topn = topn_simul(q.sparse, f.inverted, f.docids.size());
        const PrefixPrior prior = build_prefix_prior(topn, f.docids, f.tree);
        const Ranking guided =
            planning_ahead_search(q, f.tree, f.cb, cfg, prior, f.docids.size());

        std::vector<double> simul(f.docids.size());
        for (std::uint32_t d = 0; d < f.sets.size(); ++d) {
            simul[d] = simul_score(q.sparse, f.sets[d]);
        }
        const Ranking brute = brute_force_decode(q, f.docids, f.cb, cfg, simul);
        check_rankings_equal(guided, brute);
    }
}

TEST_CASE("a single surviving first token restricts all results") {
    Rng rng(69);
    const Fixture f = make_fixture(rng, 200, 3, 6, 8, 64, 4);
    const QueryEncoding q = make_query(rng, 8, 64, 6);
    // Prior backed by documents that share a first token.
    const std::uint32_t first = f.docids[0][0];
    Ranking backing;
    for (std::uint32_t d = 0; d < f.docids.size(); ++d) {
        if (f.docids[d][0] == first) {
            backing.push_back({d, 1.0});
        }
    }
    const PrefixPrior prior = build_prefix_prior(backing, f.docids, f.tree);
    const Ranking r = planning_ahead_search(q, f.tree, f.cb, kDot, prior, 50);
    CHECK_FALSE(r.empty());
    for (const auto& [doc, score] : r) {
        CHECK(f.docids[doc][0] == first);
        CHECK(f.tree.doc_for(f.docids[doc]) == doc);
    }
}

TEST_CASE("guided scores decompose into prior plus sequence score") {
    Rng rng(70);
    const Fixture f = make_fixture(rng, 300, 4, 6, 12, 64, 6);
    const QueryEncoding q = make_query(rng, 12, 64, 8);
    const Ranking topn = topn_simul(q.sparse, f.inverted, 100);
    const PrefixPrior prior = build_prefix_prior(topn, f.docids, f.tree);
    const Ranking r = planning_ahead_search(q, f.tree, f.cb, kMix, prior, 20);
    std::map<std::uint32_t, double> simul_by_doc;
    for (const auto& [doc, score] : topn) {
        simul_by_doc[doc] = score;
    }
    for (const auto& [doc, guided] : r) {
        REQUIRE(simul_by_doc.count(doc));
        CHECK(guided == simul_by_doc[doc] + seq_score(q, f.docids[doc], f.cb, kMix));
    }
}

TEST_CASE("full-pool equivalence holds across random configurations") {
    Rng seeds(72);
    for (int trial = 0; trial < 5; ++trial) {
        Rng rng(seeds.next_u64());
        const std::size_t docs = 50 + seeds.bounded(150);
        const std::uint32_t L = 2 + static_cast<std::uint32_t>(seeds.bounded(4));
        const std::uint32_t V = 4 + static_cast<std::uint32_t>(seeds.bounded(8));
        const std::uint32_t D = 4 + static_cast<std::uint32_t>(seeds.bounded(20));
        const Fixture f = make_fixture(rng, docs, L, V, D, 64, 6);
        const ScorerConfig cfg{ScorerKind::kPrefixMixing, seeds.unit(), 0};
        const QueryEncoding q = make_query(rng, D, 64, 8);

        const Ranking topn = topn_simul(q.sparse, f.inverted, docs);
        const PrefixPrior prior = build_prefix_prior(topn, f.docids, f.tree);
        const Ranking guided = planning_ahead_search(q, f.tree, f.cb, cfg, prior, docs);
        std::vector<double> simul(docs);
        for (std::uint32_t d = 0; d < docs; ++d) {
            simul[d] = simul_score(q.sparse, f.sets[d]);
        }
        const Ranking brute = brute_force_decode(q, f.docids, f.cb, cfg, simul);
        check_rankings_equal(guided, brute);

        const Ranking beam = constrained_beam_search(q, f.tree, f.cb, cfg, docs);
        const Ranking brute_pure = brute_force_decode(q, f.docids, f.cb, cfg);
        check_rankings_equal(beam, brute_pure);
    }
}

TEST_CASE("planning search edge cases") {
    Rng rng(71);
    const Fixture f = make_fixture(rng, 50, 3, 4, 8, 32, 4);
    const QueryEncoding q = make_query(rng, 8, 32, 4);
    const PrefixPrior empty_prior;
    CHECK(planning_ahead_search(q, f.tree, f.cb, kDot, empty_prior, 10).empty());

    const PrefixTree empty_tree = PrefixTree::build({});
    CHECK(constrained_beam_search(q, empty_tree, f.cb, kDot, 10).empty());

    CHECK_THROWS_AS(constrained_beam_search(q, f.tree, f.cb, kDot, 0), ValidationError);
    CHECK_THROWS_AS(
        brute_force_decode(q, f.docids, f.cb, kDot, std::vector<double>(3, 0.0)),
        ValidationError);
}

TEST_CASE("flops cost model closed forms") {
    const FlopsCost c = flops_cost_model(7.5e9, 8, 100, 8.8e6, 64);
    CHECK(c.seq_flops == 6.0e12);
    CHECK(c.simul_flops == 7.5e9 + 5.632e8);
    CHECK(c.delta == c.seq_flops - c.simul_flops);
    CHECK_THROWS_AS(flops_cost_model(0.0, 8, 100, 1e6, 64), ValidationError);
}

}  // TEST_SUITE
