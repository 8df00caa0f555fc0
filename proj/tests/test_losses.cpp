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

#include "pag/losses.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "pag/rng.hpp"

using namespace pag;

namespace {

CodebookSet random_codebooks(Rng& rng, std::uint32_t L, std::uint32_t V, std::uint32_t D) {
    CodebookSet cb(L, V, D);
    for (auto& v : cb.tables) {
        v = static_cast<float>(rng.normal());
    }
    return cb;
}

QueryEncoding random_query(Rng& rng, std::uint32_t D) {
    QueryEncoding q;
    q.dense.resize(D);
    for (auto& v : q.dense) {
        v = static_cast<float>(rng.normal());
    }
    q.sparse.vocab_size = 1;
    return q;
}

SequentialDocId random_id(Rng& rng, const CodebookSet& cb) {
    SequentialDocId id(cb.levels);
    for (auto& c : id) {
        c = static_cast<std::uint32_t>(rng.bounded(cb.codebook_size));
    }
    return id;
}

}  // namespace

TEST_SUITE("losses") {

TEST_CASE("margin_mse closed forms") {
    CHECK(margin_mse({3.0, 1.0, 2.0}) == 0.0);  // pos - neg == margin
    CHECK(margin_mse({2.0, 1.0, 0.0}) == 1.0);
    Rng rng(81);
    for (int i = 0; i < 100; ++i) {
        const double p = rng.normal(), n = rng.normal(), t = rng.normal();
        const double r = p - n - t;
        CHECK(margin_mse({p, n, t}) == r * r);
        CHECK(margin_mse({p, n, t}) >= 0.0);
    }
}

TEST_CASE("prefix_margin_mse scales the teacher margin") {
    CHECK(prefix_margin_mse(1.0, 1.0, 5.0, 0.0) == 0.0);
    Rng rng(82);
    for (int i = 0; i < 1000; ++i) {
        const double p = rng.normal(), n = rng.normal(), t = rng.normal();
        // alpha = 1 reduces exactly to margin_mse.
        CHECK(prefix_margin_mse(p, n, t, 1.0) == margin_mse({p, n, t}));
    }
    CHECK_THROWS_AS(prefix_margin_mse(1.0, 0.0, 0.0, 1.5), ValidationError);
    CHECK_THROWS_AS(prefix_margin_mse(1.0, 0.0, 0.0, -0.1), ValidationError);
}

TEST_CASE("schedule validation and the linear default") {
    const auto sched = PrefixWeightSchedule::interpolated({4, 8}, 8);
    CHECK(sched.weights == std::vector<double>{0.5, 1.0});

    PrefixWeightSchedule bad;
    bad.lengths = {4, 8};
    bad.weights = {1.0, 0.5};  // decreasing
    CHECK_THROWS_AS(bad.validate(8), ValidationError);

    PrefixWeightSchedule missing_full;
    missing_full.lengths = {2, 4};
    missing_full.weights = {0.25, 0.5};
    CHECK_THROWS_AS(missing_full.validate(8), ValidationError);

    PrefixWeightSchedule not_one;
    not_one.lengths = {8};
    not_one.weights = {0.9};
    CHECK_THROWS_AS(not_one.validate(8), ValidationError);
}

TEST_CASE("multi-objective loss reduces to margin_mse at S_L = {L}") {
    Rng rng(83);
    const CodebookSet cb = random_codebooks(rng, 4, 8, 16);
    const ScorerConfig cfg{ScorerKind::kDotProduct, 0.0, 0};
    const QueryEncoding q = random_query(rng, 16);
    const SequentialDocId pos = random_id(rng, cb);
    const SequentialDocId neg = random_id(rng, cb);
    const auto sched = PrefixWeightSchedule::interpolated({4}, 4);
    const double margin = 0.7;
    const double got = multi_objective_seq_loss(q, pos, neg, cb, cfg, sched, margin);
    const double expected = margin_mse(
        {seq_score(q, pos, cb, cfg), seq_score(q, neg, cb, cfg), margin});
    CHECK(got == expected);
}

TEST_CASE("identical ids with zero margin lose nothing") {
    Rng rng(84);
    const CodebookSet cb = random_codebooks(rng, 4, 8, 16);
    const ScorerConfig cfg{ScorerKind::kPrefixMixing, 0.3, 0};
    const QueryEncoding q = random_query(rng, 16);
    const SequentialDocId id = random_id(rng, cb);
    const auto sched = PrefixWeightSchedule::interpolated({2, 4}, 4);
    CHECK(multi_objective_seq_loss(q, id, id, cb, cfg, sched, 0.0) == 0.0);
}

TEST_CASE("multi-objective loss matches the unrolled sum") {
    Rng rng(85);
    const CodebookSet cb = random_codebooks(rng, 8, 8, 16);
    const ScorerConfig cfg{ScorerKind::kDotProduct, 0.0, 0};
    PrefixWeightSchedule sched;
    sched.lengths = {4, 8};
    sched.weights = {0.5, 1.0};
    for (int i = 0; i < 100; ++i) {
        const QueryEncoding q = random_query(rng, 16);
        const SequentialDocId pos = random_id(rng, cb);
        const SequentialDocId neg = random_id(rng, cb);
        const double margin = rng.normal();
        const double got = multi_objective_seq_loss(q, pos, neg, cb, cfg, sched, margin);

        double expected = 0.0;
        for (std::size_t idx = 0; idx < sched.lengths.size(); ++idx) {
            const std::size_t len = sched.lengths[idx];
            expected += prefix_margin_mse(
                prefix_score(q, std::span(pos.data(), len), cb, cfg),
                prefix_score(q, std::span(neg.data(), len), cb, cfg), margin,
                sched.weights[idx]);
        }
        CHECK(got == expected);
        // Sum order over S_L does not matter.
        double reversed = 0.0;
        for (std::size_t idx = sched.lengths.size(); idx-- > 0;) {
            const std::size_t len = sched.lengths[idx];
            reversed += prefix_margin_mse(
                prefix_score(q, std::span(pos.data(), len), cb, cfg),
                prefix_score(q, std::span(neg.data(), len), cb, cfg), margin,
                sched.weights[idx]);
        }
        CHECK(got == reversed);
    }
}

TEST_CASE("unified loss adds the two objectives") {
    CHECK(unified_loss({1.0, 1.0, 0.0}, 0.0) == 0.0);
    CHECK(unified_loss({2.0, 1.0, 0.0}, 2.0) == 3.0);
    Rng rng(86);
    for (int i = 0; i < 100; ++i) {
        const TripletScores ts{rng.normal(), rng.normal(), rng.normal()};
        const double seq = std::abs(rng.normal());
        CHECK(unified_loss(ts, seq) == margin_mse(ts) + seq);
        CHECK(unified_loss(ts, seq) >= 0.0);
    }
}

}  // TEST_SUITE
