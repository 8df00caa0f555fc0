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

#include "pag/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "pag/rng.hpp"

namespace pag {

namespace {

// Corpus shape constants. Term ids are Zipf-ranked: low ids are corpus-wide
// common tokens, high ids rare and discriminative. Term importance grows
// with rarity, so top-m extraction favors the discriminative tokens and
// posting lists stay balanced -- the same shape a sparsity-regularized
// lexical encoder produces.
constexpr double kZipfExponent = 1.1;
constexpr double kClusterSpread = 0.35;
constexpr std::uint32_t kTermsPerDoc = 160;
constexpr std::uint32_t kQueryTerms = 28;
constexpr std::uint32_t kQueryNoiseTerms = 3;

// Documents must not blanket a small vocabulary, or term overlap stops
// being discriminative.
std::uint32_t terms_per_doc(std::uint32_t vocab) {
    return std::min(kTermsPerDoc, std::max<std::uint32_t>(1, vocab / 8));
}

double rarity(std::uint32_t token) {
    return std::log(2.0 + static_cast<double>(token));
}

std::vector<double> zipf_cdf(std::uint32_t vocab) {
    std::vector<double> cdf(vocab);
    double total = 0.0;
    for (std::uint32_t r = 0; r < vocab; ++r) {
        total += 1.0 / std::pow(static_cast<double>(r + 1), kZipfExponent);
        cdf[r] = total;
    }
    for (double& c : cdf) {
        c /= total;
    }
    return cdf;
}

std::uint32_t draw_zipf(const std::vector<double>& cdf, Rng& rng) {
    const double u = rng.unit();
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    return static_cast<std::uint32_t>(std::min<std::size_t>(it - cdf.begin(),
                                                            cdf.size() - 1));
}

SparseVector sorted_sparse(std::uint32_t vocab,
                           std::vector<SparseEntry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const SparseEntry& a, const SparseEntry& b) { return a.token < b.token; });
    SparseVector v;
    v.vocab_size = vocab;
    v.entries = std::move(entries);
    v.validate();
    return v;
}

}  // namespace

SyntheticCorpus gen_corpus(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.queries > cfg.docs) {
        throw ValidationError("gen_corpus: more queries than source documents");
    }
    const std::uint32_t doc_terms = terms_per_doc(cfg.V_T);
    if (doc_terms + kQueryNoiseTerms > cfg.V_T) {
        throw ValidationError("gen_corpus: vocabulary too small for document terms");
    }
    Rng rng(cfg.seed);
    SyntheticCorpus corpus;
    corpus.dim = cfg.D;
    corpus.vocab = cfg.V_T;

    std::vector<float> centers(static_cast<std::size_t>(cfg.clusters) * cfg.D);
    for (float& c : centers) {
        c = static_cast<float>(rng.normal());
    }

    corpus.doc_vectors.resize(static_cast<std::size_t>(cfg.docs) * cfg.D);
    for (std::uint32_t d = 0; d < cfg.docs; ++d) {
        const std::uint32_t c = static_cast<std::uint32_t>(rng.bounded(cfg.clusters));
        float* vec = corpus.doc_vectors.data() + static_cast<std::size_t>(d) * cfg.D;
        const float* center = centers.data() + static_cast<std::size_t>(c) * cfg.D;
        for (std::uint32_t j = 0; j < cfg.D; ++j) {
            vec[j] = center[j] + static_cast<float>(kClusterSpread * rng.normal());
        }
    }

    const std::vector<double> cdf = zipf_cdf(cfg.V_T);
    corpus.doc_terms.reserve(cfg.docs);
    for (std::uint32_t d = 0; d < cfg.docs; ++d) {
        std::unordered_set<std::uint32_t> seen;
        std::vector<SparseEntry> entries;
        entries.reserve(doc_terms);
        while (entries.size() < doc_terms) {
            const std::uint32_t t = draw_zipf(cdf, rng);
            if (seen.insert(t).second) {
                entries.push_back(
                    {t, static_cast<float>(rng.uniform(0.5, 2.0) * rarity(t))});
            }
        }
        corpus.doc_terms.push_back(sorted_sparse(cfg.V_T, std::move(entries)));
    }

    // Distinct source documents, one per query.
    std::vector<std::uint32_t> sources(cfg.docs);
    std::iota(sources.begin(), sources.end(), 0);
    for (std::uint32_t i = 0; i < cfg.queries; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.bounded(cfg.docs - i));
        std::swap(sources[i], sources[j]);
    }

    corpus.query_vectors.resize(static_cast<std::size_t>(cfg.queries) * cfg.D);
    corpus.query_terms.reserve(cfg.queries);
    for (std::uint32_t qi = 0; qi < cfg.queries; ++qi) {
        const std::uint32_t src = sources[qi];
        const float* doc_vec =
            corpus.doc_vectors.data() + static_cast<std::size_t>(src) * cfg.D;
        float* q_vec = corpus.query_vectors.data() + static_cast<std::size_t>(qi) * cfg.D;
        for (std::uint32_t j = 0; j < cfg.D; ++j) {
            q_vec[j] = doc_vec[j] + static_cast<float>(cfg.sigma * rng.normal());
        }

        const auto& terms = corpus.doc_terms[src].entries;
        const std::size_t keep = std::min<std::size_t>(kQueryTerms, terms.size());
        std::vector<std::uint32_t> pick(terms.size());
        std::iota(pick.begin(), pick.end(), 0);
        for (std::size_t i = 0; i < keep; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.bounded(pick.size() - i));
            std::swap(pick[i], pick[j]);
        }
        std::unordered_set<std::uint32_t> doc_tokens;
        for (const auto& e : terms) {
            doc_tokens.insert(e.token);
        }
        std::vector<SparseEntry> q_entries;
        q_entries.reserve(keep + kQueryNoiseTerms);
        for (std::size_t i = 0; i < keep; ++i) {
            const auto& e = terms[pick[i]];
            const double w = static_cast<double>(e.weight) * rng.uniform(0.7, 1.3);
            q_entries.push_back({e.token, static_cast<float>(std::log1p(w))});
        }
        std::unordered_set<std::uint32_t> q_tokens;
        for (const auto& e : q_entries) {
            q_tokens.insert(e.token);
        }
        std::uint32_t added = 0;
        while (added < kQueryNoiseTerms) {
            const std::uint32_t t = draw_zipf(cdf, rng);
            if (doc_tokens.count(t) || q_tokens.count(t)) {
                continue;
            }
            q_tokens.insert(t);
            q_entries.push_back(
                {t, static_cast<float>(std::log1p(rng.uniform(0.05, 0.3)))});
            ++added;
        }
        corpus.query_terms.push_back(sorted_sparse(cfg.V_T, std::move(q_entries)));
        corpus.qrels.by_query["q" + std::to_string(qi)][src] = 1;
    }
    return corpus;
}

}  // namespace pag
