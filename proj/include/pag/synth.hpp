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
#include <vector>

#include "pag/config.hpp"
#include "pag/eval.hpp"
#include "pag/sparse.hpp"
#include "pag/types.hpp"

namespace pag {

/// Synthetic desk-scale corpus: Gaussian-cluster dense vectors, Zipf lexical
/// weights, queries derived from sampled source documents, and qrels that
/// grade each query's source document 1. Queries are named q0, q1, ...
struct SyntheticCorpus {
    std::uint32_t dim = 0;
    std::uint32_t vocab = 0;
    std::vector<float> doc_vectors;  // doc_count * dim
    std::vector<SparseVector> doc_terms;
    std::vector<float> query_vectors;  // query_count * dim
    std::vector<SparseVector> query_terms;
    QrelSet qrels;

    std::uint32_t doc_count() const {
        return dim == 0 ? 0 : static_cast<std::uint32_t>(doc_vectors.size() / dim);
    }
    std::uint32_t query_count() const {
        return dim == 0 ? 0 : static_cast<std::uint32_t>(query_vectors.size() / dim);
    }
};

/// Deterministic given cfg.seed. Each query's dense vector is its source
/// document's vector plus N(0, sigma^2) noise; its sparse vector keeps a
/// random half of the source document's terms (re-weighted and
/// log-saturated) plus a few off-document noise tokens.
SyntheticCorpus gen_corpus(const ExperimentConfig& cfg);

}  // namespace pag
