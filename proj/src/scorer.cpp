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

#include "pag/scorer.hpp"

#include <cmath>

#include "pag/kernels.hpp"

namespace pag {

ScorerKind scorer_kind_from_string(std::string_view name) {
    if (name == "dot_product") {
        return ScorerKind::kDotProduct;
    }
    if (name == "prefix_mixing") {
        return ScorerKind::kPrefixMixing;
    }
    throw ValidationError("unknown scorer kind: " + std::string(name));
}

std::string_view to_string(ScorerKind kind) {
    return kind == ScorerKind::kDotProduct ? "dot_product" : "prefix_mixing";
}

void ScorerConfig::validate() const {
    if (!std::isfinite(beta)) {
        throw ValidationError("scorer config: beta must be finite");
    }
    if (kind != ScorerKind::kDotProduct && kind != ScorerKind::kPrefixMixing) {
        throw ValidationError("scorer config: invalid kind");
    }
}

PrefixCursor::PrefixCursor(const QueryEncoding& q, const CodebookSet& cb,
                           const ScorerConfig& cfg)
    : query_(&q), cb_(&cb), cfg_(cfg) {
    cfg_.validate();
    if (q.dense.size() != cb.dim) {
        throw ValidationError("query dense dimension does not match codebooks");
    }
    if (cfg_.kind == ScorerKind::kPrefixMixing) {
        mix_.assign(cb.dim, 0.0);
    }
    hidden_ = q.dense;
}

void PrefixCursor::refresh_hidden() {
    // Empty or zero-norm mixing term leaves the hidden state at the query.
    double sqnorm = 0.0;
    for (const double v : mix_) {
        sqnorm += v * v;
    }
    if (sqnorm == 0.0) {
        hidden_ = query_->dense;
        return;
    }
    const double scale = cfg_.beta / std::sqrt(sqnorm);
    kernels::mix(query_->dense.data(), mix_.data(), scale, hidden_.data(), cb_->dim);
}

double PrefixCursor::score_candidate(std::uint32_t code) const {
    if (level_ >= cb_->levels) {
        throw ValidationError("prefix cursor: already at full length");
    }
    if (code >= cb_->codebook_size) {
        throw ValidationError("prefix cursor: code out of range");
    }
    return kernels::dot(cb_->row(level_, code).data(), hidden_.data(), cb_->dim);
}

void PrefixCursor::advance(std::uint32_t code) {
    total_ += score_candidate(code);
    if (cfg_.kind == ScorerKind::kPrefixMixing) {
        kernels::accumulate(mix_.data(), cb_->row(level_, code).data(), cb_->dim);
    }
    ++level_;
    if (cfg_.kind == ScorerKind::kPrefixMixing && level_ < cb_->levels) {
        refresh_hidden();
    }
}

DenseVector step_hidden(const QueryEncoding& q, std::span<const std::uint32_t> prefix,
                        const CodebookSet& cb, const ScorerConfig& cfg) {
    if (prefix.size() >= cb.levels) {
        throw ValidationError("step_hidden: prefix must be shorter than L");
    }
    PrefixCursor cursor(q, cb, cfg);
    for (const std::uint32_t code : prefix) {
        cursor.advance(code);
    }
    return cursor.hidden();
}

double step_score(const DenseVector& hidden, const CodebookSet& cb, std::size_t level,
                  std::uint32_t code) {
    if (level >= cb.levels || code >= cb.codebook_size) {
        throw ValidationError("step_score: position or code out of range");
    }
    if (hidden.size() != cb.dim) {
        throw ValidationError("step_score: hidden dimension does not match codebooks");
    }
    return kernels::dot(cb.row(level, code).data(), hidden.data(), cb.dim);
}

double seq_score(const QueryEncoding& q, const SequentialDocId& id, const CodebookSet& cb,
                 const ScorerConfig& cfg) {
    if (id.size() != cb.levels) {
        throw ValidationError("seq_score: DocID length does not match codebooks");
    }
    return prefix_score(q, id, cb, cfg);
}

double prefix_score(const QueryEncoding& q, std::span<const std::uint32_t> prefix,
                    const CodebookSet& cb, const ScorerConfig& cfg) {
    if (prefix.empty() || prefix.size() > cb.levels) {
        throw ValidationError("prefix_score: length must be in [1, L]");
    }
    PrefixCursor cursor(q, cb, cfg);
    for (const std::uint32_t code : prefix) {
        cursor.advance(code);
    }
    return cursor.total();
}

}  // namespace pag
