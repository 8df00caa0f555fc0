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

namespace pag {

namespace {

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw ValidationError(std::string(what) + ": non-finite value");
    }
}

}  // namespace

double margin_mse(const TripletScores& ts) {
    check_finite(ts.pos_score, "margin_mse");
    check_finite(ts.neg_score, "margin_mse");
    check_finite(ts.teacher_margin, "margin_mse");
    const double r = ts.pos_score - ts.neg_score - ts.teacher_margin;
    return r * r;
}

double prefix_margin_mse(double pos_prefix_score, double neg_prefix_score,
                         double teacher_margin, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw ValidationError("prefix_margin_mse: alpha must be in [0, 1]");
    }
    const double r = pos_prefix_score - neg_prefix_score - alpha * teacher_margin;
    return r * r;
}

void PrefixWeightSchedule::validate(std::size_t full_length) const {
    if (lengths.empty() || lengths.size() != weights.size()) {
        throw ValidationError("prefix schedule: lengths and weights must align");
    }
    std::size_t prev_len = 0;
    double prev_w = 0.0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (lengths[i] == 0 || lengths[i] > full_length) {
            throw ValidationError("prefix schedule: length out of [1, L]");
        }
        if (i > 0 && lengths[i] <= prev_len) {
            throw ValidationError("prefix schedule: lengths must be strictly ascending");
        }
        if (!(weights[i] >= 0.0 && weights[i] <= 1.0)) {
            throw ValidationError("prefix schedule: weights must be in [0, 1]");
        }
        if (weights[i] < prev_w) {
            throw ValidationError("prefix schedule: weights must be non-decreasing");
        }
        prev_len = lengths[i];
        prev_w = weights[i];
    }
    if (lengths.back() != full_length) {
        throw ValidationError("prefix schedule: must include the full length L");
    }
    if (weights.back() != 1.0) {
        throw ValidationError("prefix schedule: weight at L must be exactly 1");
    }
}

PrefixWeightSchedule PrefixWeightSchedule::interpolated(std::vector<std::size_t> lengths,
                                                        std::size_t full_length) {
    PrefixWeightSchedule sched;
    sched.lengths = std::move(lengths);
    sched.weights.reserve(sched.lengths.size());
    for (const std::size_t len : sched.lengths) {
        sched.weights.push_back(static_cast<double>(len) /
                                static_cast<double>(full_length));
    }
    sched.validate(full_length);
    return sched;
}

double multi_objective_seq_loss(const QueryEncoding& q, const SequentialDocId& pos_id,
                                const SequentialDocId& neg_id, const CodebookSet& cb,
                                const ScorerConfig& cfg,
                                const PrefixWeightSchedule& schedule,
                                double teacher_margin) {
    schedule.validate(cb.levels);
    if (pos_id.size() != cb.levels || neg_id.size() != cb.levels) {
        throw ValidationError("multi_objective_seq_loss: DocID length mismatch");
    }
    check_finite(teacher_margin, "multi_objective_seq_loss");
    double total = 0.0;
    for (std::size_t i = 0; i < schedule.lengths.size(); ++i) {
        const std::size_t len = schedule.lengths[i];
        const double pos = prefix_score(q, std::span(pos_id.data(), len), cb, cfg);
        const double neg = prefix_score(q, std::span(neg_id.data(), len), cb, cfg);
        total += prefix_margin_mse(pos, neg, teacher_margin, schedule.weights[i]);
    }
    return total;
}

double unified_loss(const TripletScores& set_triplet, double seq_loss) {
    check_finite(seq_loss, "unified_loss");
    return margin_mse(set_triplet) + seq_loss;
}

}  // namespace pag
