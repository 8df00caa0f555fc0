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

// Ranking objectives as pure functions, for verification and scoring
// consistency checks. No gradients, no training loop.

#pragma once

#include <cstddef>
#include <vector>

#include "pag/scorer.hpp"
#include "pag/types.hpp"

namespace pag {

/// Model scores for a (query, positive, negative) pair plus the teacher's
/// score margin.
struct TripletScores {
    double pos_score;
    double neg_score;
    double teacher_margin;
};

/// Margin-MSE: squared gap between the model margin and the teacher margin.
double margin_mse(const TripletScores& ts);

/// Prefix variant with a down-weighted teacher margin (alpha in [0, 1]).
double prefix_margin_mse(double pos_prefix_score, double neg_prefix_score,
                         double teacher_margin, double alpha);

/// Prefix lengths and their margin weights. Weights must be in [0, 1],
/// non-decreasing in the length, and reach exactly 1 at the full length.
struct PrefixWeightSchedule {
    std::vector<std::size_t> lengths;  // ascending, last == L
    std::vector<double> weights;

    /// Validates against a DocID length L; throws ValidationError.
    void validate(std::size_t full_length) const;

    /// Linear schedule alpha_i = i / L over the given lengths.
    static PrefixWeightSchedule interpolated(std::vector<std::size_t> lengths,
                                             std::size_t full_length);
};

/// Sum of prefix margin-MSE terms over the schedule's lengths.
double multi_objective_seq_loss(const QueryEncoding& q, const SequentialDocId& pos_id,
                                const SequentialDocId& neg_id, const CodebookSet& cb,
                                const ScorerConfig& cfg,
                                const PrefixWeightSchedule& schedule, double teacher_margin);

/// Joint objective: set-based margin-MSE plus the sequential loss.
double unified_loss(const TripletScores& set_triplet, double seq_loss);

}  // namespace pag
