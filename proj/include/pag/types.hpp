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
#include <stdexcept>
#include <string>
#include <vector>

namespace pag {

/// Dense document/query representation, fixed dimension D across a corpus.
using DenseVector = std::vector<float>;

/// Fixed-length sequential DocID: L codes, each in [0, V).
/// std::vector gives the lexicographic ordering used for tie-breaking.
using SequentialDocId = std::vector<std::uint32_t>;

/// Set-based DocID: exactly m distinct token ids, kept sorted ascending.
using SetDocId = std::vector<std::uint32_t>;

/// One ranked document.
struct ScoredDoc {
    std::uint32_t doc;
    double score;
};

/// Descending-score document list; ordinals distinct.
using Ranking = std::vector<ScoredDoc>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Precondition or argument violation (bad dimension, out-of-range code, ...).
struct ValidationError : Error {
    using Error::Error;
};

/// Fewer training points than centroids requested.
struct InsufficientDataError : Error {
    using Error::Error;
};

/// Code space too small for the corpus (V^L < N).
struct CapacityError : Error {
    using Error::Error;
};

/// DocID collision that could not be resolved.
struct CollisionError : Error {
    using Error::Error;
};

/// Duplicate DocID fed to a structure that requires unique ids.
struct DuplicateDocIdError : Error {
    using Error::Error;
};

/// Metric requested for a query with no (positively) judged documents.
struct UndefinedMetricError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace pag
