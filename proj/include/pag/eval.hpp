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
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "pag/types.hpp"

namespace pag {

/// Relevance judgments: (query id, doc ordinal) -> grade >= 0.
struct QrelSet {
    std::map<std::string, std::unordered_map<std::uint32_t, int>> by_query;

    int grade(const std::string& query_id, std::uint32_t doc) const;
    /// Number of docs with grade >= 1 for the query (0 if unknown query).
    std::size_t relevant_count(const std::string& query_id) const;
};

/// Reciprocal rank of the first relevant document within the top k, else 0.
double mrr_at_k(const Ranking& ranking, const QrelSet& qrels, const std::string& query_id,
                std::size_t k);

/// Fraction of the query's relevant documents found in the top k. Throws
/// UndefinedMetricError when the query has no relevant documents.
double recall_at_k(const Ranking& ranking, const QrelSet& qrels, const std::string& query_id,
                   std::size_t k);

/// NDCG with exponential gains (2^grade - 1) / log2(rank + 1), normalized by
/// the ideal DCG at k. Throws UndefinedMetricError when no positive grades.
double ndcg_at_k(const Ranking& ranking, const QrelSet& qrels, const std::string& query_id,
                 std::size_t k);

/// One retrieval run: per query, a ranked (doc, score) list.
struct RunFile {
    std::string tag = "pag";
    std::vector<std::pair<std::string, Ranking>> queries;
};

/// Emits the six-column run format, one line per (query, doc):
///   query_id Q0 d<doc> rank score tag
/// Ranks ascend from 1; scores carry six decimals.
void write_run(const RunFile& run, const std::filesystem::path& path);

RunFile read_run(const std::filesystem::path& path);

/// Four-column qrels: query_id 0 d<doc> grade.
void write_qrels(const QrelSet& qrels, const std::filesystem::path& path);
QrelSet read_qrels(const std::filesystem::path& path);

}  // namespace pag
