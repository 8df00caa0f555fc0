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
#include <string>
#include <vector>

#include "pag/config.hpp"
#include "pag/decoder.hpp"
#include "pag/eval.hpp"
#include "pag/io.hpp"
#include "pag/prefix_tree.hpp"
#include "pag/sparse.hpp"
#include "pag/synth.hpp"

namespace pag {

enum class QueryMode { kBrute, kBeam, kPag };
QueryMode query_mode_from_string(std::string_view name);
std::string_view to_string(QueryMode mode);

/// Generates the synthetic corpus and writes the corpus artifact files.
void cmd_gen_corpus(const ExperimentConfig& cfg);

/// Trains codebooks, assigns unique sequential DocIDs, extracts set-based
/// DocIDs, and writes codebooks/docids/set-docids plus the manifest.
/// Returns the number of documents that needed set-DocID padding.
std::size_t cmd_build_index(const ExperimentConfig& cfg);

/// Everything query execution needs, loaded from the artifact files. The
/// manifest hash is checked against cfg before anything is read.
struct LoadedIndex {
    CodebookSet codebooks;
    std::vector<SequentialDocId> docids;
    std::vector<SetDocId> set_docids;
    PrefixTree tree;
    InvertedIndex inverted;
    std::vector<float> doc_vectors;
    std::vector<SparseVector> doc_terms;
    std::vector<float> query_vectors;
    std::vector<SparseVector> query_terms;
    std::uint32_t dim = 0;

    QueryEncoding query_encoding(std::uint32_t qi) const;
    std::uint32_t query_count() const {
        return dim == 0 ? 0 : static_cast<std::uint32_t>(query_vectors.size() / dim);
    }
};

LoadedIndex load_index(const ExperimentConfig& cfg);

struct LatencyStats {
    double mean_ms = 0.0;
    double p50_ms = 0.0;
    double p95_ms = 0.0;
};

LatencyStats latency_stats(std::vector<double> per_query_ms);

struct QueryRunResult {
    RunFile run;
    LatencyStats decode;  // whole decode step per query
    LatencyStats simul;   // pag only: simultaneous scoring stage
    LatencyStats seq;     // pag only: prior build + guided beam
};

/// Runs all loaded queries in the given mode. brute honors combine_simul;
/// beam/pag use cfg.k (and cfg.n for the pag prior pool). With parallel set,
/// queries run concurrently over the immutable index; results are identical,
/// only throughput changes.
QueryRunResult run_queries(const ExperimentConfig& cfg, const LoadedIndex& index,
                           QueryMode mode, bool combine_simul = false,
                           bool parallel = false);

struct SweepCell {
    std::string mode;
    std::uint32_t m = 0;
    std::uint32_t k = 0;
    double mrr10 = 0.0;
    double recall10 = 0.0;
    LatencyStats decode;
    LatencyStats simul;
    LatencyStats seq;
    std::string status = "ok";
};

/// Grid over m and k values, running vanilla beam and planning-ahead per
/// cell. Failures are recorded in the cell status and the sweep continues.
std::vector<SweepCell> cmd_sweep(const ExperimentConfig& cfg,
                                 const std::vector<std::uint32_t>& k_values,
                                 const std::vector<std::uint32_t>& m_values,
                                 const std::filesystem::path& out_tsv);

struct EvalSummary {
    double mrr = 0.0;
    double recall = 0.0;
    double ndcg = 0.0;
    std::size_t query_count = 0;
    std::size_t skipped = 0;  // queries without positive qrels
};

/// Mean MRR/Recall/NDCG at k over the run's queries that appear in qrels.
EvalSummary cmd_eval(const std::filesystem::path& run_path,
                     const std::filesystem::path& qrels_path, std::size_t k);

}  // namespace pag
