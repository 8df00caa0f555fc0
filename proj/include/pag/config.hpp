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

#include "pag/scorer.hpp"

namespace pag {

/// Experiment hyper-parameters. Flat key=value text on disk; every field can
/// be overridden from the command line.
struct ExperimentConfig {
    // DocID construction
    std::uint32_t L = 8;        // sequential DocID length
    std::uint32_t V = 2048;     // per-position code vocabulary
    std::uint32_t D = 64;       // dense dimension
    std::uint32_t V_T = 4096;   // lexical token vocabulary
    std::uint32_t m = 64;       // set-based DocID size
    std::uint32_t kmeans_iters = 20;

    // Decoding
    std::uint32_t n = 1000;  // simultaneous top-n pool
    std::uint32_t k = 100;   // beam size
    std::string prior_agg = "max";  // prefix-prior aggregation: max | mean | min

    // Scorer surrogate
    std::string scorer = "dot_product";
    double beta = 0.25;
    std::uint64_t seed = 42;

    // Synthetic corpus
    std::uint32_t docs = 10000;
    std::uint32_t queries = 200;
    std::uint32_t clusters = 64;
    double sigma = 0.1;  // dense query noise

    // Output
    std::filesystem::path out_dir = "work";
    std::string run_tag = "pag";

    ScorerConfig scorer_config() const;
    void validate() const;

    /// Hash over the index-shaping fields (corpus + DocID construction);
    /// artifacts record it and query commands refuse a mismatch.
    std::uint64_t index_hash() const;

    // Derived artifact paths.
    std::filesystem::path corpus_vectors_path() const { return out_dir / "corpus_vectors.pagv"; }
    std::filesystem::path corpus_terms_path() const { return out_dir / "corpus_terms.pagw"; }
    std::filesystem::path query_vectors_path() const { return out_dir / "query_vectors.pagv"; }
    std::filesystem::path query_terms_path() const { return out_dir / "query_terms.pagw"; }
    std::filesystem::path qrels_path() const { return out_dir / "qrels.txt"; }
    std::filesystem::path codebooks_path() const { return out_dir / "codebooks.pagc"; }
    std::filesystem::path docids_path() const { return out_dir / "docids.pagi"; }
    std::filesystem::path set_docids_path() const { return out_dir / "set_docids.pags"; }
    std::filesystem::path manifest_path() const { return out_dir / "manifest.txt"; }
};

/// Parses a flat key=value file ('#' starts a comment). Unknown keys throw.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one key=value override; throws ValidationError on unknown keys or
/// unparsable values.
void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value);

void write_manifest(const ExperimentConfig& cfg, const std::filesystem::path& path);

/// Confirms the manifest at `path` matches cfg.index_hash(); throws
/// ValidationError on mismatch and IoError when the manifest is unreadable.
void check_manifest(const ExperimentConfig& cfg, const std::filesystem::path& path);

}  // namespace pag
