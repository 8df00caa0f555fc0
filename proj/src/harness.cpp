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

#include "pag/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include "pag/parallel.hpp"

namespace pag {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Runs cap at TREC's customary depth so brute-force runs stay reviewable.
constexpr std::size_t kRunDepth = 1000;

Ranking truncated(Ranking r) {
    if (r.size() > kRunDepth) {
        r.resize(kRunDepth);
    }
    return r;
}

}  // namespace

QueryMode query_mode_from_string(std::string_view name) {
    if (name == "brute") {
        return QueryMode::kBrute;
    }
    if (name == "beam") {
        return QueryMode::kBeam;
    }
    if (name == "pag") {
        return QueryMode::kPag;
    }
    throw ValidationError("unknown query mode: " + std::string(name));
}

std::string_view to_string(QueryMode mode) {
    switch (mode) {
        case QueryMode::kBrute:
            return "brute";
        case QueryMode::kBeam:
            return "beam";
        default:
            return "pag";
    }
}

void cmd_gen_corpus(const ExperimentConfig& cfg) {
    const SyntheticCorpus corpus = gen_corpus(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    write_vectors({corpus.doc_count(), corpus.dim, corpus.doc_vectors},
                  cfg.corpus_vectors_path());
    write_sparse_vectors(corpus.doc_terms, cfg.corpus_terms_path());
    write_vectors({corpus.query_count(), corpus.dim, corpus.query_vectors},
                  cfg.query_vectors_path());
    write_sparse_vectors(corpus.query_terms, cfg.query_terms_path());
    write_qrels(corpus.qrels, cfg.qrels_path());
}

std::size_t cmd_build_index(const ExperimentConfig& cfg) {
    cfg.validate();
    const VectorFile vectors = read_vectors(cfg.corpus_vectors_path());
    if (vectors.dim != cfg.D) {
        throw ValidationError("build-index: corpus dimension does not match config D");
    }
    const std::vector<SparseVector> terms = read_sparse_vectors(cfg.corpus_terms_path());
    if (terms.size() != vectors.count) {
        throw ValidationError("build-index: term and vector counts differ");
    }

    RqTrainParams params;
    params.levels = cfg.L;
    params.codebook_size = cfg.V;
    params.kmeans_iters = cfg.kmeans_iters;
    params.seed = cfg.seed;
    const CodebookSet cb = rq_train(vectors.values, vectors.count, vectors.dim, params);
    const std::vector<SequentialDocId> docids =
        assign_unique_docids(vectors.values, vectors.count, cb);

    std::size_t padded_docs = 0;
    std::vector<SetDocId> set_docids;
    set_docids.reserve(terms.size());
    for (const auto& t : terms) {
        bool padded = false;
        set_docids.push_back(extract_set_docid(t, cfg.m, &padded));
        if (padded) {
            ++padded_docs;
        }
    }

    write_codebooks(cb, cfg.codebooks_path());
    write_docids(docids, cfg.docids_path());
    write_set_docids(set_docids, cfg.V_T, cfg.set_docids_path());
    write_manifest(cfg, cfg.manifest_path());
    return padded_docs;
}

QueryEncoding LoadedIndex::query_encoding(std::uint32_t qi) const {
    QueryEncoding q;
    q.query_id = "q" + std::to_string(qi);
    q.dense.assign(query_vectors.begin() + static_cast<std::size_t>(qi) * dim,
                   query_vectors.begin() + static_cast<std::size_t>(qi + 1) * dim);
    q.sparse = query_terms[qi];
    return q;
}

LoadedIndex load_index(const ExperimentConfig& cfg) {
    cfg.validate();
    check_manifest(cfg, cfg.manifest_path());
    LoadedIndex index;
    index.codebooks = read_codebooks(cfg.codebooks_path());
    index.docids = read_docids(cfg.docids_path());
    SetDocIdFile sets = read_set_docids(cfg.set_docids_path());
    index.set_docids = std::move(sets.ids);

    const VectorFile vectors = read_vectors(cfg.corpus_vectors_path());
    index.doc_vectors = vectors.values;
    index.dim = vectors.dim;
    index.doc_terms = read_sparse_vectors(cfg.corpus_terms_path());
    const VectorFile queries = read_vectors(cfg.query_vectors_path());
    index.query_vectors = queries.values;
    index.query_terms = read_sparse_vectors(cfg.query_terms_path());

    if (index.docids.size() != vectors.count || index.set_docids.size() != vectors.count) {
        throw ValidationError("load_index: artifact document counts disagree");
    }
    index.tree = PrefixTree::build(index.docids);
    index.inverted = build_inverted_index(index.set_docids, sets.vocab_size);
    return index;
}

LatencyStats latency_stats(std::vector<double> per_query_ms) {
    LatencyStats stats;
    if (per_query_ms.empty()) {
        return stats;
    }
    double total = 0.0;
    for (const double v : per_query_ms) {
        total += v;
    }
    stats.mean_ms = total / static_cast<double>(per_query_ms.size());
    std::sort(per_query_ms.begin(), per_query_ms.end());
    const auto nearest_rank = [&](double p) {
        const std::size_t r = static_cast<std::size_t>(
            std::ceil(p * static_cast<double>(per_query_ms.size())));
        return per_query_ms[std::max<std::size_t>(r, 1) - 1];
    };
    stats.p50_ms = nearest_rank(0.50);
    stats.p95_ms = nearest_rank(0.95);
    return stats;
}

QueryRunResult run_queries(const ExperimentConfig& cfg, const LoadedIndex& index,
                           QueryMode mode, bool combine_simul, bool parallel) {
    cfg.validate();
    const ScorerConfig scorer_cfg = cfg.scorer_config();
    const std::uint32_t query_count = index.query_count();
    QueryRunResult result;
    result.run.tag = cfg.run_tag;
    result.run.queries.resize(query_count);

    std::vector<double> decode_ms(query_count, 0.0);
    std::vector<double> simul_ms(query_count, 0.0);
    std::vector<double> seq_ms(query_count, 0.0);

    const auto run_one = [&](std::size_t qi) {
        const QueryEncoding q = index.query_encoding(static_cast<std::uint32_t>(qi));
        Ranking ranking;
        const auto t0 = Clock::now();
        switch (mode) {
            case QueryMode::kBrute: {
                std::vector<double> simul;
                if (combine_simul) {
                    simul.resize(index.docids.size());
                    for (std::size_t d = 0; d < index.set_docids.size(); ++d) {
                        simul[d] = simul_score(q.sparse, index.set_docids[d]);
                    }
                }
                ranking = brute_force_decode(q, index.docids, index.codebooks, scorer_cfg,
                                             simul);
                break;
            }
            case QueryMode::kBeam: {
                ranking = constrained_beam_search(q, index.tree, index.codebooks,
                                                  scorer_cfg, cfg.k);
                break;
            }
            case QueryMode::kPag: {
                const auto t_simul = Clock::now();
                const Ranking topn = topn_simul(q.sparse, index.inverted, cfg.n);
                simul_ms[qi] = ms_since(t_simul);
                const auto t_seq = Clock::now();
                const PrefixPrior prior = build_prefix_prior(
                    topn, index.docids, index.tree,
                    prior_aggregation_from_string(cfg.prior_agg));
                ranking = planning_ahead_search(q, index.tree, index.codebooks, scorer_cfg,
                                                prior, cfg.k);
                seq_ms[qi] = ms_since(t_seq);
                break;
            }
        }
        decode_ms[qi] = ms_since(t0);
        result.run.queries[qi] = {q.query_id, truncated(std::move(ranking))};
    };

    if (parallel) {
        parallel_for(query_count, 0, run_one);
    } else {
        for (std::uint32_t qi = 0; qi < query_count; ++qi) {
            run_one(qi);
        }
    }

    result.decode = latency_stats(std::move(decode_ms));
    if (mode == QueryMode::kPag) {
        result.simul = latency_stats(std::move(simul_ms));
        result.seq = latency_stats(std::move(seq_ms));
    }
    return result;
}

namespace {

double mean_metric(const RunFile& run, const QrelSet& qrels, std::size_t k,
                   double (*metric)(const Ranking&, const QrelSet&, const std::string&,
                                    std::size_t)) {
    double total = 0.0;
    std::size_t count = 0;
    for (const auto& [qid, ranking] : run.queries) {
        if (qrels.relevant_count(qid) == 0) {
            continue;
        }
        total += metric(ranking, qrels, qid, k);
        ++count;
    }
    return count == 0 ? 0.0 : total / static_cast<double>(count);
}

}  // namespace

std::vector<SweepCell> cmd_sweep(const ExperimentConfig& cfg,
                                 const std::vector<std::uint32_t>& k_values,
                                 const std::vector<std::uint32_t>& m_values,
                                 const std::filesystem::path& out_tsv) {
    if (k_values.empty() || m_values.empty()) {
        throw ValidationError("sweep: need at least one k and one m value");
    }
    const QrelSet qrels = read_qrels(cfg.qrels_path());
    std::vector<SweepCell> cells;
    for (const std::uint32_t m : m_values) {
        ExperimentConfig cell_cfg = cfg;
        cell_cfg.m = m;
        LoadedIndex index;
        bool index_ok = true;
        std::string index_error;
        try {
            // Set-based DocIDs depend on m; rebuild them from the corpus
            // terms instead of the stored PAGS artifact.
            index = load_index(cfg);
            index.set_docids.clear();
            index.set_docids.reserve(index.doc_terms.size());
            for (const auto& t : index.doc_terms) {
                index.set_docids.push_back(extract_set_docid(t, m));
            }
            index.inverted = build_inverted_index(index.set_docids,
                                                  index.inverted.vocab_size);
        } catch (const std::exception& e) {
            index_ok = false;
            index_error = e.what();
        }
        for (const std::uint32_t k : k_values) {
            for (const QueryMode mode : {QueryMode::kBeam, QueryMode::kPag}) {
                SweepCell cell;
                cell.mode = to_string(mode);
                cell.m = m;
                cell.k = k;
                if (!index_ok) {
                    cell.status = "error: " + index_error;
                    cells.push_back(cell);
                    continue;
                }
                try {
                    ExperimentConfig run_cfg = cell_cfg;
                    run_cfg.k = k;
                    const QueryRunResult res = run_queries(run_cfg, index, mode);
                    cell.mrr10 = mean_metric(res.run, qrels, 10, mrr_at_k);
                    cell.recall10 = mean_metric(res.run, qrels, 10, recall_at_k);
                    cell.decode = res.decode;
                    cell.simul = res.simul;
                    cell.seq = res.seq;
                } catch (const std::exception& e) {
                    cell.status = std::string("error: ") + e.what();
                }
                cells.push_back(cell);
            }
        }
    }

    std::ofstream out(out_tsv);
    if (!out) {
        throw IoError("sweep: cannot open output file " + out_tsv.string());
    }
    out << "mode\tm\tk\tmrr10\trecall10\tmean_ms\tp50_ms\tp95_ms\tsimul_ms\tseq_ms\t"
           "status\n";
    char buf[256];
    for (const SweepCell& c : cells) {
        std::snprintf(buf, sizeof(buf),
                      "%s\t%u\t%u\t%.6f\t%.6f\t%.3f\t%.3f\t%.3f\t%.3f\t%.3f\t%s\n",
                      c.mode.c_str(), c.m, c.k, c.mrr10, c.recall10, c.decode.mean_ms,
                      c.decode.p50_ms, c.decode.p95_ms, c.simul.mean_ms, c.seq.mean_ms,
                      c.status.c_str());
        out << buf;
    }
    if (!out) {
        throw IoError("sweep: write failed for " + out_tsv.string());
    }
    return cells;
}

EvalSummary cmd_eval(const std::filesystem::path& run_path,
                     const std::filesystem::path& qrels_path, std::size_t k) {
    const RunFile run = read_run(run_path);
    const QrelSet qrels = read_qrels(qrels_path);
    EvalSummary summary;
    double mrr = 0.0, recall = 0.0, ndcg = 0.0;
    for (const auto& [qid, ranking] : run.queries) {
        if (qrels.relevant_count(qid) == 0) {
            ++summary.skipped;
            continue;
        }
        mrr += mrr_at_k(ranking, qrels, qid, k);
        recall += recall_at_k(ranking, qrels, qid, k);
        ndcg += ndcg_at_k(ranking, qrels, qid, k);
        ++summary.query_count;
    }
    if (summary.query_count > 0) {
        summary.mrr = mrr / static_cast<double>(summary.query_count);
        summary.recall = recall / static_cast<double>(summary.query_count);
        summary.ndcg = ndcg / static_cast<double>(summary.query_count);
    }
    return summary;
}

}  // namespace pag
