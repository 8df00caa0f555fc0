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

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pag/harness.hpp"
#include "pag/kernels.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::vector<std::string> overrides;  // key=value
};

pag::ExperimentConfig resolve_config(const CliOptions& opts) {
    pag::ExperimentConfig cfg;
    if (!opts.config_path.empty()) {
        cfg = pag::load_config(opts.config_path);
    }
    for (const std::string& kv : opts.overrides) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            throw pag::ValidationError("--set expects key=value, got: " + kv);
        }
        pag::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

void add_common(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("-c,--config", opts.config_path, "Flat key=value config file");
    cmd->add_option("-s,--set", opts.overrides,
                    "Override a config key, e.g. --set k=100 (repeatable)");
}

void print_latency(const char* label, const pag::LatencyStats& s) {
    std::printf("%s latency ms: mean=%.3f p50=%.3f p95=%.3f\n", label, s.mean_ms, s.p50_ms,
                s.p95_ms);
}

std::vector<std::uint32_t> parse_u32_list(const std::vector<std::string>& values) {
    std::vector<std::uint32_t> out;
    for (const std::string& v : values) {
        out.push_back(static_cast<std::uint32_t>(std::stoul(v)));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generative-retrieval decoding engine with set-based and sequential "
                 "document identifiers"};
    app.require_subcommand(1);

    CliOptions gen_opts;
    auto* gen = app.add_subcommand("gen-corpus", "Generate a synthetic corpus");
    add_common(gen, gen_opts);

    CliOptions build_opts;
    auto* build = app.add_subcommand("build-index",
                                     "Train codebooks and build DocID artifacts");
    add_common(build, build_opts);

    CliOptions query_opts;
    std::string mode_name = "pag";
    std::string run_out;
    bool combine_simul = false;
    bool parallel = false;
    auto* query = app.add_subcommand("query", "Run all queries in one decoding mode");
    add_common(query, query_opts);
    query->add_option("--mode", mode_name, "brute | beam | pag")->capture_default_str();
    query->add_option("--run", run_out, "Run file output path (default <out_dir>/<mode>.run)");
    query->add_flag("--combine-simul", combine_simul,
                    "brute mode: add simultaneous scores to sequence scores");
    query->add_flag("--parallel", parallel, "Run queries concurrently (throughput only)");

    CliOptions sweep_opts;
    std::vector<std::string> k_list{"10", "100", "1000"};
    std::vector<std::string> m_list{"16", "32", "64", "128"};
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "Metric/latency grid over m and beam size");
    add_common(sweep, sweep_opts);
    sweep->add_option("--k-values", k_list, "Beam sizes")->delimiter(',');
    sweep->add_option("--m-values", m_list, "Set-DocID sizes")->delimiter(',');
    sweep->add_option("--out", sweep_out, "TSV output path (default <out_dir>/sweep.tsv)");

    std::string eval_run, eval_qrels;
    std::size_t eval_k = 10;
    auto* eval = app.add_subcommand("eval", "Score a run file against qrels");
    eval->add_option("--run", eval_run, "Run file")->required();
    eval->add_option("--qrels", eval_qrels, "Qrels file")->required();
    eval->add_option("--k", eval_k, "Cutoff")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const pag::ExperimentConfig cfg = resolve_config(gen_opts);
            cfg.validate();
            pag::cmd_gen_corpus(cfg);
            std::printf("corpus written to %s (docs=%u queries=%u D=%u V_T=%u)\n",
                        cfg.out_dir.string().c_str(), cfg.docs, cfg.queries, cfg.D,
                        cfg.V_T);
        } else if (build->parsed()) {
            const pag::ExperimentConfig cfg = resolve_config(build_opts);
            const std::size_t padded = pag::cmd_build_index(cfg);
            std::printf("index written to %s (L=%u V=%u m=%u)\n",
                        cfg.out_dir.string().c_str(), cfg.L, cfg.V, cfg.m);
            if (padded > 0) {
                std::fprintf(stderr,
                             "warning: %zu documents had fewer than m positive weights "
                             "and were padded\n",
                             padded);
            }
        } else if (query->parsed()) {
            const pag::ExperimentConfig cfg = resolve_config(query_opts);
            const pag::QueryMode mode = pag::query_mode_from_string(mode_name);
            const pag::LoadedIndex index = pag::load_index(cfg);
            const pag::QueryRunResult result =
                pag::run_queries(cfg, index, mode, combine_simul, parallel);
            const std::filesystem::path out = run_out.empty()
                ? cfg.out_dir / (std::string(pag::to_string(mode)) + ".run")
                : std::filesystem::path(run_out);
            pag::write_run(result.run, out);
            std::printf("mode=%s kernels=%s queries=%u run=%s\n",
                        std::string(pag::to_string(mode)).c_str(),
                        pag::kernels::active().name, index.query_count(),
                        out.string().c_str());
            print_latency("decode", result.decode);
            if (mode == pag::QueryMode::kPag) {
                print_latency("simultaneous", result.simul);
                print_latency("sequential", result.seq);
            }
        } else if (sweep->parsed()) {
            const pag::ExperimentConfig cfg = resolve_config(sweep_opts);
            const std::filesystem::path out =
                sweep_out.empty() ? cfg.out_dir / "sweep.tsv"
                                  : std::filesystem::path(sweep_out);
            const auto cells = pag::cmd_sweep(cfg, parse_u32_list(k_list),
                                              parse_u32_list(m_list), out);
            std::printf("%-6s %6s %6s %10s %10s %10s %10s\n", "mode", "m", "k", "mrr10",
                        "recall10", "simul_ms", "seq_ms");
            for (const auto& c : cells) {
                if (c.status != "ok") {
                    std::printf("%-6s %6u %6u  %s\n", c.mode.c_str(), c.m, c.k,
                                c.status.c_str());
                    continue;
                }
                std::printf("%-6s %6u %6u %10.4f %10.4f %10.3f %10.3f\n", c.mode.c_str(),
                            c.m, c.k, c.mrr10, c.recall10, c.simul.mean_ms, c.seq.mean_ms);
            }
            std::printf("table written to %s\n", out.string().c_str());
        } else if (eval->parsed()) {
            const pag::EvalSummary s = pag::cmd_eval(eval_run, eval_qrels, eval_k);
            std::printf("queries=%zu MRR@%zu=%.4f Recall@%zu=%.4f NDCG@%zu=%.4f\n",
                        s.query_count, eval_k, s.mrr, eval_k, s.recall, eval_k, s.ndcg);
            if (s.skipped > 0) {
                std::fprintf(stderr, "warning: %zu queries had no relevant qrels\n",
                             s.skipped);
            }
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
