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

#include "pag/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pag {

int QrelSet::grade(const std::string& query_id, std::uint32_t doc) const {
    const auto qit = by_query.find(query_id);
    if (qit == by_query.end()) {
        return 0;
    }
    const auto dit = qit->second.find(doc);
    return dit == qit->second.end() ? 0 : dit->second;
}

std::size_t QrelSet::relevant_count(const std::string& query_id) const {
    const auto qit = by_query.find(query_id);
    if (qit == by_query.end()) {
        return 0;
    }
    std::size_t n = 0;
    for (const auto& [doc, g] : qit->second) {
        if (g >= 1) {
            ++n;
        }
    }
    return n;
}

double mrr_at_k(const Ranking& ranking, const QrelSet& qrels, const std::string& query_id,
                std::size_t k) {
    if (k == 0) {
        throw ValidationError("mrr_at_k: k must be >= 1");
    }
    const std::size_t lim = std::min(k, ranking.size());
    for (std::size_t r = 0; r < lim; ++r) {
        if (qrels.grade(query_id, ranking[r].doc) >= 1) {
            return 1.0 / static_cast<double>(r + 1);
        }
    }
    return 0.0;
}

double recall_at_k(const Ranking& ranking, const QrelSet& qrels, const std::string& query_id,
                   std::size_t k) {
    if (k == 0) {
        throw ValidationError("recall_at_k: k must be >= 1");
    }
    const std::size_t total = qrels.relevant_count(query_id);
    if (total == 0) {
        throw UndefinedMetricError("recall_at_k: query has no relevant documents");
    }
    const std::size_t lim = std::min(k, ranking.size());
    std::size_t hit = 0;
    for (std::size_t r = 0; r < lim; ++r) {
        if (qrels.grade(query_id, ranking[r].doc) >= 1) {
            ++hit;
        }
    }
    return static_cast<double>(hit) / static_cast<double>(total);
}

double ndcg_at_k(const Ranking& ranking, const QrelSet& qrels, const std::string& query_id,
                 std::size_t k) {
    if (k == 0) {
        throw ValidationError("ndcg_at_k: k must be >= 1");
    }
    const auto qit = qrels.by_query.find(query_id);
    std::vector<int> grades;
    if (qit != qrels.by_query.end()) {
        for (const auto& [doc, g] : qit->second) {
            if (g > 0) {
                grades.push_back(g);
            }
        }
    }
    if (grades.empty()) {
        throw UndefinedMetricError("ndcg_at_k: query has no positively graded documents");
    }
    const std::size_t lim = std::min(k, ranking.size());
    double dcg = 0.0;
    for (std::size_t r = 0; r < lim; ++r) {
        const int g = qrels.grade(query_id, ranking[r].doc);
        if (g > 0) {
            dcg += (std::pow(2.0, g) - 1.0) / std::log2(static_cast<double>(r + 2));
        }
    }
    std::sort(grades.begin(), grades.end(), std::greater<>());
    double idcg = 0.0;
    for (std::size_t r = 0; r < std::min(k, grades.size()); ++r) {
        idcg += (std::pow(2.0, grades[r]) - 1.0) / std::log2(static_cast<double>(r + 2));
    }
    return dcg / idcg;
}

void write_run(const RunFile& run, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("write_run: cannot open " + path.string());
    }
    char score_buf[64];
    for (const auto& [query_id, ranking] : run.queries) {
        std::size_t rank = 1;
        for (const auto& [doc, score] : ranking) {
            std::snprintf(score_buf, sizeof(score_buf), "%.6f", score);
            out << query_id << " Q0 d" << doc << ' ' << rank << ' ' << score_buf << ' '
                << run.tag << '\n';
            ++rank;
        }
    }
    if (!out) {
        throw IoError("write_run: write failed for " + path.string());
    }
}

namespace {

std::uint32_t parse_doc_id(const std::string& token, const std::filesystem::path& path) {
    const std::size_t start = (!token.empty() && token[0] == 'd') ? 1 : 0;
    try {
        return static_cast<std::uint32_t>(std::stoul(token.substr(start)));
    } catch (const std::exception&) {
        throw IoError("bad doc id '" + token + "' in " + path.string());
    }
}

}  // namespace

RunFile read_run(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("read_run: cannot open " + path.string());
    }
    RunFile run;
    std::string line;
    std::string current;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string qid, q0, doc_tok, tag;
        std::size_t rank = 0;
        double score = 0.0;
        if (!(ls >> qid >> q0 >> doc_tok >> rank >> score >> tag)) {
            throw IoError("read_run: malformed line in " + path.string() + ": " + line);
        }
        if (run.queries.empty() || current != qid) {
            run.queries.emplace_back(qid, Ranking{});
            current = qid;
        }
        if (rank != run.queries.back().second.size() + 1) {
            throw IoError("read_run: ranks not contiguous from 1 in " + path.string());
        }
        run.queries.back().second.push_back({parse_doc_id(doc_tok, path), score});
        run.tag = tag;
    }
    return run;
}

void write_qrels(const QrelSet& qrels, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("write_qrels: cannot open " + path.string());
    }
    for (const auto& [qid, docs] : qrels.by_query) {
        std::vector<std::pair<std::uint32_t, int>> sorted(docs.begin(), docs.end());
        std::sort(sorted.begin(), sorted.end());
        for (const auto& [doc, grade] : sorted) {
            out << qid << " 0 d" << doc << ' ' << grade << '\n';
        }
    }
    if (!out) {
        throw IoError("write_qrels: write failed for " + path.string());
    }
}

QrelSet read_qrels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("read_qrels: cannot open " + path.string());
    }
    QrelSet qrels;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string qid, zero, doc_tok;
        int grade = 0;
        if (!(ls >> qid >> zero >> doc_tok >> grade)) {
            throw IoError("read_qrels: malformed line in " + path.string() + ": " + line);
        }
        if (grade < 0) {
            throw IoError("read_qrels: negative grade in " + path.string());
        }
        qrels.by_query[qid][parse_doc_id(doc_tok, path)] = grade;
    }
    return qrels;
}

}  // namespace pag
