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

#include "pag/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace pag {

ScorerConfig ExperimentConfig::scorer_config() const {
    ScorerConfig sc;
    sc.kind = scorer_kind_from_string(scorer);
    sc.beta = beta;
    sc.seed = seed;
    return sc;
}

void ExperimentConfig::validate() const {
    if (L == 0 || V == 0 || D == 0 || V_T == 0 || m == 0 || n == 0 || k == 0 ||
        docs == 0 || queries == 0 || clusters == 0 || kmeans_iters == 0) {
        throw ValidationError("config: all counts must be positive");
    }
    if (m > V_T) {
        throw ValidationError("config: m cannot exceed V_T");
    }
    if (k > docs) {
        throw ValidationError("config: beam size k cannot exceed the corpus size");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw ValidationError("config: sigma must be finite and >= 0");
    }
    if (prior_agg != "max" && prior_agg != "mean" && prior_agg != "min") {
        throw ValidationError("config: prior_agg must be max, mean or min");
    }
    scorer_config().validate();
}

std::uint64_t ExperimentConfig::index_hash() const {
    std::ostringstream canon;
    canon << "L=" << L << ";V=" << V << ";D=" << D << ";V_T=" << V_T << ";m=" << m
          << ";iters=" << kmeans_iters << ";seed=" << seed << ";docs=" << docs
          << ";queries=" << queries << ";clusters=" << clusters << ";sigma=" << sigma;
    std::uint64_t h = 1469598103934665603ull;
    for (const char c : canon.str()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value) {
    const auto as_u32 = [&](const char* what) {
        try {
            const unsigned long v = std::stoul(value);
            if (v == 0 || v > 0xffffffffull) {
                throw std::out_of_range(what);
            }
            return static_cast<std::uint32_t>(v);
        } catch (const std::exception&) {
            throw ValidationError(std::string("config: bad value for ") + what + ": " +
                                  value);
        }
    };
    const auto as_u64 = [&](const char* what) {
        try {
            return static_cast<std::uint64_t>(std::stoull(value));
        } catch (const std::exception&) {
            throw ValidationError(std::string("config: bad value for ") + what + ": " +
                                  value);
        }
    };
    const auto as_double = [&](const char* what) {
        try {
            return std::stod(value);
        } catch (const std::exception&) {
            throw ValidationError(std::string("config: bad value for ") + what + ": " +
                                  value);
        }
    };

    if (key == "L") {
        cfg.L = as_u32("L");
    } else if (key == "V") {
        cfg.V = as_u32("V");
    } else if (key == "D") {
        cfg.D = as_u32("D");
    } else if (key == "V_T") {
        cfg.V_T = as_u32("V_T");
    } else if (key == "m") {
        cfg.m = as_u32("m");
    } else if (key == "kmeans_iters") {
        cfg.kmeans_iters = as_u32("kmeans_iters");
    } else if (key == "n") {
        cfg.n = as_u32("n");
    } else if (key == "k") {
        cfg.k = as_u32("k");
    } else if (key == "prior_agg") {
        if (value != "max" && value != "mean" && value != "min") {
            throw ValidationError("config: prior_agg must be max, mean or min");
        }
        cfg.prior_agg = value;
    } else if (key == "scorer") {
        scorer_kind_from_string(value);  // reject unknown names early
        cfg.scorer = value;
    } else if (key == "beta") {
        cfg.beta = as_double("beta");
    } else if (key == "seed") {
        cfg.seed = as_u64("seed");
    } else if (key == "docs") {
        cfg.docs = as_u32("docs");
    } else if (key == "queries") {
        cfg.queries = as_u32("queries");
    } else if (key == "clusters") {
        cfg.clusters = as_u32("clusters");
    } else if (key == "sigma") {
        cfg.sigma = as_double("sigma");
    } else if (key == "out_dir") {
        cfg.out_dir = value;
    } else if (key == "run_tag") {
        cfg.run_tag = value;
    } else {
        throw ValidationError("config: unknown key: " + key);
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config: " + path.string());
    }
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) {
                return std::string();
            }
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) {
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw IoError("config: expected key=value at " + path.string() + ":" +
                          std::to_string(lineno));
        }
        apply_override(cfg, strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return cfg;
}

void write_manifest(const ExperimentConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open manifest for writing: " + path.string());
    }
    out << "index_hash=" << cfg.index_hash() << '\n';
    out << "L=" << cfg.L << '\n';
    out << "V=" << cfg.V << '\n';
    out << "D=" << cfg.D << '\n';
    out << "V_T=" << cfg.V_T << '\n';
    out << "m=" << cfg.m << '\n';
    out << "docs=" << cfg.docs << '\n';
    out << "seed=" << cfg.seed << '\n';
    if (!out) {
        throw IoError("manifest write failed: " + path.string());
    }
}

void check_manifest(const ExperimentConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("missing manifest (run build-index first): " + path.string());
    }
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("index_hash=", 0) == 0) {
            const std::uint64_t stored = std::stoull(line.substr(11));
            if (stored != cfg.index_hash()) {
                throw ValidationError(
                    "manifest hash mismatch: artifacts in " + path.parent_path().string() +
                    " were built with a different configuration");
            }
            return;
        }
    }
    throw IoError("manifest missing index_hash: " + path.string());
}

}  // namespace pag
