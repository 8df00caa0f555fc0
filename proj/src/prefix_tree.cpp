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

#include "pag/prefix_tree.hpp"

#include <algorithm>
#include <numeric>

namespace pag {

PrefixTree PrefixTree::build(std::span<const SequentialDocId> docids) {
    PrefixTree tree;
    if (docids.empty()) {
        // Root only; every query reports invalid.
        tree.first_child_ = {0};
        tree.child_count_ = {0};
        tree.docs_ = {kNone};
        return tree;
    }
    const std::size_t depth = docids[0].size();
    if (depth == 0) {
        throw ValidationError("prefix tree: zero-length DocIDs");
    }
    for (const auto& id : docids) {
        if (id.size() != depth) {
            throw ValidationError("prefix tree: mixed DocID lengths");
        }
    }
    tree.depth_ = depth;
    tree.doc_count_ = docids.size();

    // Ordinals sorted by DocID; duplicates become adjacent.
    std::vector<std::uint32_t> order(docids.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return docids[a] < docids[b];
    });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (docids[order[i - 1]] == docids[order[i]]) {
            throw DuplicateDocIdError("prefix tree: duplicate DocID");
        }
    }

    // Breadth-first construction over sorted ranges: a node's range of
    // sorted DocIDs splits into child runs by the code at its level.
    struct Range {
        std::uint32_t node;
        std::uint32_t begin;
        std::uint32_t end;
        std::uint32_t level;
    };
    tree.first_child_.push_back(0);
    tree.child_count_.push_back(0);
    tree.docs_.push_back(kNone);
    std::vector<Range> frontier = {
        {kRoot, 0, static_cast<std::uint32_t>(order.size()), 0}};
    while (!frontier.empty()) {
        std::vector<Range> next;
        for (const Range& r : frontier) {
            if (r.level == depth) {
                tree.docs_[r.node] = order[r.begin];
                continue;
            }
            tree.first_child_[r.node] = static_cast<std::uint32_t>(tree.codes_.size());
            std::uint32_t i = r.begin;
            std::uint32_t children = 0;
            while (i < r.end) {
                const std::uint32_t code = docids[order[i]][r.level];
                std::uint32_t j = i;
                while (j < r.end && docids[order[j]][r.level] == code) {
                    ++j;
                }
                const NodeId child = static_cast<NodeId>(tree.first_child_.size());
                tree.first_child_.push_back(0);
                tree.child_count_.push_back(0);
                tree.docs_.push_back(kNone);
                tree.codes_.push_back(code);
                tree.child_ids_.push_back(child);
                next.push_back({child, i, j, r.level + 1});
                ++children;
                i = j;
            }
            tree.child_count_[r.node] = children;
        }
        frontier = std::move(next);
    }
    return tree;
}

std::span<const std::uint32_t> PrefixTree::child_codes(NodeId node) const {
    return {codes_.data() + first_child_[node], child_count_[node]};
}

std::span<const PrefixTree::NodeId> PrefixTree::child_nodes(NodeId node) const {
    return {child_ids_.data() + first_child_[node], child_count_[node]};
}

PrefixTree::NodeId PrefixTree::child(NodeId node, std::uint32_t code) const {
    const auto codes = child_codes(node);
    const auto it = std::lower_bound(codes.begin(), codes.end(), code);
    if (it == codes.end() || *it != code) {
        return kNone;
    }
    return child_ids_[first_child_[node] + (it - codes.begin())];
}

PrefixTree::NodeId PrefixTree::find(std::span<const std::uint32_t> prefix) const {
    NodeId node = kRoot;
    for (const std::uint32_t code : prefix) {
        node = child(node, code);
        if (node == kNone) {
            return kNone;
        }
    }
    return node;
}

std::vector<std::uint32_t> PrefixTree::valid_extensions(
    std::span<const std::uint32_t> prefix) const {
    if (!empty() && prefix.size() >= depth_) {
        throw ValidationError("valid_extensions: prefix must be shorter than L");
    }
    const NodeId node = find(prefix);
    if (node == kNone) {
        return {};
    }
    const auto codes = child_codes(node);
    return {codes.begin(), codes.end()};
}

bool PrefixTree::valid_prefix(std::span<const std::uint32_t> prefix) const {
    if (empty()) {
        return false;
    }
    if (prefix.empty() || prefix.size() > depth_) {
        throw ValidationError("valid_prefix: length must be in [1, L]");
    }
    return find(prefix) != kNone;
}

std::uint32_t PrefixTree::doc_for(std::span<const std::uint32_t> docid) const {
    if (empty() || docid.size() != depth_) {
        return kNone;
    }
    const NodeId node = find(docid);
    return node == kNone ? kNone : docs_[node];
}

}  // namespace pag
