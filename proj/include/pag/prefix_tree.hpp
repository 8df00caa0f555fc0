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
#include <span>
#include <vector>

#include "pag/types.hpp"

namespace pag {

/// Static trie over all sequential DocIDs. Children are stored as sorted
/// contiguous runs in a flat arena; the tree is immutable after build and
/// safe for any number of concurrent readers.
///
/// The masking view of the tree: a prefix is "valid" (mask 0) iff it is a
/// prefix of some stored DocID; everything else is invalid (mask -inf).
/// Invalidity is a flag here, never a large negative float, so no finite
/// score arithmetic can resurrect an invalid prefix.
class PrefixTree {
public:
    using NodeId = std::uint32_t;
    static constexpr NodeId kRoot = 0;
    static constexpr NodeId kNone = 0xffffffffu;

    PrefixTree() = default;

    /// Builds from DocIDs of uniform length. Throws DuplicateDocIdError on a
    /// repeated sequence and ValidationError on mixed lengths.
    static PrefixTree build(std::span<const SequentialDocId> docids);

    std::size_t depth() const { return depth_; }
    std::size_t doc_count() const { return doc_count_; }
    bool empty() const { return doc_count_ == 0; }

    /// Exact set of codes x such that prefix||x extends toward a stored
    /// DocID; empty when the prefix itself is invalid. |prefix| must be < L.
    std::vector<std::uint32_t> valid_extensions(std::span<const std::uint32_t> prefix) const;

    /// Masking predicate over prefixes of length 1..L: true means mask 0
    /// (valid), false means -inf.
    bool valid_prefix(std::span<const std::uint32_t> prefix) const;

    /// Document ordinal stored at a full-length prefix, or kNone.
    std::uint32_t doc_for(std::span<const std::uint32_t> docid) const;

    // Node-level navigation for decoders.
    NodeId find(std::span<const std::uint32_t> prefix) const;  // kNone if absent
    NodeId child(NodeId node, std::uint32_t code) const;       // kNone if absent
    std::span<const std::uint32_t> child_codes(NodeId node) const;
    std::span<const NodeId> child_nodes(NodeId node) const;
    /// Leaf payload: the document ordinal (only meaningful at depth L).
    std::uint32_t doc_at(NodeId node) const { return docs_[node]; }
    std::size_t node_count() const { return first_child_.size(); }

private:
    std::size_t depth_ = 0;
    std::size_t doc_count_ = 0;
    // Node n's children occupy [first_child_[n], first_child_[n] + child_count_[n])
    // in the codes_/child_ids_ arenas, sorted by code.
    std::vector<std::uint32_t> first_child_;
    std::vector<std::uint32_t> child_count_;
    std::vector<std::uint32_t> docs_;
    std::vector<std::uint32_t> codes_;
    std::vector<NodeId> child_ids_;
};

}  // namespace pag
