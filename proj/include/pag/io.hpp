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

// Binary artifact files. All integers and floats are little-endian; every
// file opens with a four-byte magic and a u32 format version.
//
//   PAGC  codebooks      header {L, V, D},   L*V*D f32, level/code/dim order
//   PAGI  sequential ids header {N, L},      N*L u32, document-major
//   PAGS  set ids        header {N, m, V_T}, N*m u32, per-doc ascending
//   PAGV  dense vectors  header {N, D},      N*D f32, row-major
//   PAGW  sparse weights header {N, V_T},    per doc: u32 nnz, nnz*(u32, f32)

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pag/rq.hpp"
#include "pag/sparse.hpp"
#include "pag/types.hpp"

namespace pag {

inline constexpr std::uint32_t kFormatVersion = 1;

void write_codebooks(const CodebookSet& cb, const std::filesystem::path& path);
CodebookSet read_codebooks(const std::filesystem::path& path);

void write_docids(const std::vector<SequentialDocId>& ids,
                  const std::filesystem::path& path);
std::vector<SequentialDocId> read_docids(const std::filesystem::path& path);

void write_set_docids(const std::vector<SetDocId>& ids, std::uint32_t vocab_size,
                      const std::filesystem::path& path);
struct SetDocIdFile {
    std::uint32_t vocab_size = 0;
    std::uint32_t set_size = 0;
    std::vector<SetDocId> ids;
};
SetDocIdFile read_set_docids(const std::filesystem::path& path);

struct VectorFile {
    std::uint32_t count = 0;
    std::uint32_t dim = 0;
    std::vector<float> values;  // count * dim, row-major
};
void write_vectors(const VectorFile& vf, const std::filesystem::path& path);
VectorFile read_vectors(const std::filesystem::path& path);

void write_sparse_vectors(const std::vector<SparseVector>& vecs,
                          const std::filesystem::path& path);
std::vector<SparseVector> read_sparse_vectors(const std::filesystem::path& path);

}  // namespace pag
