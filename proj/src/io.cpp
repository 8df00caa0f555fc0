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

#include "pag/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

namespace pag {

namespace {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

constexpr std::uint32_t bswap32(std::uint32_t v) {
    return ((v & 0x000000ffu) << 24) | ((v & 0x0000ff00u) << 8) |
           ((v & 0x00ff0000u) >> 8) | ((v & 0xff000000u) >> 24);
}

class Writer {
public:
    Writer(const std::filesystem::path& path, const char magic[4]) : path_(path) {
        out_.open(path, std::ios::binary | std::ios::trunc);
        if (!out_) {
            throw IoError("cannot open for writing: " + path.string());
        }
        out_.write(magic, 4);
        put_u32(kFormatVersion);
    }

    void put_u32(std::uint32_t v) {
        if constexpr (std::endian::native == std::endian::big) {
            v = bswap32(v);
        }
        out_.write(reinterpret_cast<const char*>(&v), sizeof(v));
    }

    void put_f32(float f) {
        std::uint32_t bits;
        std::memcpy(&bits, &f, sizeof(bits));
        put_u32(bits);
    }

    void put_f32_block(const float* data, std::size_t n) {
        if constexpr (std::endian::native == std::endian::little) {
            out_.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(
                                                                n * sizeof(float)));
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                put_f32(data[i]);
            }
        }
    }

    void put_u32_block(const std::uint32_t* data, std::size_t n) {
        if constexpr (std::endian::native == std::endian::little) {
            out_.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(
                                                                n * sizeof(std::uint32_t)));
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                put_u32(data[i]);
            }
        }
    }

    void finish() {
        out_.flush();
        if (!out_) {
            throw IoError("write failed: " + path_.string());
        }
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

class Reader {
public:
    Reader(const std::filesystem::path& path, const char magic[4]) : path_(path) {
        in_.open(path, std::ios::binary);
        if (!in_) {
            throw IoError("cannot open for reading: " + path.string());
        }
        char got[4];
        in_.read(got, 4);
        if (!in_ || std::memcmp(got, magic, 4) != 0) {
            throw IoError("bad magic in " + path.string() + " (expected " +
                          std::string(magic, 4) + ")");
        }
        const std::uint32_t version = get_u32();
        if (version != kFormatVersion) {
            throw IoError("unsupported format version in " + path.string());
        }
    }

    std::uint32_t get_u32() {
        std::uint32_t v;
        in_.read(reinterpret_cast<char*>(&v), sizeof(v));
        if (!in_) {
            throw IoError("truncated file: " + path_.string());
        }
        if constexpr (std::endian::native == std::endian::big) {
            v = bswap32(v);
        }
        return v;
    }

    float get_f32() {
        const std::uint32_t bits = get_u32();
        float f;
        std::memcpy(&f, &bits, sizeof(f));
        return f;
    }

    void get_f32_block(float* data, std::size_t n) {
        if constexpr (std::endian::native == std::endian::little) {
            in_.read(reinterpret_cast<char*>(data),
                     static_cast<std::streamsize>(n * sizeof(float)));
            if (!in_) {
                throw IoError("truncated file: " + path_.string());
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                data[i] = get_f32();
            }
        }
    }

    void get_u32_block(std::uint32_t* data, std::size_t n) {
        if constexpr (std::endian::native == std::endian::little) {
            in_.read(reinterpret_cast<char*>(data),
                     static_cast<std::streamsize>(n * sizeof(std::uint32_t)));
            if (!in_) {
                throw IoError("truncated file: " + path_.string());
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                data[i] = get_u32();
            }
        }
    }

private:
    std::filesystem::path path_;
    std::ifstream in_;
};

}  // namespace

void write_codebooks(const CodebookSet& cb, const std::filesystem::path& path) {
    cb.validate();
    Writer w(path, "PAGC");
    w.put_u32(cb.levels);
    w.put_u32(cb.codebook_size);
    w.put_u32(cb.dim);
    w.put_f32_block(cb.tables.data(), cb.tables.size());
    w.finish();
}

CodebookSet read_codebooks(const std::filesystem::path& path) {
    Reader r(path, "PAGC");
    const std::uint32_t L = r.get_u32();
    const std::uint32_t V = r.get_u32();
    const std::uint32_t D = r.get_u32();
    CodebookSet cb(L, V, D);
    r.get_f32_block(cb.tables.data(), cb.tables.size());
    cb.validate();
    return cb;
}

void write_docids(const std::vector<SequentialDocId>& ids,
                  const std::filesystem::path& path) {
    const std::uint32_t L = ids.empty() ? 0 : static_cast<std::uint32_t>(ids[0].size());
    for (const auto& id : ids) {
        if (id.size() != L) {
            throw ValidationError("write_docids: mixed DocID lengths");
        }
    }
    Writer w(path, "PAGI");
    w.put_u32(static_cast<std::uint32_t>(ids.size()));
    w.put_u32(L);
    for (const auto& id : ids) {
        w.put_u32_block(id.data(), id.size());
    }
    w.finish();
}

std::vector<SequentialDocId> read_docids(const std::filesystem::path& path) {
    Reader r(path, "PAGI");
    const std::uint32_t N = r.get_u32();
    const std::uint32_t L = r.get_u32();
    std::vector<SequentialDocId> ids(N, SequentialDocId(L));
    for (auto& id : ids) {
        r.get_u32_block(id.data(), L);
    }
    return ids;
}

void write_set_docids(const std::vector<SetDocId>& ids, std::uint32_t vocab_size,
                      const std::filesystem::path& path) {
    const std::uint32_t m = ids.empty() ? 0 : static_cast<std::uint32_t>(ids[0].size());
    for (const auto& id : ids) {
        if (id.size() != m) {
            throw ValidationError("write_set_docids: inconsistent set size");
        }
        if (!std::is_sorted(id.begin(), id.end())) {
            throw ValidationError("write_set_docids: tokens must be ascending");
        }
    }
    Writer w(path, "PAGS");
    w.put_u32(static_cast<std::uint32_t>(ids.size()));
    w.put_u32(m);
    w.put_u32(vocab_size);
    for (const auto& id : ids) {
        w.put_u32_block(id.data(), id.size());
    }
    w.finish();
}

SetDocIdFile read_set_docids(const std::filesystem::path& path) {
    Reader r(path, "PAGS");
    SetDocIdFile f;
    const std::uint32_t N = r.get_u32();
    f.set_size = r.get_u32();
    f.vocab_size = r.get_u32();
    f.ids.assign(N, SetDocId(f.set_size));
    for (auto& id : f.ids) {
        r.get_u32_block(id.data(), f.set_size);
    }
    return f;
}

void write_vectors(const VectorFile& vf, const std::filesystem::path& path) {
    if (vf.values.size() != static_cast<std::size_t>(vf.count) * vf.dim) {
        throw ValidationError("write_vectors: buffer does not match count*dim");
    }
    Writer w(path, "PAGV");
    w.put_u32(vf.count);
    w.put_u32(vf.dim);
    w.put_f32_block(vf.values.data(), vf.values.size());
    w.finish();
}

VectorFile read_vectors(const std::filesystem::path& path) {
    Reader r(path, "PAGV");
    VectorFile vf;
    vf.count = r.get_u32();
    vf.dim = r.get_u32();
    vf.values.resize(static_cast<std::size_t>(vf.count) * vf.dim);
    r.get_f32_block(vf.values.data(), vf.values.size());
    return vf;
}

void write_sparse_vectors(const std::vector<SparseVector>& vecs,
                          const std::filesystem::path& path) {
    const std::uint32_t vocab = vecs.empty() ? 0 : vecs[0].vocab_size;
    for (const auto& v : vecs) {
        if (v.vocab_size != vocab) {
            throw ValidationError("write_sparse_vectors: mixed vocabulary sizes");
        }
        v.validate();
    }
    Writer w(path, "PAGW");
    w.put_u32(static_cast<std::uint32_t>(vecs.size()));
    w.put_u32(vocab);
    for (const auto& v : vecs) {
        w.put_u32(static_cast<std::uint32_t>(v.entries.size()));
        for (const auto& e : v.entries) {
            w.put_u32(e.token);
            w.put_f32(e.weight);
        }
    }
    w.finish();
}

std::vector<SparseVector> read_sparse_vectors(const std::filesystem::path& path) {
    Reader r(path, "PAGW");
    const std::uint32_t N = r.get_u32();
    const std::uint32_t vocab = r.get_u32();
    std::vector<SparseVector> vecs(N);
    for (auto& v : vecs) {
        v.vocab_size = vocab;
        const std::uint32_t nnz = r.get_u32();
        if (nnz > vocab) {
            // Tokens are distinct and bounded by the vocabulary.
            throw IoError("corrupt sparse-vector file: " + path.string());
        }
        v.entries.resize(nnz);
        for (auto& e : v.entries) {
            e.token = r.get_u32();
            e.weight = r.get_f32();
        }
        v.validate();
    }
    return vecs;
}

}  // namespace pag
