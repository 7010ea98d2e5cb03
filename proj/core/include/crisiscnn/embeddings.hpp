// Copyright 2026 The crisiscnn Authors.
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

#include "crisiscnn/corpus.hpp"
#include "crisiscnn/numerics.hpp"

namespace crisiscnn::embeddings {

/// |V| x D look-up table, one row per vocabulary index (PAD and UNK
/// included). The PAD row starts at zero and never receives gradient.
struct EmbeddingTable {
  Matrix matrix;
  bool trainable = true;
  /// Vocabulary rows copied from a pretrained file.
  std::size_t pretrained_rows = 0;
  /// Non-empty when loading produced a warning (e.g. no overlapping words).
  std::string warning;

  std::size_t dim() const noexcept { return matrix.cols(); }
  std::size_t rows() const noexcept { return matrix.rows(); }
};

inline constexpr double kDefaultInitScale = 0.25;

/// Rows other than PAD drawn i.i.d. from U[-scale, scale].
EmbeddingTable random_init(const corpus::Vocabulary& vocab, std::size_t dim, std::uint64_t seed,
                           double scale = kDefaultInitScale);

/// word2vec text format: a "count dim" header, then `word v1 ... vdim` rows.
/// Vocabulary words found in the file are copied; every other row is filled
/// exactly as random_init(vocab, dim, seed) would fill it.
EmbeddingTable load_pretrained(const std::filesystem::path& path, const corpus::Vocabulary& vocab,
                               std::uint64_t seed);

/// Writes the table in word2vec text format (9 significant digits), skipping
/// the reserved PAD/UNK rows.
void save_word2vec(const std::filesystem::path& path, const EmbeddingTable& table,
                   const corpus::Vocabulary& vocab);

/// max_len x D input matrix for an encoded (padded) id sequence.
Matrix lookup_ids(const EmbeddingTable& table, const std::vector<std::size_t>& ids);

/// Encodes `tokens` against `vocab` (UNK for unknown words, PAD beyond the
/// end, truncated past max_len) and gathers the rows.
Matrix lookup(const EmbeddingTable& table, const corpus::TokenSeq& tokens,
              const corpus::Vocabulary& vocab, std::size_t max_len);

}  // namespace crisiscnn::embeddings
