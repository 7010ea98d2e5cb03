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

#include "crisiscnn/embeddings.hpp"

#include <fmt/format.h>

#include <charconv>

#include "crisiscnn/error.hpp"
#include "crisiscnn/io.hpp"

namespace crisiscnn::embeddings {

using corpus::Vocabulary;

EmbeddingTable random_init(const Vocabulary& vocab, std::size_t dim, std::uint64_t seed,
                           double scale) {
  if (dim == 0) throw Error("embedding dimension must be at least 1");
  EmbeddingTable table;
  table.matrix = Matrix(vocab.size(), dim);
  Rng rng(seed);
  for (std::size_t r = 0; r < vocab.size(); ++r) {
    if (r == Vocabulary::kPad) continue;
    for (double& v : table.matrix.row(r)) v = rng.uniform(-scale, scale);
  }
  return table;
}

namespace {

double parse_double(std::string_view s, const std::string& src, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(src, line, fmt::format("not a number: '{}'", s));
  }
  return v;
}

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  for (auto part : io::split(line, ' ')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

}  // namespace

EmbeddingTable load_pretrained(const std::filesystem::path& path, const Vocabulary& vocab,
                               std::uint64_t seed) {
  const std::string src = path.string();
  const std::string text = io::read_file(path);
  const auto lines = io::split_lines(text);
  if (lines.empty()) throw ParseError(src, 1, "missing 'count dim' header");
  const auto header = fields(lines[0]);
  std::size_t count = 0;
  std::size_t dim = 0;
  if (header.size() != 2 ||
      std::from_chars(header[0].data(), header[0].data() + header[0].size(), count).ec !=
          std::errc() ||
      std::from_chars(header[1].data(), header[1].data() + header[1].size(), dim).ec !=
          std::errc() ||
      dim == 0) {
    throw ParseError(src, 1, "malformed header, expected 'count dim'");
  }

  EmbeddingTable table = random_init(vocab, dim, seed);
  std::vector<bool> filled(vocab.size(), false);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto parts = fields(lines[i]);
    if (parts.empty()) continue;
    if (parts.size() != dim + 1) {
      throw ParseError(src, i + 1,
                       fmt::format("vector has {} values, header says {}", parts.size() - 1, dim));
    }
    const std::string word(parts[0]);
    if (!vocab.contains(word)) continue;
    const std::size_t row = vocab.index_of(word);
    auto dst = table.matrix.row(row);
    for (std::size_t d = 0; d < dim; ++d) dst[d] = parse_double(parts[d + 1], src, i + 1);
    if (!filled[row]) {
      filled[row] = true;
      ++table.pretrained_rows;
    }
  }
  if (table.pretrained_rows == 0) {
    table.warning = fmt::format("no vocabulary word found in '{}'; table is randomly initialized",
                                src);
  }
  return table;
}

void save_word2vec(const std::filesystem::path& path, const EmbeddingTable& table,
                   const Vocabulary& vocab) {
  const std::size_t words = vocab.size() > 2 ? vocab.size() - 2 : 0;
  std::string out = fmt::format("{} {}\n", words, table.dim());
  for (std::size_t r = 2; r < vocab.size(); ++r) {
    out += vocab.token(r);
    for (double v : table.matrix.row(r)) out += fmt::format(" {:.9g}", v);
    out += '\n';
  }
  io::write_file_atomic(path, out);
}

Matrix lookup_ids(const EmbeddingTable& table, const std::vector<std::size_t>& ids) {
  Matrix x(ids.size(), table.dim());
  for (std::size_t t = 0; t < ids.size(); ++t) {
    const auto src = table.matrix.row(ids[t]);
    std::copy(src.begin(), src.end(), x.row(t).begin());
  }
  return x;
}

Matrix lookup(const EmbeddingTable& table, const corpus::TokenSeq& tokens,
              const Vocabulary& vocab, std::size_t max_len) {
  if (max_len == 0) throw Error("lookup length must be at least 1");
  return lookup_ids(table, vocab.encode(tokens, max_len));
}

}  // namespace crisiscnn::embeddings
