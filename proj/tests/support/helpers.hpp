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

#include <unistd.h>

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "crisiscnn/config.hpp"
#include "crisiscnn/io.hpp"
#include "crisiscnn/numerics.hpp"

namespace crisiscnn::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("crisiscnn-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    io::write_file_atomic(path_ / name, content);
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

/// Random UTF-8 text biased towards the characters normalization cares
/// about: case, digits, runs, URLs, mentions, kept/removed punctuation,
/// non-ASCII letters, symbols and the odd invalid byte.
inline std::string random_text(Rng& rng, std::size_t max_pieces = 24) {
  static const char* const pieces[] = {
      "a", "b", "z", "A", "Q", "D", "d", "0", "7", "9", " ", "  ", "\t", "\n", ".", ";", "?",
      "!", ",", ":", "(", ")", "#", "@", "_", "-", "/", "'", "\"", "$", "%", "&", "*", "+",
      "=", "[", "]", "~", "^", "\\", "|", "<", ">", "http://x.co/", "HTTPS://A.B/C", "www.",
      "www.ab.cd", "@user", "@U_1", "userID", "HTTP", "http", "é", "É", "ß", "Ω", "ω", "Д",
      "д", "Ё", "ё", "Ÿ", "\xC2\xA1", "\xE2\x80\x94", "\xE2\x80\xA6", "\xE3\x80\x82",
      "\xF0\x9F\x99\x8F", "\xF0\x9F\x98\x80", "\xE4\xB8\xAD", "\xFF", "\xC3", "aaa", "AAAA",
      "!!!", "...", "1111", "DDD", "   ", "ooo", "xx", "::", "@@", "//"};
  constexpr std::size_t n = sizeof(pieces) / sizeof(pieces[0]);
  std::string s;
  const std::size_t count = rng.below(max_pieces + 1);
  for (std::size_t i = 0; i < count; ++i) s += pieces[rng.below(n)];
  return s;
}

/// A CNN/training configuration small enough for unit tests.
inline RunConfig small_config() {
  RunConfig c;
  c.model.max_len = 12;
  c.model.embedding_dim = 8;
  c.model.num_filters = 6;
  c.model.window = 2;
  c.model.pool = 2;
  c.model.dense_units = 8;
  c.training.max_epochs = 4;
  c.training.batch_size = 16;
  c.training.dropout = 0.2;
  c.training.patience = 3;
  c.vocab_percent = 100;
  c.baseline.epochs = 10;
  return c;
}

}  // namespace crisiscnn::testing
