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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "crisiscnn/textprep.hpp"

namespace crisiscnn::corpus {

using textprep::TokenSeq;

/// Ordered class names. The position of a name is its label index.
class LabelSchema {
 public:
  LabelSchema() = default;
  /// Throws Error if fewer than two classes or a name repeats.
  explicit LabelSchema(std::vector<std::string> classes);

  std::size_t size() const noexcept { return classes_.size(); }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::string& name(std::size_t index) const { return classes_.at(index); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// The six classes of the crisis annotation scheme.
  static LabelSchema crisis_default();
  /// Informative (0) / Not informative (1).
  static LabelSchema binary();

  /// One class per line; blank lines and '#' comments are skipped.
  static LabelSchema load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  friend bool operator==(const LabelSchema&, const LabelSchema&) = default;

 private:
  std::vector<std::string> classes_;
};

inline constexpr std::string_view kNotInformativeClass = "Not related or irrelevant";

enum class Origin : std::uint8_t { event, out_of_event };

struct LabeledExample {
  std::string id;
  TokenSeq tokens;
  std::size_t label = 0;
  Origin origin = Origin::event;
};

struct DatasetSplit {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> validation;
  std::vector<LabeledExample> test;
};

struct TsvOptions {
  bool has_header = false;
  Origin origin = Origin::event;
};

/// Reads `id<TAB>text<TAB>label` rows; text is normalized and tokenized.
/// Throws ParseError naming the line for bad column counts or labels.
std::vector<LabeledExample> load_tsv(const std::filesystem::path& path, const LabelSchema& schema,
                                     const TsvOptions& options = {});

/// Writes rows in the load_tsv format; text is the tokens joined by spaces.
void write_tsv(const std::filesystem::path& path, const std::vector<LabeledExample>& examples,
               const LabelSchema& schema);

/// Maps every class except `negative_class` to Informative (0) and the
/// negative class to Not informative (1).
std::pair<std::vector<LabeledExample>, LabelSchema> merge_to_binary(
    std::vector<LabeledExample> examples, const LabelSchema& schema,
    std::string_view negative_class = kNotInformativeClass);

using SplitFractions = std::array<double, 3>;
inline constexpr SplitFractions kDefaultFractions{0.70, 0.10, 0.20};

/// Per-class seeded shuffle, then validation/test take round(frac * n_c)
/// examples each and train takes the rest. Every class needs >= 3 examples.
DatasetSplit stratified_split(const std::vector<LabeledExample>& examples,
                              const LabelSchema& schema, std::uint64_t seed,
                              SplitFractions fractions = kDefaultFractions);

/// Word-type vocabulary with PAD = 0 and UNK = 1.
class Vocabulary {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnk = 1;
  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kUnkToken = "<unk>";

  Vocabulary();

  /// Rebuilds a vocabulary from its ranked (non-reserved) tokens.
  Vocabulary(std::vector<std::string> ranked_tokens, std::vector<std::uint64_t> frequencies,
             double coverage_percent);

  std::size_t size() const noexcept { return tokens_.size(); }
  std::size_t index_of(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string& token(std::size_t index) const { return tokens_.at(index); }
  std::uint64_t frequency(std::size_t index) const { return freqs_.at(index); }
  double coverage_percent() const noexcept { return coverage_; }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::vector<std::uint64_t>& frequencies() const noexcept { return freqs_; }

  /// Token ids padded with PAD or truncated to exactly `length`.
  std::vector<std::size_t> encode(const TokenSeq& tokens, std::size_t length) const;

  /// TSV: index, token, frequency.
  void save(const std::filesystem::path& path) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.freqs_ == b.freqs_ && a.coverage_ == b.coverage_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> freqs_;
  std::unordered_map<std::string, std::size_t> index_;
  double coverage_ = 100.0;
};

/// Keeps the ceil(P/100 * #types) most frequent training word types; ties
/// are broken lexicographically. P must lie in (0, 100].
Vocabulary build_vocab(const std::vector<LabeledExample>& train, double percent);

}  // namespace crisiscnn::corpus
