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

#include "crisiscnn/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "crisiscnn/error.hpp"
#include "crisiscnn/io.hpp"
#include "crisiscnn/numerics.hpp"

namespace crisiscnn::corpus {

LabelSchema::LabelSchema(std::vector<std::string> classes) : classes_(std::move(classes)) {
  if (classes_.size() < 2) throw Error("label schema needs at least two classes");
  std::set<std::string_view> seen;
  for (const auto& c : classes_) {
    if (c.empty()) throw Error("label schema contains an empty class name");
    if (!seen.insert(c).second) throw Error(fmt::format("duplicate class name '{}'", c));
  }
}

std::optional<std::size_t> LabelSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    if (classes_[i] == name) return i;
  }
  return std::nullopt;
}

LabelSchema LabelSchema::crisis_default() {
  return LabelSchema({"Affected individual", "Donations and volunteering",
                      "Infrastructure and utilities", "Sympathy and support",
                      "Other useful information", std::string(kNotInformativeClass)});
}

LabelSchema LabelSchema::binary() { return LabelSchema({"Informative", "Not informative"}); }

LabelSchema LabelSchema::load(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  std::vector<std::string> classes;
  for (std::string_view line : io::split_lines(text)) {
    line = io::trim(line);
    if (line.empty() || line.front() == '#') continue;
    classes.emplace_back(line);
  }
  try {
    return LabelSchema(std::move(classes));
  } catch (const Error& e) {
    throw ParseError(path.string(), 0, e.what());
  }
}

void LabelSchema::save(const std::filesystem::path& path) const {
  std::string out;
  for (const auto& c : classes_) out += c + '\n';
  io::write_file_atomic(path, out);
}

std::vector<LabeledExample> load_tsv(const std::filesystem::path& path, const LabelSchema& schema,
                                     const TsvOptions& options) {
  const std::string text = io::read_file(path);
  const auto lines = io::split_lines(text);
  std::vector<LabeledExample> out;
  out.reserve(lines.size());
  for (std::size_t i = options.has_header ? 1 : 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    const auto cols = io::split(lines[i], '\t');
    if (cols.size() != 3) {
      throw ParseError(path.string(), lineno,
                       fmt::format("expected 3 tab-separated columns (id, text, label), found {}",
                                   cols.size()));
    }
    if (cols[0].empty()) throw ParseError(path.string(), lineno, "empty id");
    const auto label = schema.index_of(cols[2]);
    if (!label) {
      throw ParseError(path.string(), lineno, fmt::format("unknown label '{}'", cols[2]));
    }
    out.push_back({std::string(cols[0]), textprep::preprocess(cols[1]), *label, options.origin});
  }
  return out;
}

void write_tsv(const std::filesystem::path& path, const std::vector<LabeledExample>& examples,
               const LabelSchema& schema) {
  std::string out;
  for (const auto& ex : examples) {
    out += ex.id;
    out += '\t';
    for (std::size_t i = 0; i < ex.tokens.size(); ++i) {
      if (i > 0) out += ' ';
      out += ex.tokens[i];
    }
    out += '\t';
    out += schema.name(ex.label);
    out += '\n';
  }
  io::write_file_atomic(path, out);
}

std::pair<std::vector<LabeledExample>, LabelSchema> merge_to_binary(
    std::vector<LabeledExample> examples, const LabelSchema& schema,
    std::string_view negative_class) {
  const auto negative = schema.index_of(negative_class);
  if (!negative) {
    throw Error(fmt::format("schema has no class named '{}' to use as Not informative",
                            negative_class));
  }
  for (auto& ex : examples) ex.label = ex.label == *negative ? 1 : 0;
  return {std::move(examples), LabelSchema::binary()};
}

DatasetSplit stratified_split(const std::vector<LabeledExample>& examples,
                              const LabelSchema& schema, std::uint64_t seed,
                              SplitFractions fractions) {
  const double total = fractions[0] + fractions[1] + fractions[2];
  if (std::abs(total - 1.0) > 1e-9 ||
      std::any_of(fractions.begin(), fractions.end(), [](double f) { return f < 0.0; })) {
    throw Error("split fractions must be non-negative and sum to 1");
  }
  std::vector<std::vector<std::size_t>> by_class(schema.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (examples[i].label >= schema.size()) throw Error("example label outside the schema");
    by_class[examples[i].label].push_back(i);
  }
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    const std::size_t n = by_class[c].size();
    if (n > 0 && n < 3) {
      throw Error(fmt::format("class '{}' has {} example(s); at least 3 are needed to split",
                              schema.name(c), n));
    }
  }

  Rng rng(seed);
  std::vector<std::size_t> train_idx, val_idx, test_idx;
  for (auto& members : by_class) {
    rng.shuffle(members);
    const double n = static_cast<double>(members.size());
    const auto n_val = static_cast<std::size_t>(std::llround(fractions[1] * n));
    const auto n_test = static_cast<std::size_t>(std::llround(fractions[2] * n));
    const std::size_t n_train = members.size() - n_val - n_test;
    auto it = members.begin();
    train_idx.insert(train_idx.end(), it, it + n_train);
    it += n_train;
    val_idx.insert(val_idx.end(), it, it + n_val);
    it += n_val;
    test_idx.insert(test_idx.end(), it, members.end());
  }

  auto gather = [&](std::vector<std::size_t>& idx) {
    std::sort(idx.begin(), idx.end());
    std::vector<LabeledExample> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(examples[i]);
    return out;
  };
  return {gather(train_idx), gather(val_idx), gather(test_idx)};
}

Vocabulary::Vocabulary() : Vocabulary({}, {}, 100.0) {}

Vocabulary::Vocabulary(std::vector<std::string> ranked_tokens,
                       std::vector<std::uint64_t> frequencies, double coverage_percent)
    : coverage_(coverage_percent) {
  if (ranked_tokens.size() != frequencies.size()) {
    throw Error("vocabulary tokens and frequencies differ in length");
  }
  tokens_.reserve(ranked_tokens.size() + 2);
  freqs_.reserve(ranked_tokens.size() + 2);
  tokens_.emplace_back(kPadToken);
  tokens_.emplace_back(kUnkToken);
  freqs_.push_back(0);
  freqs_.push_back(0);
  for (std::size_t i = 0; i < ranked_tokens.size(); ++i) {
    tokens_.push_back(std::move(ranked_tokens[i]));
    freqs_.push_back(frequencies[i]);
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], i).second) {
      throw Error(fmt::format("duplicate vocabulary token '{}'", tokens_[i]));
    }
  }
}

std::size_t Vocabulary::index_of(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() || it->second == kPad ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it != index_.end() && it->second > kUnk;
}

std::vector<std::size_t> Vocabulary::encode(const TokenSeq& tokens, std::size_t length) const {
  std::vector<std::size_t> ids(length, kPad);
  const std::size_t n = std::min(length, tokens.size());
  for (std::size_t i = 0; i < n; ++i) ids[i] = index_of(tokens[i]);
  return ids;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    out += fmt::format("{}\t{}\t{}\n", i, tokens_[i], freqs_[i]);
  }
  io::write_file_atomic(path, out);
}

Vocabulary build_vocab(const std::vector<LabeledExample>& train, double percent) {
  if (!(percent > 0.0 && percent <= 100.0)) {
    throw Error(fmt::format("vocabulary percent must lie in (0, 100], got {}", percent));
  }
  if (train.empty()) throw Error("cannot build a vocabulary from an empty training set");
  std::map<std::string, std::uint64_t> counts;
  for (const auto& ex : train) {
    for (const auto& tok : ex.tokens) ++counts[tok];
  }
  std::vector<std::pair<std::string, std::uint64_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const double wanted = percent * static_cast<double>(ranked.size()) / 100.0;
  const auto keep = std::min(ranked.size(), static_cast<std::size_t>(std::ceil(wanted - 1e-9)));
  std::vector<std::string> tokens;
  std::vector<std::uint64_t> freqs;
  for (std::size_t i = 0; i < keep; ++i) {
    tokens.push_back(std::move(ranked[i].first));
    freqs.push_back(ranked[i].second);
  }
  return Vocabulary(std::move(tokens), std::move(freqs), percent);
}

}  // namespace crisiscnn::corpus
