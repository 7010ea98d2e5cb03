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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "crisiscnn/corpus.hpp"

namespace crisiscnn::synth {

/// Synthetic crisis-tweet generator. Each class owns a disjoint set of
/// pseudo-word keywords; every token is drawn from the tweet's class set
/// except for a `noise_fraction` share drawn from a vocabulary common to all
/// classes. URLs, mentions, numbers and elongated words are sprinkled in so
/// the text exercises the normalizer.
struct SynthConfig {
  std::size_t count = 2000;
  std::uint64_t seed = 1;
  double noise_fraction = 0.2;
  std::size_t keywords_per_class = 40;
  std::size_t noise_words = 150;
  std::size_t min_tokens = 8;
  std::size_t max_tokens = 18;
  /// Out-of-event data: a quarter of each class's keywords is replaced by
  /// words the event data never uses.
  bool out_of_event = false;
  std::string id_prefix = "tw";
};

struct RawRow {
  std::string id;
  std::string text;
  std::size_t label = 0;
};

/// Classes are drawn uniformly. The keyword sets depend only on the schema
/// size and `keywords_per_class`, so event and out-of-event corpora built
/// with different seeds share their core vocabulary.
std::vector<RawRow> generate(const corpus::LabelSchema& schema, const SynthConfig& config);

/// `id<TAB>text<TAB>label name` rows, no header.
std::string to_tsv(const std::vector<RawRow>& rows, const corpus::LabelSchema& schema);
void write_tsv(const std::filesystem::path& path, const std::vector<RawRow>& rows,
               const corpus::LabelSchema& schema);

}  // namespace crisiscnn::synth
