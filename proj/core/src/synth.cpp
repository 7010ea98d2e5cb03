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

#include "crisiscnn/synth.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <string_view>
#include <unordered_set>

#include "crisiscnn/error.hpp"
#include "crisiscnn/io.hpp"
#include "crisiscnn/numerics.hpp"

namespace crisiscnn::synth {

namespace {

constexpr std::string_view kConsonants = "bcfghjklmnprstvwz";
constexpr std::string_view kVowels = "aeiou";
// Word lists are seeded independently of the corpus seed.
constexpr std::uint64_t kLexiconSeed = 0x5EED0001;

std::string pseudo_word(Rng& rng) {
  std::string w;
  const std::size_t syllables = 2 + rng.below(3);
  for (std::size_t i = 0; i < syllables; ++i) {
    w += kConsonants[rng.below(kConsonants.size())];
    w += kVowels[rng.below(kVowels.size())];
  }
  return w;
}

/// `n` distinct pseudo-words not already in `used`.
std::vector<std::string> fresh_words(Rng& rng, std::size_t n,
                                     std::unordered_set<std::string>& used) {
  std::vector<std::string> out;
  while (out.size() < n) {
    std::string w = pseudo_word(rng);
    if (used.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

struct Lexicon {
  std::vector<std::vector<std::string>> event;  // per class
  std::vector<std::vector<std::string>> out;    // per class
  std::vector<std::string> noise;
};

Lexicon build_lexicon(std::size_t classes, const SynthConfig& config) {
  Rng rng(kLexiconSeed);
  std::unordered_set<std::string> used;
  Lexicon lex;
  lex.noise = fresh_words(rng, config.noise_words, used);
  const std::size_t shifted = config.keywords_per_class / 4;
  for (std::size_t c = 0; c < classes; ++c) {
    auto words = fresh_words(rng, config.keywords_per_class, used);
    auto extra = fresh_words(rng, shifted, used);
    lex.event.push_back(words);
    std::copy(extra.begin(), extra.end(), words.end() - static_cast<std::ptrdiff_t>(shifted));
    lex.out.push_back(std::move(words));
  }
  return lex;
}

std::string elongate(const std::string& w, Rng& rng) {
  std::string out;
  const std::size_t at = rng.below(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    out += w[i];
    if (i == at) out.append(2 + rng.below(3), w[i]);
  }
  return out;
}

}  // namespace

std::vector<RawRow> generate(const corpus::LabelSchema& schema, const SynthConfig& config) {
  if (config.noise_fraction < 0.0 || config.noise_fraction >= 1.0) {
    throw Error("noise_fraction must lie in [0, 1)");
  }
  if (config.keywords_per_class < 4 || config.noise_words < 1) {
    throw Error("need at least 4 keywords per class and one noise word");
  }
  if (config.min_tokens < 1 || config.max_tokens < config.min_tokens) {
    throw Error("bad token length range");
  }
  const Lexicon lex = build_lexicon(schema.size(), config);
  const auto& keywords = config.out_of_event ? lex.out : lex.event;

  Rng rng(config.seed);
  std::vector<RawRow> rows;
  rows.reserve(config.count);
  for (std::size_t i = 0; i < config.count; ++i) {
    RawRow row;
    row.id = fmt::format("{}{:06}", config.id_prefix, i + 1);
    row.label = rng.below(schema.size());
    const auto& kw = keywords[row.label];

    std::vector<std::string> words;
    if (rng.uniform() < 0.2) words.push_back(fmt::format("@user{}", rng.below(500)));
    const std::size_t len = config.min_tokens + rng.below(config.max_tokens - config.min_tokens + 1);
    for (std::size_t t = 0; t < len; ++t) {
      std::string w = rng.uniform() < config.noise_fraction ? lex.noise[rng.below(lex.noise.size())]
                                                           : kw[rng.below(kw.size())];
      const double r = rng.uniform();
      if (r < 0.03) {
        w = elongate(w, rng);
      } else if (r < 0.06) {
        w[0] = static_cast<char>(w[0] - 'a' + 'A');
      }
      words.push_back(std::move(w));
      if (rng.uniform() < 0.04) words.push_back(std::to_string(1 + rng.below(999)));
    }
    if (rng.uniform() < 0.3) words.push_back(fmt::format("http://t.co/{:x}", rng.next_u64() >> 40));

    for (std::size_t t = 0; t < words.size(); ++t) {
      if (t > 0) row.text += ' ';
      row.text += words[t];
    }
    const double p = rng.uniform();
    if (p < 0.15) {
      row.text += "!!!";
    } else if (p < 0.25) {
      row.text += " #relief";
    } else if (p < 0.35) {
      row.text += '.';
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string to_tsv(const std::vector<RawRow>& rows, const corpus::LabelSchema& schema) {
  std::string out;
  for (const auto& r : rows) out += fmt::format("{}\t{}\t{}\n", r.id, r.text, schema.name(r.label));
  return out;
}

void write_tsv(const std::filesystem::path& path, const std::vector<RawRow>& rows,
               const corpus::LabelSchema& schema) {
  io::write_file_atomic(path, to_tsv(rows, schema));
}

}  // namespace crisiscnn::synth
