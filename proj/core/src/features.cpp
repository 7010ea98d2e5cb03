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

#include "crisiscnn/features.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "crisiscnn/error.hpp"

namespace crisiscnn::features {

double SparseVec::dot(std::span<const double> dense) const noexcept {
  double s = 0.0;
  for (const auto& [i, v] : entries) s += v * dense[i];
  return s;
}

std::vector<double> SparseVec::to_dense() const {
  std::vector<double> out(dimension, 0.0);
  for (const auto& [i, v] : entries) out[i] = v;
  return out;
}

std::map<std::string, std::size_t> extract_ngrams(const corpus::TokenSeq& tokens) {
  std::map<std::string, std::size_t> grams;
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string key = tokens[i];
      for (std::size_t k = 1; k < n; ++k) {
        key += ' ';
        key += tokens[i + k];
      }
      ++grams[key];
    }
  }
  return grams;
}

NgramVocab::NgramVocab(std::vector<std::string> ngrams, std::vector<std::uint64_t> doc_freq,
                       std::uint64_t num_docs)
    : ngrams_(std::move(ngrams)), df_(std::move(doc_freq)), num_docs_(num_docs) {
  if (ngrams_.size() != df_.size()) throw Error("n-gram and document-frequency lists differ");
  idf_.reserve(df_.size());
  for (std::size_t i = 0; i < ngrams_.size(); ++i) {
    idf_.push_back(std::log((1.0 + static_cast<double>(num_docs_)) /
                            (1.0 + static_cast<double>(df_[i]))) +
                   1.0);
    if (!index_.emplace(ngrams_[i], i).second) {
      throw Error(fmt::format("duplicate n-gram '{}'", ngrams_[i]));
    }
  }
}

std::size_t NgramVocab::column(const std::string& ngram) const {
  const auto it = index_.find(ngram);
  return it == index_.end() ? ngrams_.size() : it->second;
}

std::string NgramVocab::to_tsv() const {
  std::string out = "ngram\tindex\tdf\tidf\n";
  for (std::size_t i = 0; i < ngrams_.size(); ++i) {
    out += fmt::format("{}\t{}\t{}\t{:.10g}\n", ngrams_[i], i, df_[i], idf_[i]);
  }
  return out;
}

NgramVocab fit_tfidf(const std::vector<corpus::LabeledExample>& train) {
  if (train.empty()) throw Error("cannot fit TF-IDF on an empty training set");
  std::map<std::string, std::uint64_t> df;
  for (const auto& ex : train) {
    for (const auto& [gram, count] : extract_ngrams(ex.tokens)) ++df[gram];
  }
  std::vector<std::string> grams;
  std::vector<std::uint64_t> freqs;
  grams.reserve(df.size());
  for (auto& [g, f] : df) {
    grams.push_back(g);
    freqs.push_back(f);
  }
  return NgramVocab(std::move(grams), std::move(freqs), train.size());
}

SparseVec transform_tfidf(const NgramVocab& vocab, const corpus::TokenSeq& tokens) {
  SparseVec v;
  v.dimension = vocab.size();
  for (const auto& [gram, count] : extract_ngrams(tokens)) {
    const std::size_t col = vocab.column(gram);
    if (col == vocab.size()) continue;
    v.entries.emplace_back(col, static_cast<double>(count) * vocab.idf(col));
  }
  std::sort(v.entries.begin(), v.entries.end());
  double norm = 0.0;
  for (const auto& e : v.entries) norm += e.second * e.second;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (auto& e : v.entries) e.second /= norm;
  }
  return v;
}

std::vector<double> chi2_scores(const std::vector<SparseVec>& x, const std::vector<std::size_t>& y,
                                std::size_t num_classes, std::size_t dimension) {
  if (x.size() != y.size()) throw Error("feature rows and labels differ in count");
  std::vector<double> observed(num_classes * dimension, 0.0);
  std::vector<double> class_count(num_classes, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] >= num_classes) throw Error("label outside the class range");
    class_count[y[i]] += 1.0;
    for (const auto& [j, v] : x[i].entries) {
      if (v < 0.0) throw Error("chi-squared selection needs non-negative features");
      observed[y[i] * dimension + j] += v;
    }
  }
  const double n = static_cast<double>(x.size());
  std::vector<double> scores(dimension, 0.0);
  for (std::size_t j = 0; j < dimension; ++j) {
    double total = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) total += observed[c * dimension + j];
    double chi = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) {
      const double expected = total * class_count[c] / n;
      if (expected == 0.0) continue;
      const double diff = observed[c * dimension + j] - expected;
      chi += diff * diff / expected;
    }
    scores[j] = chi;
  }
  return scores;
}

std::vector<std::size_t> chi2_select(const std::vector<SparseVec>& x,
                                     const std::vector<std::size_t>& y, std::size_t num_classes,
                                     std::size_t k) {
  if (k == 0) throw Error("chi-squared k must be at least 1");
  std::size_t dimension = 0;
  for (const auto& v : x) dimension = std::max(dimension, v.dimension);
  const auto scores = chi2_scores(x, y, num_classes, dimension);
  std::vector<std::size_t> order(dimension);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(std::min(k, dimension));
  std::sort(order.begin(), order.end());
  return order;
}

SparseVec project(const SparseVec& v, const std::vector<std::size_t>& columns) {
  SparseVec out;
  out.dimension = columns.size();
  std::size_t c = 0;
  for (const auto& [i, val] : v.entries) {
    while (c < columns.size() && columns[c] < i) ++c;
    if (c == columns.size()) break;
    if (columns[c] == i) out.entries.emplace_back(c, val);
  }
  return out;
}

SparseVec FeatureExtractor::sparse(const corpus::TokenSeq& tokens) const {
  SparseVec v = transform_tfidf(vocab, tokens);
  return selected ? project(v, columns) : v;
}

std::vector<double> FeatureExtractor::dense(const corpus::TokenSeq& tokens) const {
  return sparse(tokens).to_dense();
}

FeatureExtractor fit_features(const std::vector<corpus::LabeledExample>& train,
                              std::size_t num_classes, std::size_t chi2_k) {
  FeatureExtractor fx;
  fx.vocab = fit_tfidf(train);
  if (chi2_k > 0) {
    std::vector<SparseVec> x;
    std::vector<std::size_t> y;
    x.reserve(train.size());
    for (const auto& ex : train) {
      x.push_back(transform_tfidf(fx.vocab, ex.tokens));
      y.push_back(ex.label);
    }
    fx.columns = chi2_select(x, y, num_classes, chi2_k);
    fx.selected = true;
  }
  return fx;
}

}  // namespace crisiscnn::features
