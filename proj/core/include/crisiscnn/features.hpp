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
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crisiscnn/corpus.hpp"

namespace crisiscnn::features {

/// Sparse vector: (index, value) pairs with strictly increasing indices.
struct SparseVec {
  std::vector<std::pair<std::size_t, double>> entries;
  std::size_t dimension = 0;

  bool empty() const noexcept { return entries.empty(); }
  double dot(std::span<const double> dense) const noexcept;
  std::vector<double> to_dense() const;
};

/// Contiguous 1-, 2- and 3-grams keyed by their tokens joined with one
/// space, with their counts.
std::map<std::string, std::size_t> extract_ngrams(const corpus::TokenSeq& tokens);

/// N-gram vocabulary with smoothed IDF:  ln((1 + N) / (1 + df)) + 1.
class NgramVocab {
 public:
  NgramVocab() = default;
  /// Entries in column order.
  NgramVocab(std::vector<std::string> ngrams, std::vector<std::uint64_t> doc_freq,
             std::uint64_t num_docs);

  std::size_t size() const noexcept { return ngrams_.size(); }
  std::uint64_t num_docs() const noexcept { return num_docs_; }
  const std::vector<std::string>& ngrams() const noexcept { return ngrams_; }
  const std::vector<std::uint64_t>& doc_freq() const noexcept { return df_; }
  double idf(std::size_t column) const { return idf_.at(column); }
  /// Column of an n-gram, or size() if unknown.
  std::size_t column(const std::string& ngram) const;

  /// TSV: ngram, index, df, idf.
  std::string to_tsv() const;

  friend bool operator==(const NgramVocab& a, const NgramVocab& b) {
    return a.ngrams_ == b.ngrams_ && a.df_ == b.df_ && a.num_docs_ == b.num_docs_;
  }

 private:
  std::vector<std::string> ngrams_;
  std::vector<std::uint64_t> df_;
  std::vector<double> idf_;
  std::uint64_t num_docs_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Columns are assigned in lexicographic n-gram order.
NgramVocab fit_tfidf(const std::vector<corpus::LabeledExample>& train);

/// Raw count * idf for known n-grams, then L2-normalized.
SparseVec transform_tfidf(const NgramVocab& vocab, const corpus::TokenSeq& tokens);

/// Chi-squared score per column (observed = per-class feature mass).
std::vector<double> chi2_scores(const std::vector<SparseVec>& x, const std::vector<std::size_t>& y,
                                std::size_t num_classes, std::size_t dimension);

/// The k highest-scoring columns (ties to the smaller index), sorted.
std::vector<std::size_t> chi2_select(const std::vector<SparseVec>& x,
                                     const std::vector<std::size_t>& y, std::size_t num_classes,
                                     std::size_t k);

/// Keeps only `columns` (sorted) and renumbers them 0..columns.size()-1.
SparseVec project(const SparseVec& v, const std::vector<std::size_t>& columns);

/// A fitted TF-IDF pipeline: the vocabulary plus an optional chi-squared
/// column subset. Its output width is fixed, so it can feed the dense layer.
struct FeatureExtractor {
  NgramVocab vocab;
  std::vector<std::size_t> columns;  ///< empty = all columns
  bool selected = false;

  std::size_t dimension() const noexcept { return selected ? columns.size() : vocab.size(); }
  SparseVec sparse(const corpus::TokenSeq& tokens) const;
  std::vector<double> dense(const corpus::TokenSeq& tokens) const;
};

/// Fits TF-IDF on `train`; with chi2_k > 0 keeps the chi2_k best columns.
FeatureExtractor fit_features(const std::vector<corpus::LabeledExample>& train,
                              std::size_t num_classes, std::size_t chi2_k);

}  // namespace crisiscnn::features
