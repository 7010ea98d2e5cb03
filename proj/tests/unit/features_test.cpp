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

#include <gtest/gtest.h>

#include <cmath>

#include "crisiscnn/features.hpp"
#include "oracles.hpp"

using namespace crisiscnn;
using namespace crisiscnn::features;
using corpus::LabeledExample;
using corpus::TokenSeq;

namespace {

std::vector<LabeledExample> docs(const std::vector<TokenSeq>& texts,
                                 const std::vector<std::size_t>& labels = {}) {
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.push_back({std::to_string(i), texts[i], labels.empty() ? 0 : labels[i]});
  }
  return out;
}

double norm(const SparseVec& v) {
  double s = 0;
  for (const auto& [i, x] : v.entries) s += x * x;
  return std::sqrt(s);
}

double value_of(const NgramVocab& vocab, const SparseVec& v, const std::string& ngram) {
  const std::size_t col = vocab.column(ngram);
  for (const auto& [i, x] : v.entries)
    if (i == col) return x;
  return 0.0;
}

}  // namespace

TEST(Ngrams, Examples) {
  const auto g = extract_ngrams({"a", "b", "c"});
  EXPECT_EQ(g.size(), 6u);
  for (const char* k : {"a", "b", "c", "a b", "b c", "a b c"}) EXPECT_EQ(g.at(k), 1u) << k;
  EXPECT_EQ(extract_ngrams({"a"}).size(), 1u);
  EXPECT_TRUE(extract_ngrams({}).empty());
  EXPECT_EQ(extract_ngrams({"x", "x", "x"}).at("x"), 3u);
  EXPECT_EQ(extract_ngrams({"x", "x", "x"}).at("x x"), 2u);
}

TEST(Tfidf, IdfValues) {
  const auto v = fit_tfidf(docs({{"t", "a"}, {"t", "b"}, {"t", "c"}}));
  EXPECT_NEAR(v.idf(v.column("t")), 1.0, 1e-15);
  EXPECT_NEAR(v.idf(v.column("a")), 1.693147, 1e-6);
  EXPECT_EQ(v.column("zzz"), v.size());
  EXPECT_EQ(v.num_docs(), 3u);
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_LT(v.ngrams()[i - 1], v.ngrams()[i]);
}

TEST(Tfidf, TransformExample) {
  const auto v = fit_tfidf(docs({{"a", "b"}, {"a"}}));
  const auto x = transform_tfidf(v, {"a", "b"});
  ASSERT_EQ(x.entries.size(), 3u);
  const double w = 1.0 + std::log(1.5);
  const double n = std::sqrt(1.0 + 2.0 * w * w);
  EXPECT_NEAR(value_of(v, x, "a"), 1.0 / n, 1e-12);
  EXPECT_NEAR(value_of(v, x, "b"), w / n, 1e-12);
  EXPECT_NEAR(value_of(v, x, "a b"), w / n, 1e-12);
  EXPECT_NEAR(value_of(v, x, "a"), 0.4494, 5e-5);
  EXPECT_NEAR(value_of(v, x, "b"), 0.6317, 5e-5);
}

TEST(Tfidf, TransformEdgeCases) {
  const auto v = fit_tfidf(docs({{"a", "b"}, {"c"}}));
  const auto one = transform_tfidf(v, {"c"});
  ASSERT_EQ(one.entries.size(), 1u);
  EXPECT_DOUBLE_EQ(one.entries[0].second, 1.0);
  EXPECT_TRUE(transform_tfidf(v, {"q", "r"}).empty());
  EXPECT_TRUE(transform_tfidf(v, {}).empty());
  EXPECT_EQ(one.dimension, v.size());
}

TEST(Tfidf, UnitNormAndDeterminism) {
  Rng rng(3);
  std::vector<TokenSeq> texts;
  for (int d = 0; d < 60; ++d) {
    TokenSeq t;
    const std::size_t len = rng.below(12);
    for (std::size_t i = 0; i < len; ++i) t.push_back("w" + std::to_string(rng.below(15)));
    texts.push_back(t);
  }
  const auto v = fit_tfidf(docs(texts));
  EXPECT_EQ(v, fit_tfidf(docs(texts)));
  for (const auto& t : texts) {
    const auto x = transform_tfidf(v, t);
    if (!x.empty()) EXPECT_NEAR(norm(x), 1.0, 1e-12);
    for (std::size_t i = 1; i < x.entries.size(); ++i) EXPECT_LT(x.entries[i - 1].first, x.entries[i].first);
    EXPECT_EQ(x.entries, transform_tfidf(v, t).entries);
  }
}

TEST(Tfidf, TsvExport) {
  const auto v = fit_tfidf(docs({{"a", "b"}, {"a"}}));
  const std::string tsv = v.to_tsv();
  EXPECT_NE(tsv.find("a\t0\t2\t1"), std::string::npos) << tsv;
  EXPECT_NE(tsv.find("a b\t1\t1\t"), std::string::npos) << tsv;
}

TEST(Chi2, DiscriminativeFeatureScoresHigher) {
  // Feature 0 appears only in class 0; feature 1 is uniform; balanced classes.
  std::vector<SparseVec> x;
  std::vector<std::size_t> y;
  for (int i = 0; i < 4; ++i) {
    SparseVec v;
    v.dimension = 2;
    if (i < 2) v.entries.push_back({0, 1.0});
    v.entries.push_back({1, 1.0});
    x.push_back(v);
    y.push_back(i < 2 ? 0 : 1);
  }
  const auto s = chi2_scores(x, y, 2, 2);
  EXPECT_GT(s[0], s[1]);
  EXPECT_EQ(s[1], 0.0);
  EXPECT_EQ(chi2_select(x, y, 2, 1), (std::vector<std::size_t>{0}));
  EXPECT_EQ(chi2_select(x, y, 2, 10), (std::vector<std::size_t>{0, 1}));
}

TEST(Chi2, MatchesBruteForce) {
  const std::vector<std::vector<double>> dense{{2, 0, 1}, {1, 1, 0}, {0, 3, 1}, {0, 1, 2}};
  const std::vector<std::size_t> y{0, 0, 1, 1};
  std::vector<SparseVec> x;
  for (const auto& row : dense) {
    SparseVec v;
    v.dimension = 3;
    for (std::size_t j = 0; j < 3; ++j)
      if (row[j] != 0) v.entries.push_back({j, row[j]});
    x.push_back(v);
  }
  const auto got = chi2_scores(x, y, 2, 3);
  const auto want = crisiscnn::testing::brute_chi2(dense, y, 2);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(got[j], want[j], 1e-12) << j;
}

TEST(Chi2, SelectionProperties) {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t dim = 1 + rng.below(20), n = 2 + rng.below(30);
    std::vector<SparseVec> x(n);
    std::vector<std::size_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i].dimension = dim;
      for (std::size_t j = 0; j < dim; ++j)
        if (rng.uniform() < 0.3) x[i].entries.push_back({j, rng.uniform()});
      y[i] = rng.below(3);
    }
    const std::size_t k = 1 + rng.below(25);
    const auto sel = chi2_select(x, y, 3, k);
    EXPECT_EQ(sel.size(), std::min(k, dim));
    for (std::size_t i = 1; i < sel.size(); ++i) EXPECT_LT(sel[i - 1], sel[i]);
    for (std::size_t c : sel) EXPECT_LT(c, dim);
  }
}

TEST(Extractor, ProjectionAndDense) {
  const auto train = docs({{"a", "b"}, {"a", "c"}, {"d"}, {"d", "c"}}, {0, 0, 1, 1});
  const auto full = fit_features(train, 2, 0);
  EXPECT_FALSE(full.selected);
  EXPECT_EQ(full.dimension(), full.vocab.size());
  const auto sel = fit_features(train, 2, 2);
  EXPECT_TRUE(sel.selected);
  EXPECT_EQ(sel.dimension(), 2u);
  const auto d = sel.dense({"a", "d"});
  EXPECT_EQ(d.size(), 2u);

  SparseVec v;
  v.dimension = 5;
  v.entries = {{1, 0.5}, {3, 0.25}, {4, 1.0}};
  const auto p = project(v, {0, 3, 4});
  EXPECT_EQ(p.dimension, 3u);
  EXPECT_EQ(p.entries, (std::vector<std::pair<std::size_t, double>>{{1, 0.25}, {2, 1.0}}));
  EXPECT_EQ(v.to_dense(), (std::vector<double>{0, 0.5, 0, 0.25, 1.0}));
  EXPECT_DOUBLE_EQ(v.dot(std::vector<double>{1, 2, 3, 4, 5}), 1.0 + 1.0 + 5.0);
}
