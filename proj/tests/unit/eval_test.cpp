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

#include "crisiscnn/error.hpp"
#include "crisiscnn/eval.hpp"
#include "oracles.hpp"

using namespace crisiscnn;
using namespace crisiscnn::eval;
using crisiscnn::testing::brute_auc;
using crisiscnn::testing::brute_average_precision;

namespace {

ConfusionMatrix cm2(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  ConfusionMatrix m(2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

std::pair<std::vector<double>, std::vector<bool>> random_scores(Rng& rng, bool ensure_both) {
  const std::size_t n = 5 + rng.below(196);
  std::vector<double> s(n);
  std::vector<bool> pos(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = static_cast<double>(rng.below(12)) / 4.0;  // coarse grid: plenty of ties
    pos[i] = rng.uniform() < 0.4;
  }
  if (ensure_both) {
    pos[0] = true;
    pos[1] = false;
  }
  return {s, pos};
}

}  // namespace

TEST(Confusion, Examples) {
  const std::vector<std::size_t> g{0, 1}, p{0, 1};
  EXPECT_EQ(confusion_matrix(g, p, 2), cm2(1, 0, 0, 1));
  const std::vector<std::size_t> g2{0, 0}, p2{1, 1};
  EXPECT_EQ(confusion_matrix(g2, p2, 2), cm2(0, 2, 0, 0));
  EXPECT_EQ(confusion_matrix({}, {}, 3).total(), 0u);
  const std::vector<std::size_t> bad{2};
  EXPECT_THROW(confusion_matrix(bad, std::vector<std::size_t>{0}, 2), Error);
  EXPECT_THROW(confusion_matrix(g, std::vector<std::size_t>{0}, 2), Error);
}

TEST(Scores, Examples) {
  EXPECT_EQ(accuracy(cm2(5, 0, 0, 5)), 1.0);
  EXPECT_EQ(macro_f1(cm2(5, 0, 0, 5)), 1.0);
  EXPECT_EQ(accuracy(cm2(2, 2, 2, 2)), 0.5);
  EXPECT_DOUBLE_EQ(macro_f1(cm2(2, 2, 2, 2)), 0.5);
  EXPECT_DOUBLE_EQ(accuracy(cm2(3, 1, 2, 4)), 0.7);
  EXPECT_NEAR(macro_f1(cm2(3, 1, 2, 4)), 0.69697, 1e-5);
  EXPECT_NEAR(macro_f1(cm2(3, 1, 2, 4)), (2.0 / 3.0 + 8.0 / 11.0) / 2.0, 1e-15);
  EXPECT_THROW(accuracy(ConfusionMatrix(2)), Error);
  EXPECT_THROW(macro_f1(ConfusionMatrix(2)), Error);
}

TEST(Scores, Properties) {
  Rng rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t k = 2 + rng.below(4);
    ConfusionMatrix m(k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) m(i, j) = rng.below(5) * (i == j || rng.uniform() < 0.5);
    if (m.total() == 0) continue;
    std::uint64_t off = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (i != j) off += m(i, j);
    EXPECT_NEAR(accuracy(m), 1.0 - static_cast<double>(off) / static_cast<double>(m.total()), 1e-12);
    const double f = macro_f1(m);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    bool diagonal_full = off == 0;
    for (std::size_t i = 0; i < k; ++i) diagonal_full = diagonal_full && m(i, i) > 0;
    EXPECT_EQ(f == 1.0, diagonal_full);
  }
}

TEST(Auc, Examples) {
  const std::vector<double> s{0.9, 0.8, 0.2, 0.1};
  const std::vector<bool> pos{true, true, false, false};
  EXPECT_EQ(roc_auc(s, pos), 1.0);
  EXPECT_EQ(roc_auc(std::vector<double>(4, 0.3), pos), 0.5);
  EXPECT_THROW(roc_auc(s, std::vector<bool>(4, true)), Error);
  EXPECT_THROW(roc_auc(s, std::vector<bool>(4, false)), Error);
}

TEST(Auc, MatchesBruteForceExactly) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [s, pos] = random_scores(rng, true);
    EXPECT_EQ(roc_auc(s, pos), brute_auc(s, pos)) << trial;
  }
}

TEST(Auc, ComplementAndMonotoneInvariance) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto [s, pos] = random_scores(rng, true);
    std::vector<double> neg(s.size()), mono(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      neg[i] = -s[i];
      mono[i] = std::exp(3.0 * s[i]) - 7.0;
    }
    EXPECT_NEAR(roc_auc(s, pos) + roc_auc(neg, pos), 1.0, 1e-12);
    EXPECT_EQ(roc_auc(mono, pos), roc_auc(s, pos));
  }
}

TEST(PrCurve, Examples) {
  const std::vector<double> s{0.9, 0.8, 0.2, 0.1};
  EXPECT_EQ(pr_curve(s, std::vector<bool>{true, true, false, false}).average_precision, 1.0);
  for (std::size_t n : {1u, 4u, 9u}) {
    std::vector<double> scores(n);
    std::vector<bool> pos(n, false);
    for (std::size_t i = 0; i < n; ++i) scores[i] = static_cast<double>(n - i);
    pos[n - 1] = true;
    EXPECT_NEAR(pr_curve(scores, pos).average_precision, 1.0 / static_cast<double>(n), 1e-15);
  }
  EXPECT_THROW(pr_curve(s, std::vector<bool>(4, false)), Error);
  const auto c = pr_curve(std::vector<double>{0.5, 0.5, 0.1}, std::vector<bool>{true, false, true});
  ASSERT_EQ(c.points.size(), 2u);
  EXPECT_DOUBLE_EQ(c.points[0].recall, 0.5);
  EXPECT_DOUBLE_EQ(c.points[0].precision, 0.5);
}

TEST(PrCurve, MatchesBruteForce) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    auto [s, pos] = random_scores(rng, true);
    if (trial % 2 == 0) {
      s.resize(20);
      pos.resize(20);
    }
    EXPECT_NEAR(pr_curve(s, pos).average_precision, brute_average_precision(s, pos), 1e-12);
  }
}

TEST(Distribution, CountsAndFractions) {
  const std::vector<std::uint64_t> counts{756, 1021, 351, 983, 1505, 6698};
  std::vector<std::size_t> labels;
  for (std::size_t c = 0; c < counts.size(); ++c) labels.insert(labels.end(), counts[c], c);
  const auto d = class_distribution(labels, 6);
  EXPECT_EQ(d.counts, counts);
  EXPECT_EQ(d.total, 11314u);
  double sum = 0;
  for (double f : d.fractions) sum += f;
  EXPECT_NEAR(sum, 1.0, 1e-12);

  const auto empty = class_distribution(std::vector<std::size_t>{}, 3);
  EXPECT_EQ(empty.counts, (std::vector<std::uint64_t>{0, 0, 0}));
  EXPECT_EQ(empty.total, 0u);
  const auto one = class_distribution(std::vector<std::size_t>{1}, 3);
  EXPECT_EQ(one.counts, (std::vector<std::uint64_t>{0, 1, 0}));
}

TEST(Report, AucOnlyForBinary) {
  const corpus::LabelSchema bin({"yes", "no"});
  const std::vector<std::size_t> g{0, 1, 0, 1};
  const std::vector<std::vector<double>> p{{0.9, 0.1}, {0.3, 0.7}, {0.6, 0.4}, {0.2, 0.8}};
  const auto r = evaluate(bin, g, p);
  ASSERT_TRUE(r.auc.has_value());
  EXPECT_EQ(*r.auc, 1.0);
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_NE(metrics_json(r).find("\"auc\""), std::string::npos);

  const corpus::LabelSchema tri({"a", "b", "c"});
  const std::vector<std::size_t> g3{0, 1, 1};
  const std::vector<std::vector<double>> p3{{0.5, 0.3, 0.2}, {0.1, 0.8, 0.1}, {0.6, 0.2, 0.2}};
  const auto r3 = evaluate(tri, g3, p3);
  EXPECT_FALSE(r3.auc.has_value());
  EXPECT_EQ(metrics_json(r3).find("\"auc\""), std::string::npos);
  EXPECT_FALSE(r3.pr_curves[2].has_value());
  EXPECT_TRUE(r3.pr_curves[1].has_value());
  EXPECT_EQ(r3.confusion.total(), 3u);
  EXPECT_NE(confusion_csv(r3).find("a"), std::string::npos);
  EXPECT_NE(pr_curves_csv(r3).find("recall"), std::string::npos);
  EXPECT_NE(class_distribution_csv(r3).find("b"), std::string::npos);
}
