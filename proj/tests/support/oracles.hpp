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

// Independent reference implementations used to check the library.
// Nothing here calls into cnn:: or eval:: numerics; loops are written out
// directly from the model and metric definitions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "crisiscnn/cnn.hpp"
#include "crisiscnn/numerics.hpp"

namespace crisiscnn::testing {

/// Every tensor uniform in [-0.5, 0.5] (biases included), PAD row zero.
inline cnn::CnnParams random_params(const cnn::CnnConfig& c, std::size_t vocab_size,
                                    std::uint64_t seed) {
  Rng rng(seed);
  auto fill = [&](std::size_t r, std::size_t k) {
    Matrix m(r, k);
    for (double& v : m.flat()) v = rng.uniform(-0.5, 0.5);
    return m;
  };
  cnn::CnnParams p;
  p.embeddings.matrix = fill(vocab_size, c.embedding_dim);
  for (double& v : p.embeddings.matrix.row(0)) v = 0.0;
  p.filters = fill(c.num_filters, c.window * c.embedding_dim);
  p.filter_bias = fill(c.num_filters, 1);
  p.dense_w = fill(c.dense_units, c.dense_input_dim());
  p.dense_b = fill(c.dense_units, 1);
  p.out_w = fill(c.output_units(), c.dense_units);
  p.out_b = fill(c.output_units(), 1);
  return p;
}

/// max_len ids: a random number of real tokens (1 .. vocab_size-1, so UNK
/// can appear) followed by PAD.
inline std::vector<std::size_t> random_ids(const cnn::CnnConfig& c, std::size_t vocab_size,
                                           Rng& rng) {
  std::vector<std::size_t> ids(c.max_len, 0);
  const std::size_t len = 1 + rng.below(c.max_len);
  for (std::size_t t = 0; t < len; ++t) ids[t] = 1 + rng.below(vocab_size - 1);
  return ids;
}

inline std::vector<double> random_extra(std::size_t n, Rng& rng) {
  std::vector<double> y(n);
  for (double& v : y) v = rng.uniform();
  return y;
}

/// Straight-line forward pass: embed, wide convolution + ReLU, stride-p max
/// pooling over the zero-padded map, concatenation with the extra features,
/// ReLU dense layer, then sigmoid (K = 2) or softmax.
inline std::vector<double> oracle_forward(const cnn::CnnConfig& c, const cnn::CnnParams& p,
                                          const std::vector<std::size_t>& ids,
                                          const std::vector<double>& extra,
                                          const std::vector<double>& mask = {}) {
  const std::size_t T = c.max_len, D = c.embedding_dim, N = c.num_filters, L = c.window;
  const std::size_t F = T + L - 1;
  const std::size_t P = (F + c.pool - 1) / c.pool;

  std::vector<std::vector<double>> x(T, std::vector<double>(D));
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t d = 0; d < D; ++d) x[t][d] = p.embeddings.matrix(ids[t], d);

  std::vector<double> m;
  for (std::size_t n = 0; n < N; ++n) {
    std::vector<double> h(F);
    for (std::size_t t = 0; t < F; ++t) {
      double s = p.filter_bias(n, 0);
      for (std::size_t k = 0; k < L; ++k) {
        const long r = static_cast<long>(t) - static_cast<long>(L - 1) + static_cast<long>(k);
        if (r < 0 || r >= static_cast<long>(T)) continue;
        for (std::size_t d = 0; d < D; ++d) s += p.filters(n, k * D + d) * x[r][d];
      }
      h[t] = s > 0 ? s : 0;
    }
    for (std::size_t j = 0; j < P; ++j) {
      double best = -1e300;
      for (std::size_t t = j * c.pool; t < (j + 1) * c.pool; ++t) {
        best = std::max(best, t < F ? h[t] : 0.0);
      }
      m.push_back(best);
    }
  }
  for (double v : extra) m.push_back(v);

  std::vector<double> z(c.dense_units);
  for (std::size_t u = 0; u < c.dense_units; ++u) {
    double s = p.dense_b(u, 0);
    for (std::size_t j = 0; j < m.size(); ++j) s += p.dense_w(u, j) * m[j];
    z[u] = s > 0 ? s : 0;
    if (!mask.empty()) z[u] *= mask[u];
  }
  std::vector<double> logit(c.output_units());
  for (std::size_t k = 0; k < logit.size(); ++k) {
    double s = p.out_b(k, 0);
    for (std::size_t u = 0; u < z.size(); ++u) s += p.out_w(k, u) * z[u];
    logit[k] = s;
  }
  if (c.num_classes == 2) {
    const double q = 1.0 / (1.0 + std::exp(-logit[0]));
    return {q, 1.0 - q};
  }
  const double mx = *std::max_element(logit.begin(), logit.end());
  double total = 0;
  std::vector<double> out(logit.size());
  for (std::size_t k = 0; k < out.size(); ++k) total += out[k] = std::exp(logit[k] - mx);
  for (double& v : out) v /= total;
  return out;
}

/// Pairwise enumeration over all positive x negative pairs.
inline double brute_auc(const std::vector<double>& s, const std::vector<bool>& pos) {
  double greater = 0, ties = 0, np = 0, nn = 0;
  for (bool b : pos) (b ? np : nn) += 1;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!pos[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (pos[j]) continue;
      if (s[i] > s[j]) greater += 1;
      if (s[i] == s[j]) ties += 1;
    }
  }
  return (greater + 0.5 * ties) / (np * nn);
}

/// Step sum over distinct thresholds, counting from scratch at each one.
inline double brute_average_precision(const std::vector<double>& s, const std::vector<bool>& pos) {
  std::set<double, std::greater<>> thresholds(s.begin(), s.end());
  double npos = 0;
  for (bool b : pos) npos += b;
  double ap = 0, prev_recall = 0;
  for (double t : thresholds) {
    double tp = 0, fp = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= t) (pos[i] ? tp : fp) += 1;
    }
    const double recall = tp / npos;
    ap += (recall - prev_recall) * (tp / (tp + fp));
    prev_recall = recall;
  }
  return ap;
}

/// Chi-squared from a dense document x feature table.
inline std::vector<double> brute_chi2(const std::vector<std::vector<double>>& x,
                                      const std::vector<std::size_t>& y, std::size_t classes) {
  const std::size_t docs = x.size(), feats = x.empty() ? 0 : x[0].size();
  std::vector<double> out(feats, 0.0);
  for (std::size_t j = 0; j < feats; ++j) {
    double total = 0;
    for (std::size_t i = 0; i < docs; ++i) total += x[i][j];
    for (std::size_t c = 0; c < classes; ++c) {
      double observed = 0, count = 0;
      for (std::size_t i = 0; i < docs; ++i) {
        if (y[i] == c) {
          observed += x[i][j];
          count += 1;
        }
      }
      const double expected = total * count / static_cast<double>(docs);
      if (expected == 0) continue;
      out[j] += (observed - expected) * (observed - expected) / expected;
    }
  }
  return out;
}

}  // namespace crisiscnn::testing
