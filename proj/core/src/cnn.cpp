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

#include "crisiscnn/cnn.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "crisiscnn/error.hpp"

namespace crisiscnn::cnn {

using corpus::Vocabulary;

void CnnConfig::validate() const {
  if (max_len == 0 || embedding_dim == 0 || num_filters == 0 || window == 0 || pool == 0 ||
      dense_units == 0) {
    throw Error("CNN dimensions must all be at least 1");
  }
  if (window > max_len + 1) {
    throw Error(fmt::format("filter window {} exceeds max_len + 1 = {}", window, max_len + 1));
  }
  if (num_classes < 2) throw Error("a classifier needs at least two classes");
}

CnnGradients CnnGradients::zeros_like(const CnnParams& p) {
  return {Matrix(p.embeddings.matrix.rows(), p.embeddings.matrix.cols()),
          Matrix(p.filters.rows(), p.filters.cols()),
          Matrix(p.filter_bias.rows(), p.filter_bias.cols()),
          Matrix(p.dense_w.rows(), p.dense_w.cols()),
          Matrix(p.dense_b.rows(), p.dense_b.cols()),
          Matrix(p.out_w.rows(), p.out_w.cols()),
          Matrix(p.out_b.rows(), p.out_b.cols())};
}

void CnnGradients::set_zero() {
  for (auto& t : tensors(*this)) t.tensor->fill(0.0);
}

void CnnGradients::add(const CnnGradients& other) {
  auto mine = tensors(*this);
  const auto theirs = tensors(other);
  for (std::size_t k = 0; k < kTensorCount; ++k) {
    auto dst = mine[k].tensor->flat();
    const auto src = theirs[k].tensor->flat();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
}

std::array<NamedTensor, kTensorCount> tensors(CnnParams& p) {
  return {{{"embeddings", &p.embeddings.matrix},
           {"filters", &p.filters},
           {"filter_bias", &p.filter_bias},
           {"dense_w", &p.dense_w},
           {"dense_b", &p.dense_b},
           {"out_w", &p.out_w},
           {"out_b", &p.out_b}}};
}

std::array<ConstNamedTensor, kTensorCount> tensors(const CnnParams& p) {
  return {{{"embeddings", &p.embeddings.matrix},
           {"filters", &p.filters},
           {"filter_bias", &p.filter_bias},
           {"dense_w", &p.dense_w},
           {"dense_b", &p.dense_b},
           {"out_w", &p.out_w},
           {"out_b", &p.out_b}}};
}

std::array<NamedTensor, kTensorCount> tensors(CnnGradients& g) {
  return {{{"embeddings", &g.embeddings},
           {"filters", &g.filters},
           {"filter_bias", &g.filter_bias},
           {"dense_w", &g.dense_w},
           {"dense_b", &g.dense_b},
           {"out_w", &g.out_w},
           {"out_b", &g.out_b}}};
}

std::array<ConstNamedTensor, kTensorCount> tensors(const CnnGradients& g) {
  return {{{"embeddings", &g.embeddings},
           {"filters", &g.filters},
           {"filter_bias", &g.filter_bias},
           {"dense_w", &g.dense_w},
           {"dense_b", &g.dense_b},
           {"out_w", &g.out_w},
           {"out_b", &g.out_b}}};
}

namespace {

void glorot(Matrix& m, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : m.flat()) v = rng.uniform(-limit, limit);
}

}  // namespace

CnnParams init_params(const CnnConfig& config, embeddings::EmbeddingTable table,
                      std::uint64_t seed) {
  config.validate();
  if (table.dim() != config.embedding_dim) {
    throw Error(fmt::format("embedding table has dimension {}, config expects {}", table.dim(),
                            config.embedding_dim));
  }
  const std::size_t n = config.num_filters;
  const std::size_t h = config.dense_units;
  const std::size_t k = config.output_units();
  CnnParams p;
  p.embeddings = std::move(table);
  p.filters = Matrix(n, config.window * config.embedding_dim);
  p.filter_bias = Matrix(n, 1);
  p.dense_w = Matrix(h, config.dense_input_dim());
  p.dense_b = Matrix(h, 1);
  p.out_w = Matrix(k, h);
  p.out_b = Matrix(k, 1);

  Rng rng(seed);
  glorot(p.filters, config.window * config.embedding_dim, n, rng);
  glorot(p.dense_w, config.dense_input_dim(), h, rng);
  glorot(p.out_w, h, k, rng);
  return p;
}

void check_shapes(const CnnConfig& c, const CnnParams& p, std::size_t vocab_size) {
  c.validate();
  auto expect = [](const Matrix& m, std::size_t r, std::size_t cols, std::string_view name) {
    if (m.rows() != r || m.cols() != cols) {
      throw Error(fmt::format("tensor '{}' is {}x{}, expected {}x{}", name, m.rows(), m.cols(),
                              r, cols));
    }
  };
  if (vocab_size > 0) expect(p.embeddings.matrix, vocab_size, c.embedding_dim, "embeddings");
  if (p.embeddings.dim() != c.embedding_dim) {
    throw Error(fmt::format("embedding dimension {} does not match config {}",
                            p.embeddings.dim(), c.embedding_dim));
  }
  expect(p.filters, c.num_filters, c.window * c.embedding_dim, "filters");
  expect(p.filter_bias, c.num_filters, 1, "filter_bias");
  expect(p.dense_w, c.dense_units, c.dense_input_dim(), "dense_w");
  expect(p.dense_b, c.dense_units, 1, "dense_b");
  expect(p.out_w, c.output_units(), c.dense_units, "out_w");
  expect(p.out_b, c.output_units(), 1, "out_b");
}

namespace {

std::size_t count_active_rows(const Matrix& x) {
  std::size_t active = x.rows();
  while (active > 0) {
    const auto r = x.row(active - 1);
    if (std::any_of(r.begin(), r.end(), [](double v) { return v != 0.0; })) break;
    --active;
  }
  return active;
}

// Rows [first, last) of x that the window ending at output column t reads,
// restricted to the first `active` rows.
struct WindowSpan {
  std::size_t first;
  std::size_t last;
  std::size_t filter_offset;  // in tokens
};

WindowSpan window_rows(std::size_t t, std::size_t window, std::size_t active) {
  const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(t) - static_cast<std::ptrdiff_t>(window) + 1;
  const std::size_t first = start < 0 ? 0 : static_cast<std::size_t>(start);
  const std::size_t last = std::min(t + 1, active);
  const std::size_t offset = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(first) - start);
  return {first, std::max(first, last), offset};
}

Matrix conv_pre_active(const Matrix& x, std::size_t active, const Matrix& filters,
                       const Matrix& bias, std::size_t window) {
  const std::size_t d = x.cols();
  const std::size_t f_len = x.rows() + window - 1;
  Matrix pre(filters.rows(), f_len);
  const auto xs = x.flat();
  for (std::size_t i = 0; i < filters.rows(); ++i) {
    const auto u = filters.row(i);
    const double b = bias(i, 0);
    for (std::size_t t = 0; t < f_len; ++t) {
      const WindowSpan w = window_rows(t, window, active);
      const std::size_t len = (w.last - w.first) * d;
      pre(i, t) = b + dot(u.subspan(w.filter_offset * d, len), xs.subspan(w.first * d, len));
    }
  }
  return pre;
}

}  // namespace

Matrix conv_wide_pre(const Matrix& x, const Matrix& filters, const Matrix& bias,
                     std::size_t window) {
  if (filters.cols() != window * x.cols() || bias.rows() != filters.rows()) {
    throw Error("convolution shape mismatch");
  }
  return conv_pre_active(x, x.rows(), filters, bias, window);
}

Matrix conv_wide(const Matrix& x, const Matrix& filters, const Matrix& bias, std::size_t window) {
  Matrix h = conv_wide_pre(x, filters, bias, window);
  for (double& v : h.flat()) v = relu(v);
  return h;
}

std::vector<double> max_pool(std::span<const double> h, std::size_t pool) {
  const std::size_t n = (h.size() + pool - 1) / pool;
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t lo = j * pool;
    const std::size_t hi = std::min(h.size(), lo + pool);
    double m = h[lo];
    for (std::size_t t = lo + 1; t < hi; ++t) m = std::max(m, h[t]);
    if (hi - lo < pool) m = std::max(m, 0.0);
    out[j] = m;
  }
  return out;
}

namespace {

ForwardTrace run_forward(const CnnConfig& c, const CnnParams& p, Matrix x,
                         std::vector<std::size_t> ids, std::span<const double> extra,
                         std::span<const double> mask) {
  if (x.rows() != c.max_len || x.cols() != c.embedding_dim) {
    throw Error(fmt::format("input is {}x{}, expected {}x{}", x.rows(), x.cols(), c.max_len,
                            c.embedding_dim));
  }
  if (extra.size() != c.extra_dim) {
    throw Error(fmt::format("expected {} extra features, got {}", c.extra_dim, extra.size()));
  }
  if (!mask.empty() && mask.size() != c.dense_units) {
    throw Error(fmt::format("dropout mask has {} entries, expected {}", mask.size(),
                            c.dense_units));
  }

  ForwardTrace tr;
  tr.ids = std::move(ids);
  tr.input = std::move(x);
  tr.active_rows = count_active_rows(tr.input);
  tr.pre = conv_pre_active(tr.input, tr.active_rows, p.filters, p.filter_bias, c.window);
  tr.feature_maps = tr.pre;
  for (double& v : tr.feature_maps.flat()) v = relu(v);

  const std::size_t f_len = c.feature_len();
  const std::size_t p_len = c.pooled_len();
  tr.pooled.assign(c.conv_features(), 0.0);
  tr.pool_source.assign(c.conv_features(), -1);
  for (std::size_t i = 0; i < c.num_filters; ++i) {
    const auto h = tr.feature_maps.row(i);
    for (std::size_t j = 0; j < p_len; ++j) {
      const std::size_t lo = j * c.pool;
      const std::size_t hi = std::min(f_len, lo + c.pool);
      std::size_t best = lo;
      for (std::size_t t = lo + 1; t < hi; ++t) {
        if (h[t] > h[best]) best = t;
      }
      double m = h[best];
      std::ptrdiff_t src = static_cast<std::ptrdiff_t>(best);
      if (hi - lo < c.pool && 0.0 > m) {
        m = 0.0;
        src = -1;
      }
      tr.pooled[i * p_len + j] = m;
      tr.pool_source[i * p_len + j] = src;
    }
  }

  tr.dense_input = tr.pooled;
  tr.dense_input.insert(tr.dense_input.end(), extra.begin(), extra.end());

  tr.dense_pre.resize(c.dense_units);
  tr.hidden.resize(c.dense_units);
  tr.hidden_out.resize(c.dense_units);
  for (std::size_t u = 0; u < c.dense_units; ++u) {
    tr.dense_pre[u] = p.dense_b(u, 0) + dot(p.dense_w.row(u), tr.dense_input);
    tr.hidden[u] = relu(tr.dense_pre[u]);
    tr.hidden_out[u] = mask.empty() ? tr.hidden[u] : tr.hidden[u] * mask[u];
  }
  tr.dropout_mask.assign(mask.begin(), mask.end());

  tr.logits.resize(c.output_units());
  for (std::size_t k = 0; k < c.output_units(); ++k) {
    tr.logits[k] = p.out_b(k, 0) + dot(p.out_w.row(k), tr.hidden_out);
  }
  if (c.binary()) {
    const double pos = sigmoid(tr.logits[0]);
    tr.probs = {pos, 1.0 - pos};
  } else {
    tr.probs = softmax(tr.logits);
  }
  return tr;
}

}  // namespace

ForwardTrace forward(const CnnConfig& config, const CnnParams& params, const Matrix& x,
                     std::span<const double> extra, std::span<const double> dropout_mask) {
  return run_forward(config, params, x, {}, extra, dropout_mask);
}

ForwardTrace forward_ids(const CnnConfig& config, const CnnParams& params,
                         const std::vector<std::size_t>& ids, std::span<const double> extra,
                         std::span<const double> dropout_mask) {
  if (ids.size() != config.max_len) {
    throw Error(fmt::format("expected {} token ids, got {}", config.max_len, ids.size()));
  }
  for (std::size_t id : ids) {
    if (id >= params.embeddings.rows()) throw Error("token id outside the embedding table");
  }
  return run_forward(config, params, embeddings::lookup_ids(params.embeddings, ids), ids, extra,
                     dropout_mask);
}

void backward(const CnnConfig& c, const CnnParams& p, const ForwardTrace& tr, std::size_t gold,
              double loss_weight, CnnGradients& g) {
  if (gold >= c.num_classes) throw Error("gold label outside the class range");

  // Output layer.
  std::vector<double> d_logits(c.output_units());
  if (c.binary()) {
    d_logits[0] = loss_weight * (tr.probs[0] - (gold == 0 ? 1.0 : 0.0));
  } else {
    for (std::size_t k = 0; k < c.num_classes; ++k) {
      d_logits[k] = loss_weight * (tr.probs[k] - (k == gold ? 1.0 : 0.0));
    }
  }
  std::vector<double> d_hidden(c.dense_units, 0.0);
  for (std::size_t k = 0; k < c.output_units(); ++k) {
    const double dl = d_logits[k];
    g.out_b(k, 0) += dl;
    if (dl == 0.0) continue;
    auto gw = g.out_w.row(k);
    const auto w = p.out_w.row(k);
    for (std::size_t u = 0; u < c.dense_units; ++u) {
      gw[u] += dl * tr.hidden_out[u];
      d_hidden[u] += dl * w[u];
    }
  }

  // Dense layer.
  const std::size_t m_len = c.dense_input_dim();
  std::vector<double> d_dense_input(m_len, 0.0);
  for (std::size_t u = 0; u < c.dense_units; ++u) {
    double da = d_hidden[u];
    if (!tr.dropout_mask.empty()) da *= tr.dropout_mask[u];
    if (tr.dense_pre[u] <= 0.0) da = 0.0;
    if (da == 0.0) continue;
    g.dense_b(u, 0) += da;
    auto gw = g.dense_w.row(u);
    const auto w = p.dense_w.row(u);
    for (std::size_t j = 0; j < m_len; ++j) {
      gw[j] += da * tr.dense_input[j];
      d_dense_input[j] += da * w[j];
    }
  }

  // Pooling and convolution.
  const std::size_t d = c.embedding_dim;
  const std::size_t f_len = c.feature_len();
  const std::size_t p_len = c.pooled_len();
  const bool want_input_grad = !tr.ids.empty() && p.embeddings.trainable;
  Matrix d_input;
  if (want_input_grad) d_input = Matrix(c.max_len, d);
  const auto xs = tr.input.flat();
  for (std::size_t i = 0; i < c.num_filters; ++i) {
    const auto u = p.filters.row(i);
    auto gu = g.filters.row(i);
    for (std::size_t j = 0; j < p_len; ++j) {
      const std::ptrdiff_t src = tr.pool_source[i * p_len + j];
      if (src < 0) continue;
      const auto t = static_cast<std::size_t>(src);
      if (t >= f_len || tr.pre(i, t) <= 0.0) continue;
      const double dpre = d_dense_input[i * p_len + j];
      if (dpre == 0.0) continue;
      g.filter_bias(i, 0) += dpre;
      const WindowSpan w = window_rows(t, c.window, tr.active_rows);
      const std::size_t len = (w.last - w.first) * d;
      const std::size_t off = w.filter_offset * d;
      for (std::size_t q = 0; q < len; ++q) gu[off + q] += dpre * xs[w.first * d + q];
      if (want_input_grad) {
        // Gradient reaches every in-range row, including all-zero ones.
        const WindowSpan full = window_rows(t, c.window, c.max_len);
        const std::size_t flen = (full.last - full.first) * d;
        const std::size_t foff = full.filter_offset * d;
        auto dx = d_input.flat();
        for (std::size_t q = 0; q < flen; ++q) dx[full.first * d + q] += dpre * u[foff + q];
      }
    }
  }

  if (want_input_grad) {
    for (std::size_t t = 0; t < c.max_len; ++t) {
      const std::size_t id = tr.ids[t];
      if (id == Vocabulary::kPad) continue;
      auto dst = g.embeddings.row(id);
      const auto src = d_input.row(t);
      for (std::size_t q = 0; q < d; ++q) dst[q] += src[q];
    }
  }
}

CnnGradients backward(const CnnConfig& config, const CnnParams& params, const ForwardTrace& trace,
                      std::size_t gold, double loss_weight) {
  CnnGradients g = CnnGradients::zeros_like(params);
  backward(config, params, trace, gold, loss_weight, g);
  return g;
}

Prediction predict(const CnnConfig& config, const CnnParams& params,
                   const std::vector<std::size_t>& ids, std::span<const double> extra) {
  ForwardTrace tr = forward_ids(config, params, ids, extra);
  Prediction out;
  out.label = argmax(tr.probs);
  out.probs = std::move(tr.probs);
  return out;
}

Prediction predict(const CnnConfig& config, const CnnParams& params, const Vocabulary& vocab,
                   const corpus::TokenSeq& tokens, std::span<const double> extra) {
  return predict(config, params, vocab.encode(tokens, config.max_len), extra);
}

std::vector<double> flatten(const CnnParams& params) {
  std::vector<double> out;
  for (const auto& t : tensors(params)) {
    const auto f = t.tensor->flat();
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

void unflatten(std::span<const double> flat, CnnParams& params) {
  std::size_t pos = 0;
  for (auto& t : tensors(params)) {
    auto dst = t.tensor->flat();
    if (pos + dst.size() > flat.size()) throw Error("flat parameter vector too short");
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos),
              flat.begin() + static_cast<std::ptrdiff_t>(pos + dst.size()), dst.begin());
    pos += dst.size();
  }
  if (pos != flat.size()) throw Error("flat parameter vector too long");
}

std::vector<double> flatten(const CnnGradients& grads) {
  std::vector<double> out;
  for (const auto& t : tensors(grads)) {
    const auto f = t.tensor->flat();
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

}  // namespace crisiscnn::cnn
