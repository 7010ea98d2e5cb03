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
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "crisiscnn/corpus.hpp"
#include "crisiscnn/embeddings.hpp"
#include "crisiscnn/numerics.hpp"

namespace crisiscnn::cnn {

/// Shapes of the convolutional classifier. num_classes == 2 selects the
/// single-sigmoid (Bernoulli) head; anything larger uses softmax.
struct CnnConfig {
  std::size_t max_len = 30;         ///< tokens per input (pad / truncate)
  std::size_t embedding_dim = 300;  ///< D
  std::size_t num_filters = 100;    ///< N
  std::size_t window = 2;           ///< filter length in tokens
  std::size_t pool = 2;             ///< max-pooling width (= stride)
  std::size_t dense_units = 100;    ///< H
  std::size_t num_classes = 2;      ///< K
  std::size_t extra_dim = 0;        ///< fixed extra features fed to the dense layer

  /// Throws Error on an impossible shape.
  void validate() const;

  std::size_t feature_len() const noexcept { return max_len + window - 1; }
  std::size_t pooled_len() const noexcept { return (feature_len() + pool - 1) / pool; }
  std::size_t conv_features() const noexcept { return num_filters * pooled_len(); }
  std::size_t dense_input_dim() const noexcept { return conv_features() + extra_dim; }
  std::size_t output_units() const noexcept { return num_classes == 2 ? 1 : num_classes; }
  bool binary() const noexcept { return num_classes == 2; }

  friend bool operator==(const CnnConfig&, const CnnConfig&) = default;
};

struct CnnParams {
  embeddings::EmbeddingTable embeddings;  ///< |V| x D
  Matrix filters;                         ///< N x (window * D)
  Matrix filter_bias;                     ///< N x 1
  Matrix dense_w;                         ///< H x dense_input_dim
  Matrix dense_b;                         ///< H x 1
  Matrix out_w;                           ///< output_units x H
  Matrix out_b;                           ///< output_units x 1
};

/// Same shapes as CnnParams; the embedding gradient is dense |V| x D.
struct CnnGradients {
  Matrix embeddings;
  Matrix filters;
  Matrix filter_bias;
  Matrix dense_w;
  Matrix dense_b;
  Matrix out_w;
  Matrix out_b;

  static CnnGradients zeros_like(const CnnParams& params);
  void set_zero();
  void add(const CnnGradients& other);
};

struct NamedTensor {
  std::string_view name;
  Matrix* tensor;
};
struct ConstNamedTensor {
  std::string_view name;
  const Matrix* tensor;
};

inline constexpr std::size_t kTensorCount = 7;
/// Fixed order: embeddings, filters, filter_bias, dense_w, dense_b, out_w, out_b.
std::array<NamedTensor, kTensorCount> tensors(CnnParams& params);
std::array<ConstNamedTensor, kTensorCount> tensors(const CnnParams& params);
std::array<NamedTensor, kTensorCount> tensors(CnnGradients& grads);
std::array<ConstNamedTensor, kTensorCount> tensors(const CnnGradients& grads);

/// Filters and dense/output weights drawn from a Glorot-uniform range,
/// biases zero. The embedding table is taken as given.
CnnParams init_params(const CnnConfig& config, embeddings::EmbeddingTable table,
                      std::uint64_t seed);

/// Throws Error unless every tensor matches `config` (and the table has
/// `vocab_size` rows when vocab_size > 0).
void check_shapes(const CnnConfig& config, const CnnParams& params, std::size_t vocab_size = 0);

/// Every intermediate of one forward pass.
struct ForwardTrace {
  std::vector<std::size_t> ids;   ///< token ids, empty when fed a raw matrix
  Matrix input;                   ///< max_len x D
  std::size_t active_rows = 0;    ///< rows past this index are all zero
  Matrix pre;                     ///< N x feature_len, before activation
  Matrix feature_maps;            ///< N x feature_len
  std::vector<double> pooled;     ///< N * pooled_len
  std::vector<std::ptrdiff_t> pool_source;  ///< winning column, -1 for padding
  std::vector<double> dense_input;          ///< [pooled; extra]
  std::vector<double> dense_pre;
  std::vector<double> hidden;               ///< ReLU(dense_pre)
  std::vector<double> dropout_mask;         ///< empty when no dropout
  std::vector<double> hidden_out;           ///< hidden * mask
  std::vector<double> logits;
  std::vector<double> probs;
};

/// Wide convolution: output column t covers input rows t-(window-1) .. t,
/// rows outside [0, max_len) read as zero. Returns the pre-activations.
Matrix conv_wide_pre(const Matrix& x, const Matrix& filters, const Matrix& bias,
                     std::size_t window);

/// ReLU(conv_wide_pre(...)).
Matrix conv_wide(const Matrix& x, const Matrix& filters, const Matrix& bias, std::size_t window);

/// Non-overlapping max over windows of `pool`, the row right-padded with
/// zeros up to a multiple of `pool`.
std::vector<double> max_pool(std::span<const double> h, std::size_t pool);

/// Full forward pass from an input matrix. `extra` must have extra_dim
/// entries; `dropout_mask`, when non-empty, has dense_units entries.
ForwardTrace forward(const CnnConfig& config, const CnnParams& params, const Matrix& x,
                     std::span<const double> extra = {},
                     std::span<const double> dropout_mask = {});

/// Forward pass from encoded token ids (length max_len); keeps the ids so
/// backward() can reach the embedding rows.
ForwardTrace forward_ids(const CnnConfig& config, const CnnParams& params,
                         const std::vector<std::size_t>& ids, std::span<const double> extra = {},
                         std::span<const double> dropout_mask = {});

/// Accumulates into `grads` the gradient of  loss_weight * -log P(gold).
/// Cross-entropy is loss_weight = 1; the regularized adaptation loss is the
/// same form with a per-example weight (see train::adaptation_weight).
/// The PAD embedding row never receives gradient.
void backward(const CnnConfig& config, const CnnParams& params, const ForwardTrace& trace,
              std::size_t gold, double loss_weight, CnnGradients& grads);

CnnGradients backward(const CnnConfig& config, const CnnParams& params,
                      const ForwardTrace& trace, std::size_t gold, double loss_weight = 1.0);

struct Prediction {
  std::size_t label = 0;
  std::vector<double> probs;
};

/// Dropout-free forward; argmax with ties to the smaller index.
Prediction predict(const CnnConfig& config, const CnnParams& params,
                   const std::vector<std::size_t>& ids, std::span<const double> extra = {});

Prediction predict(const CnnConfig& config, const CnnParams& params,
                   const corpus::Vocabulary& vocab, const corpus::TokenSeq& tokens,
                   std::span<const double> extra = {});

/// Flattens every tensor (fixed order) into one vector, and back.
std::vector<double> flatten(const CnnParams& params);
void unflatten(std::span<const double> flat, CnnParams& params);
std::vector<double> flatten(const CnnGradients& grads);

}  // namespace crisiscnn::cnn
