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
#include <vector>

#include "crisiscnn/features.hpp"
#include "crisiscnn/numerics.hpp"

namespace crisiscnn::baselines {

enum class LinearKind { logistic, svm_hinge };

struct LinearTrainConfig {
  std::size_t epochs = 100;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  std::uint64_t seed = 1;
};

/// Linear classifier over sparse features: K weight rows and K biases.
/// Logistic models score with softmax, hinge models with raw margins.
struct LinearModel {
  LinearKind kind = LinearKind::logistic;
  Matrix weights;             ///< K x dim
  std::vector<double> bias;   ///< K
  double l2 = 0.0;
  std::size_t epochs = 0;
  std::uint64_t seed = 0;
  /// Regularized training objective evaluated at the end of each epoch.
  std::vector<double> epoch_objective;

  std::size_t num_classes() const noexcept { return bias.size(); }
  std::size_t dimension() const noexcept { return weights.cols(); }
};

/// Multinomial logistic regression: L2-regularized negative log-likelihood,
/// minimized by SGD over a seeded per-epoch shuffle. The L2 term is applied
/// as a proximal shrink w <- w / (1 + lr * l2) after every example.
LinearModel train_logreg(const std::vector<features::SparseVec>& x,
                         const std::vector<std::size_t>& y, std::size_t num_classes,
                         const LinearTrainConfig& config = {});

/// One-vs-rest hinge-loss classifiers trained by subgradient descent with the
/// same shuffle and L2 shrink as train_logreg.
LinearModel train_linear_svm(const std::vector<features::SparseVec>& x,
                             const std::vector<std::size_t>& y, std::size_t num_classes,
                             const LinearTrainConfig& config = {});

struct LinearPrediction {
  std::size_t label = 0;
  std::vector<double> scores;  ///< probabilities (logistic) or margins (hinge)
};

LinearPrediction predict_linear(const LinearModel& model, const features::SparseVec& x);

/// The regularized objective minimized by the trainer for this model kind.
double linear_objective(const LinearModel& model, const std::vector<features::SparseVec>& x,
                        const std::vector<std::size_t>& y);

}  // namespace crisiscnn::baselines
