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
#include <span>
#include <vector>

#include "crisiscnn/cnn.hpp"
#include "crisiscnn/numerics.hpp"

namespace crisiscnn::train {

struct TrainConfig {
  std::size_t max_epochs = 25;
  std::size_t batch_size = 64;
  double dropout = 0.5;
  /// Epochs without a strict validation-accuracy improvement before stopping.
  std::size_t patience = 5;
  std::uint64_t seed = 1;
  double rho = 0.95;
  double epsilon = 1e-6;
  /// Workers per minibatch. Results are deterministic for a fixed count.
  std::size_t threads = 1;

  void validate() const;
};

/// Probabilities are clamped to this floor before any logarithm.
inline constexpr double kProbFloor = 1e-12;

/// -log max(probs[gold], 1e-12).
double cross_entropy(std::span<const double> probs, std::size_t gold);

/// -[lambda * log Pa(gold) + (1 - lambda) * Pi(gold) * log Pa(gold)], where
/// Pa comes from the model being trained and Pi from the frozen event model.
double adaptation_loss(std::span<const double> probs_a, std::span<const double> probs_i,
                       std::size_t gold, double lambda);

/// The factor multiplying -log Pa(gold) in adaptation_loss.
inline double adaptation_weight(double reference_gold_prob, double lambda) noexcept {
  return lambda + (1.0 - lambda) * reference_gold_prob;
}

/// One ADADELTA update over a flat tensor:
///   Eg2  <- rho Eg2 + (1 - rho) g^2
///   dx    = -sqrt(Edx2 + eps) / sqrt(Eg2 + eps) * g
///   Edx2 <- rho Edx2 + (1 - rho) dx^2
///   x    <- x + dx
void adadelta_step(std::span<double> x, std::span<const double> grad, std::span<double> sq_grad,
                   std::span<double> sq_delta, double rho, double epsilon);

struct AdadeltaState {
  cnn::CnnGradients sq_grad;   ///< E[g^2]
  cnn::CnnGradients sq_delta;  ///< E[dx^2]
  double rho = 0.95;
  double epsilon = 1e-6;

  static AdadeltaState zeros_like(const cnn::CnnParams& params, double rho = 0.95,
                                  double epsilon = 1e-6);
};

/// Applies adadelta_step tensor by tensor. A frozen embedding table
/// (trainable == false) is left untouched.
void adadelta_step(cnn::CnnParams& params, const cnn::CnnGradients& grads, AdadeltaState& state);

/// Inverted dropout: each entry is 0 with probability `rate`, otherwise
/// 1 / (1 - rate).
std::vector<double> make_dropout_mask(Rng& rng, std::size_t size, double rate);

/// A training instance already encoded against the model vocabulary.
struct Example {
  std::vector<std::size_t> ids;
  std::vector<double> extra;
  std::size_t label = 0;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;  ///< mean per-example loss over the epoch
  double val_accuracy = 0.0;
  double best_so_far = 0.0;
};

/// Per-example reference probabilities for the regularized adaptation loss.
struct AdaptTargets {
  double lambda = 0.5;
  std::vector<double> reference_gold_prob;  ///< aligned with the training set
};

struct TrainResult {
  cnn::CnnParams params;  ///< best validation snapshot
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  double best_val_accuracy = 0.0;
};

double accuracy(const cnn::CnnConfig& config, const cnn::CnnParams& params,
                const std::vector<Example>& data);

/// Minibatch ADADELTA training with early stopping on validation accuracy.
/// Epoch order comes from a generator seeded with config.seed; gradients of
/// a minibatch are summed before one optimizer step. Throws TrainingError on
/// a non-finite loss.
TrainResult train(const cnn::CnnConfig& model_config, const TrainConfig& config,
                  cnn::CnnParams initial, const std::vector<Example>& train_set,
                  const std::vector<Example>& validation, const AdaptTargets* adapt = nullptr);

/// Indices of the examples the model labels correctly, in input order.
std::vector<std::size_t> select_instance_indices(const cnn::CnnConfig& config,
                                                 const cnn::CnnParams& params,
                                                 const std::vector<Example>& candidates);

std::vector<Example> select_instances(const cnn::CnnConfig& config, const cnn::CnnParams& params,
                                      const std::vector<Example>& candidates);

/// Trains a model regularized towards a frozen event model. Training starts
/// from a copy of the event model's parameters. `reference_vocab` and
/// `data_vocab` must be identical.
TrainResult fit_adapted(const cnn::CnnConfig& model_config, const TrainConfig& config,
                        const cnn::CnnParams& reference, const corpus::Vocabulary& reference_vocab,
                        const corpus::Vocabulary& data_vocab,
                        const std::vector<Example>& train_set,
                        const std::vector<Example>& validation, double lambda);

/// CSV with header `epoch,train_loss,val_accuracy,best_so_far`.
std::string history_csv(const std::vector<EpochRecord>& history);

}  // namespace crisiscnn::train
