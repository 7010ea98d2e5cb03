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

#include "crisiscnn/baselines.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numeric>

#include "crisiscnn/error.hpp"

namespace crisiscnn::baselines {

using features::SparseVec;

namespace {

// Weights are stored as scale * v so the per-example L2 shrink is O(1).
struct ScaledWeights {
  Matrix v;
  double scale = 1.0;

  double score(std::size_t k, const SparseVec& x) const {
    double s = 0.0;
    const auto row = v.row(k);
    for (const auto& [j, val] : x.entries) s += row[j] * val;
    return scale * s;
  }

  void add(std::size_t k, const SparseVec& x, double step) {
    auto row = v.row(k);
    const double adj = step / scale;
    for (const auto& [j, val] : x.entries) row[j] += adj * val;
  }

  void shrink(double factor) {
    scale /= factor;
    if (scale < 1e-100) materialize();
  }

  void materialize() {
    for (double& w : v.flat()) w *= scale;
    scale = 1.0;
  }
};

void check_inputs(const std::vector<SparseVec>& x, const std::vector<std::size_t>& y,
                  std::size_t num_classes) {
  if (x.empty()) throw Error("cannot train a linear model on an empty set");
  if (x.size() != y.size()) throw Error("feature rows and labels differ in count");
  if (num_classes < 2) throw Error("a classifier needs at least two classes");
  for (std::size_t label : y) {
    if (label >= num_classes) throw Error("label outside the class range");
  }
}

std::size_t max_dimension(const std::vector<SparseVec>& x) {
  std::size_t dim = 0;
  for (const auto& v : x) dim = std::max(dim, v.dimension);
  return dim;
}

template <typename Update>
LinearModel fit(LinearKind kind, const std::vector<SparseVec>& x,
                const std::vector<std::size_t>& y, std::size_t num_classes,
                const LinearTrainConfig& config, Update update) {
  check_inputs(x, y, num_classes);
  if (!(config.learning_rate > 0.0)) throw Error("learning rate must be positive");
  if (!(config.l2 >= 0.0)) throw Error("l2 strength must be non-negative");

  ScaledWeights w{Matrix(num_classes, max_dimension(x)), 1.0};
  std::vector<double> bias(num_classes, 0.0);
  LinearModel model;
  model.kind = kind;
  model.l2 = config.l2;
  model.epochs = config.epochs;
  model.seed = config.seed;

  Rng rng(config.seed);
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const double shrink = 1.0 + config.learning_rate * config.l2;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      update(w, bias, x[i], y[i], config.learning_rate);
      w.shrink(shrink);
    }
    ScaledWeights snapshot = w;
    snapshot.materialize();
    model.weights = snapshot.v;
    model.bias = bias;
    const double obj = linear_objective(model, x, y);
    if (!std::isfinite(obj)) {
      throw TrainingError(fmt::format("non-finite training objective at epoch {}", epoch));
    }
    model.epoch_objective.push_back(obj);
  }
  w.materialize();
  model.weights = std::move(w.v);
  model.bias = std::move(bias);
  return model;
}

}  // namespace

LinearModel train_logreg(const std::vector<SparseVec>& x, const std::vector<std::size_t>& y,
                         std::size_t num_classes, const LinearTrainConfig& config) {
  return fit(LinearKind::logistic, x, y, num_classes, config,
             [num_classes](ScaledWeights& w, std::vector<double>& bias, const SparseVec& xi,
                           std::size_t yi, double lr) {
               std::vector<double> logits(num_classes);
               for (std::size_t k = 0; k < num_classes; ++k) logits[k] = w.score(k, xi) + bias[k];
               const auto p = softmax(logits);
               for (std::size_t k = 0; k < num_classes; ++k) {
                 const double g = p[k] - (k == yi ? 1.0 : 0.0);
                 w.add(k, xi, -lr * g);
                 bias[k] -= lr * g;
               }
             });
}

LinearModel train_linear_svm(const std::vector<SparseVec>& x, const std::vector<std::size_t>& y,
                             std::size_t num_classes, const LinearTrainConfig& config) {
  return fit(LinearKind::svm_hinge, x, y, num_classes, config,
             [num_classes](ScaledWeights& w, std::vector<double>& bias, const SparseVec& xi,
                           std::size_t yi, double lr) {
               for (std::size_t k = 0; k < num_classes; ++k) {
                 const double target = k == yi ? 1.0 : -1.0;
                 if (target * (w.score(k, xi) + bias[k]) < 1.0) {
                   w.add(k, xi, lr * target);
                   bias[k] += lr * target;
                 }
               }
             });
}

LinearPrediction predict_linear(const LinearModel& model, const SparseVec& x) {
  LinearPrediction out;
  out.scores.resize(model.num_classes());
  for (std::size_t k = 0; k < model.num_classes(); ++k) {
    const auto row = model.weights.row(k);
    double s = model.bias[k];
    for (const auto& [j, v] : x.entries) {
      if (j < row.size()) s += row[j] * v;
    }
    out.scores[k] = s;
  }
  if (model.kind == LinearKind::logistic) out.scores = softmax(out.scores);
  out.label = argmax(out.scores);
  return out;
}

double linear_objective(const LinearModel& model, const std::vector<SparseVec>& x,
                        const std::vector<std::size_t>& y) {
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto pred = predict_linear(model, x[i]);
    if (model.kind == LinearKind::logistic) {
      loss -= std::log(std::max(pred.scores[y[i]], 1e-300));
    } else {
      for (std::size_t k = 0; k < model.num_classes(); ++k) {
        const double target = k == y[i] ? 1.0 : -1.0;
        loss += std::max(0.0, 1.0 - target * pred.scores[k]);
      }
    }
  }
  double sq = 0.0;
  for (double w : model.weights.flat()) sq += w * w;
  return loss / static_cast<double>(x.size()) + 0.5 * model.l2 * sq;
}

}  // namespace crisiscnn::baselines
