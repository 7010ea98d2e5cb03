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

#include "crisiscnn/train.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "crisiscnn/error.hpp"

namespace crisiscnn::train {

using cnn::CnnConfig;
using cnn::CnnGradients;
using cnn::CnnParams;

void TrainConfig::validate() const {
  if (max_epochs < 1) throw Error("max_epochs must be at least 1");
  if (patience < 1) throw Error("patience must be at least 1");
  if (batch_size < 1) throw Error("batch_size must be at least 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw Error("dropout must lie in [0, 1)");
  if (!(rho > 0.0 && rho < 1.0)) throw Error("rho must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  if (threads < 1) throw Error("threads must be at least 1");
}

double cross_entropy(std::span<const double> probs, std::size_t gold) {
  return -std::log(std::max(probs[gold], kProbFloor));
}

double adaptation_loss(std::span<const double> probs_a, std::span<const double> probs_i,
                       std::size_t gold, double lambda) {
  const double log_pa = std::log(std::max(probs_a[gold], kProbFloor));
  return -(lambda * log_pa + (1.0 - lambda) * probs_i[gold] * log_pa);
}

void adadelta_step(std::span<double> x, std::span<const double> grad, std::span<double> sq_grad,
                   std::span<double> sq_delta, double rho, double epsilon) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double g = grad[i];
    sq_grad[i] = rho * sq_grad[i] + (1.0 - rho) * g * g;
    const double delta = -std::sqrt(sq_delta[i] + epsilon) / std::sqrt(sq_grad[i] + epsilon) * g;
    sq_delta[i] = rho * sq_delta[i] + (1.0 - rho) * delta * delta;
    x[i] += delta;
  }
}

AdadeltaState AdadeltaState::zeros_like(const CnnParams& params, double rho, double epsilon) {
  return {CnnGradients::zeros_like(params), CnnGradients::zeros_like(params), rho, epsilon};
}

void adadelta_step(CnnParams& params, const CnnGradients& grads, AdadeltaState& state) {
  auto ps = cnn::tensors(params);
  const auto gs = cnn::tensors(grads);
  auto sg = cnn::tensors(state.sq_grad);
  auto sd = cnn::tensors(state.sq_delta);
  for (std::size_t k = 0; k < cnn::kTensorCount; ++k) {
    if (k == 0 && !params.embeddings.trainable) continue;
    if (!ps[k].tensor->same_shape(*gs[k].tensor)) {
      throw Error(fmt::format("gradient shape mismatch for '{}'", ps[k].name));
    }
    adadelta_step(ps[k].tensor->flat(), gs[k].tensor->flat(), sg[k].tensor->flat(),
                  sd[k].tensor->flat(), state.rho, state.epsilon);
  }
}

std::vector<double> make_dropout_mask(Rng& rng, std::size_t size, double rate) {
  if (!(rate >= 0.0 && rate < 1.0)) throw Error("dropout rate must lie in [0, 1)");
  std::vector<double> mask(size, 1.0);
  if (rate == 0.0) return mask;
  const double keep_scale = 1.0 / (1.0 - rate);
  for (double& m : mask) m = rng.uniform() < rate ? 0.0 : keep_scale;
  return mask;
}

double accuracy(const CnnConfig& config, const CnnParams& params,
                const std::vector<Example>& data) {
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& ex : data) {
    if (cnn::predict(config, params, ex.ids, ex.extra).label == ex.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

namespace {

struct Worker {
  CnnGradients grads;
  double loss = 0.0;
};

// Forward + backward for batch entries [begin, end) into one worker buffer,
// in index order.
void run_chunk(const CnnConfig& mc, const CnnParams& params, const std::vector<Example>& data,
               const std::vector<std::size_t>& batch,
               const std::vector<std::vector<double>>& masks, const AdaptTargets* adapt,
               std::size_t begin, std::size_t end, Worker& w) {
  w.grads.set_zero();
  w.loss = 0.0;
  for (std::size_t b = begin; b < end; ++b) {
    const Example& ex = data[batch[b]];
    const cnn::ForwardTrace tr = cnn::forward_ids(mc, params, ex.ids, ex.extra, masks[b]);
    const double weight =
        adapt ? adaptation_weight(adapt->reference_gold_prob[batch[b]], adapt->lambda) : 1.0;
    w.loss += weight * cross_entropy(tr.probs, ex.label);
    cnn::backward(mc, params, tr, ex.label, weight, w.grads);
  }
}

}  // namespace

TrainResult train(const CnnConfig& mc, const TrainConfig& config, CnnParams initial,
                  const std::vector<Example>& train_set, const std::vector<Example>& validation,
                  const AdaptTargets* adapt) {
  config.validate();
  cnn::check_shapes(mc, initial);
  if (train_set.empty()) throw Error("training set is empty");
  if (validation.empty()) throw Error("validation set is empty");
  if (adapt && adapt->reference_gold_prob.size() != train_set.size()) {
    throw Error("adaptation targets do not match the training set");
  }

  CnnParams params = std::move(initial);
  AdadeltaState state = AdadeltaState::zeros_like(params, config.rho, config.epsilon);
  const std::size_t n_workers = std::min(config.threads, config.batch_size);
  std::vector<Worker> workers(n_workers);
  for (auto& w : workers) w.grads = CnnGradients::zeros_like(params);

  Rng rng(config.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result;
  result.best_val_accuracy = -1.0;
  std::size_t since_best = 0;
  std::vector<std::vector<double>> masks;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t batch_no = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch_no) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      const std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                           order.begin() + static_cast<std::ptrdiff_t>(stop));
      masks.assign(batch.size(), {});
      if (config.dropout > 0.0) {
        for (auto& m : masks) m = make_dropout_mask(rng, mc.dense_units, config.dropout);
      }

      const std::size_t used = std::min(n_workers, batch.size());
      if (used <= 1) {
        run_chunk(mc, params, train_set, batch, masks, adapt, 0, batch.size(), workers[0]);
      } else {
        std::vector<std::jthread> pool;
        const std::size_t per = (batch.size() + used - 1) / used;
        for (std::size_t w = 0; w < used; ++w) {
          const std::size_t b0 = std::min(batch.size(), w * per);
          const std::size_t b1 = std::min(batch.size(), b0 + per);
          pool.emplace_back([&, w, b0, b1] {
            run_chunk(mc, params, train_set, batch, masks, adapt, b0, b1, workers[w]);
          });
        }
        pool.clear();
        for (std::size_t w = 1; w < used; ++w) {
          workers[0].grads.add(workers[w].grads);
          workers[0].loss += workers[w].loss;
        }
      }
      if (!std::isfinite(workers[0].loss)) {
        throw TrainingError(
            fmt::format("non-finite training loss at epoch {}, batch {}", epoch, batch_no + 1));
      }
      epoch_loss += workers[0].loss;
      adadelta_step(params, workers[0].grads, state);
    }

    const double val_acc = accuracy(mc, params, validation);
    if (val_acc > result.best_val_accuracy) {
      result.best_val_accuracy = val_acc;
      result.best_epoch = epoch;
      result.params = params;
      since_best = 0;
    } else {
      ++since_best;
    }
    result.history.push_back({epoch, epoch_loss / static_cast<double>(train_set.size()), val_acc,
                              result.best_val_accuracy});
    if (since_best >= config.patience) break;
  }
  return result;
}

std::vector<std::size_t> select_instance_indices(const CnnConfig& config, const CnnParams& params,
                                                 const std::vector<Example>& candidates) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& ex = candidates[i];
    if (cnn::predict(config, params, ex.ids, ex.extra).label == ex.label) keep.push_back(i);
  }
  return keep;
}

std::vector<Example> select_instances(const CnnConfig& config, const CnnParams& params,
                                      const std::vector<Example>& candidates) {
  std::vector<Example> out;
  for (std::size_t i : select_instance_indices(config, params, candidates)) {
    out.push_back(candidates[i]);
  }
  return out;
}

TrainResult fit_adapted(const CnnConfig& mc, const TrainConfig& config, const CnnParams& reference,
                        const corpus::Vocabulary& reference_vocab,
                        const corpus::Vocabulary& data_vocab,
                        const std::vector<Example>& train_set,
                        const std::vector<Example>& validation, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("lambda must lie in [0, 1]");
  if (!(reference_vocab == data_vocab)) {
    throw Error("the event model and the training data use different vocabularies");
  }
  cnn::check_shapes(mc, reference, reference_vocab.size());
  AdaptTargets targets;
  targets.lambda = lambda;
  targets.reference_gold_prob.reserve(train_set.size());
  for (const auto& ex : train_set) {
    targets.reference_gold_prob.push_back(
        cnn::predict(mc, reference, ex.ids, ex.extra).probs[ex.label]);
  }
  return train(mc, config, reference, train_set, validation, &targets);
}

std::string history_csv(const std::vector<EpochRecord>& history) {
  std::string out = "epoch,train_loss,val_accuracy,best_so_far\n";
  for (const auto& r : history) {
    out += fmt::format("{},{:.10g},{:.10g},{:.10g}\n", r.epoch, r.train_loss, r.val_accuracy,
                       r.best_so_far);
  }
  return out;
}

}  // namespace crisiscnn::train
