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
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crisiscnn/baselines.hpp"
#include "crisiscnn/cnn.hpp"
#include "crisiscnn/config.hpp"
#include "crisiscnn/container.hpp"
#include "crisiscnn/corpus.hpp"
#include "crisiscnn/features.hpp"
#include "crisiscnn/train.hpp"

namespace crisiscnn::pipeline {

/// A CNN together with everything needed to apply it to raw tokens.
struct CnnModel {
  corpus::LabelSchema schema;
  corpus::Vocabulary vocab;
  cnn::CnnConfig config;
  cnn::CnnParams params;
  /// TF-IDF channel feeding the dense layer (MLP-CNN), when enabled.
  std::optional<features::FeatureExtractor> channel;

  std::vector<double> extra(const corpus::TokenSeq& tokens) const;
  train::Example encode(const corpus::LabeledExample& example) const;
  std::vector<train::Example> encode(const std::vector<corpus::LabeledExample>& examples) const;
  cnn::Prediction predict(const corpus::TokenSeq& tokens) const;
};

struct LinearClassifier {
  corpus::LabelSchema schema;
  features::FeatureExtractor features;
  baselines::LinearModel model;

  baselines::LinearPrediction predict(const corpus::TokenSeq& tokens) const;
};

using Model = std::variant<CnnModel, LinearClassifier>;

/// "cnn", "logreg" or "svm".
std::string kind_name(const Model& model);
const corpus::LabelSchema& schema_of(const Model& model);

struct Scored {
  std::size_t label = 0;
  /// Probabilities for the CNN and logistic models, margins for the SVM.
  std::vector<double> scores;
};
Scored score(const Model& model, const corpus::TokenSeq& tokens);

container::ModelContainer to_container(const Model& model);
Model from_container(const container::ModelContainer& c);
void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

struct TrainedCnn {
  CnnModel model;
  std::vector<train::EpochRecord> history;
  std::size_t best_epoch = 0;
  double best_val_accuracy = 0.0;
  std::size_t train_size = 0;
  std::size_t selected = 0;  ///< adapt-select only
};

/// Builds the vocabulary (and TF-IDF channel) from `train_set`, initializes
/// embeddings from config.embeddings or at random, and trains.
TrainedCnn train_cnn(const RunConfig& config, const corpus::LabelSchema& schema,
                     const std::vector<corpus::LabeledExample>& train_set,
                     const std::vector<corpus::LabeledExample>& validation);

/// Regularized adaptation: trains on `train_set` (event + out-of-event) with
/// the adaptation loss against the frozen `event_model`, reusing its
/// vocabulary and channel.
TrainedCnn adapt_reg(const RunConfig& config, const CnnModel& event_model,
                     const std::vector<corpus::LabeledExample>& train_set,
                     const std::vector<corpus::LabeledExample>& validation);

/// The out-of-event examples `event_model` labels correctly, in input order.
std::vector<corpus::LabeledExample> select_out_of_event(
    const CnnModel& event_model, const std::vector<corpus::LabeledExample>& out_pool);

/// Instance selection: keeps the out-of-event examples the event model
/// labels correctly, then trains a fresh model on event + selected.
TrainedCnn adapt_select(const RunConfig& config, const CnnModel& event_model,
                        const std::vector<corpus::LabeledExample>& event_train,
                        const std::vector<corpus::LabeledExample>& out_pool,
                        const std::vector<corpus::LabeledExample>& validation);

/// TF-IDF features (chi-squared selected when the kind's switch is on) and
/// an SGD-trained linear model.
LinearClassifier train_linear(const RunConfig& config, baselines::LinearKind kind,
                              const corpus::LabelSchema& schema,
                              const std::vector<corpus::LabeledExample>& train_set);

}  // namespace crisiscnn::pipeline
