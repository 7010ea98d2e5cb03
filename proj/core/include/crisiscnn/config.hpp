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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crisiscnn/baselines.hpp"
#include "crisiscnn/cnn.hpp"
#include "crisiscnn/train.hpp"

namespace crisiscnn {

/// Every tunable of a run as one flat key=value document.
///
/// Text format: UTF-8 lines `key = value`, `#` starts a comment, blank lines
/// are ignored, unknown keys are rejected. Every key has a default except
/// the data paths and chi2_k.
struct RunConfig {
  cnn::CnnConfig model;           // num_classes / extra_dim are set from the data
  train::TrainConfig training;
  double vocab_percent = 90.0;
  double embedding_init_scale = 0.25;
  bool trainable_embeddings = true;
  double lambda = 0.5;

  bool mlp_channel = false;       ///< feed TF-IDF features to the dense layer
  std::optional<std::size_t> chi2_k;
  bool mlp_chi2 = false;          ///< chi-squared selection for the MLP channel
  bool svm_chi2 = false;          ///< ... for the SVM baseline
  bool logreg_chi2 = false;       ///< ... for the logistic baseline

  baselines::LinearTrainConfig baseline;

  std::string negative_class = "Not related or irrelevant";

  std::optional<std::filesystem::path> event_data;
  std::optional<std::filesystem::path> out_event_data;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> event_model;

  /// Applies one key. Throws Error for an unknown key or a bad value.
  void set(std::string_view key, std::string_view value);

  /// Throws Error if any value is out of range (including a chi-squared
  /// switch without chi2_k).
  void validate() const;

  /// Parses the text format over the defaults.
  static RunConfig parse(std::string_view text, std::string_view source = "<config>");
  static RunConfig load(const std::filesystem::path& path);

  /// Serializes every key (data paths only when set) in a fixed order.
  std::string to_text() const;

  static const std::vector<std::string>& keys();
};

}  // namespace crisiscnn
