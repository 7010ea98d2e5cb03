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

#include "crisiscnn/config.hpp"

#include <fmt/format.h>

#include <charconv>

#include "crisiscnn/error.hpp"
#include "crisiscnn/io.hpp"

namespace crisiscnn {
namespace {

std::size_t to_size(std::string_view key, std::string_view v) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error(fmt::format("{}: expected a non-negative integer, got '{}'", key, v));
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error(fmt::format("{}: expected a number, got '{}'", key, v));
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(fmt::format("{}: expected true or false, got '{}'", key, v));
}

}  // namespace

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = {
      "max_len",        "embedding_dim",       "num_filters",  "window",
      "pool",           "dense_units",         "dropout",      "batch_size",
      "max_epochs",     "patience",            "seed",         "rho",
      "epsilon",        "vocab_percent",       "embedding_init_scale",
      "trainable_embeddings",                  "lambda",       "mlp_channel",
      "chi2_k",         "mlp_chi2",            "svm_chi2",     "logreg_chi2",
      "baseline_epochs", "baseline_learning_rate", "baseline_l2", "negative_class",
      "event_data",     "out_event_data",      "embeddings",   "event_model"};
  return k;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  if (key == "max_len") model.max_len = to_size(key, value);
  else if (key == "embedding_dim") model.embedding_dim = to_size(key, value);
  else if (key == "num_filters") model.num_filters = to_size(key, value);
  else if (key == "window") model.window = to_size(key, value);
  else if (key == "pool") model.pool = to_size(key, value);
  else if (key == "dense_units") model.dense_units = to_size(key, value);
  else if (key == "dropout") training.dropout = to_double(key, value);
  else if (key == "batch_size") training.batch_size = to_size(key, value);
  else if (key == "max_epochs") training.max_epochs = to_size(key, value);
  else if (key == "patience") training.patience = to_size(key, value);
  else if (key == "seed") training.seed = to_size(key, value);
  else if (key == "rho") training.rho = to_double(key, value);
  else if (key == "epsilon") training.epsilon = to_double(key, value);
  else if (key == "vocab_percent") vocab_percent = to_double(key, value);
  else if (key == "embedding_init_scale") embedding_init_scale = to_double(key, value);
  else if (key == "trainable_embeddings") trainable_embeddings = to_bool(key, value);
  else if (key == "lambda") lambda = to_double(key, value);
  else if (key == "mlp_channel") mlp_channel = to_bool(key, value);
  else if (key == "chi2_k") chi2_k = to_size(key, value);
  else if (key == "mlp_chi2") mlp_chi2 = to_bool(key, value);
  else if (key == "svm_chi2") svm_chi2 = to_bool(key, value);
  else if (key == "logreg_chi2") logreg_chi2 = to_bool(key, value);
  else if (key == "baseline_epochs") baseline.epochs = to_size(key, value);
  else if (key == "baseline_learning_rate") baseline.learning_rate = to_double(key, value);
  else if (key == "baseline_l2") baseline.l2 = to_double(key, value);
  else if (key == "negative_class") negative_class = std::string(value);
  else if (key == "event_data") event_data = std::filesystem::path(value);
  else if (key == "out_event_data") out_event_data = std::filesystem::path(value);
  else if (key == "embeddings") embeddings = std::filesystem::path(value);
  else if (key == "event_model") event_model = std::filesystem::path(value);
  else throw Error(fmt::format("unknown configuration key '{}'", key));
}

void RunConfig::validate() const {
  cnn::CnnConfig shape = model;
  shape.num_classes = std::max<std::size_t>(shape.num_classes, 2);
  shape.validate();
  training.validate();
  if (!(vocab_percent > 0.0 && vocab_percent <= 100.0)) {
    throw Error("vocab_percent must lie in (0, 100]");
  }
  if (!(embedding_init_scale >= 0.0)) throw Error("embedding_init_scale must be >= 0");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("lambda must lie in [0, 1]");
  if ((mlp_chi2 || svm_chi2 || logreg_chi2) && !chi2_k) {
    throw Error("chi-squared selection is enabled but chi2_k is not set");
  }
  if (chi2_k && *chi2_k == 0) throw Error("chi2_k must be at least 1");
  if (baseline.epochs == 0) throw Error("baseline_epochs must be at least 1");
}

RunConfig RunConfig::parse(std::string_view text, std::string_view source) {
  RunConfig cfg;
  const auto lines = io::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = io::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(std::string(source), i + 1, "expected 'key = value'");
    }
    try {
      cfg.set(io::trim(line.substr(0, eq)), io::trim(line.substr(eq + 1)));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(std::string(source), i + 1, e.what());
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  return parse(io::read_file(path), path.string());
}

std::string RunConfig::to_text() const {
  std::string out;
  auto put = [&](std::string_view k, const auto& v) { out += fmt::format("{} = {}\n", k, v); };
  put("max_len", model.max_len);
  put("embedding_dim", model.embedding_dim);
  put("num_filters", model.num_filters);
  put("window", model.window);
  put("pool", model.pool);
  put("dense_units", model.dense_units);
  put("dropout", training.dropout);
  put("batch_size", training.batch_size);
  put("max_epochs", training.max_epochs);
  put("patience", training.patience);
  put("seed", training.seed);
  put("rho", training.rho);
  put("epsilon", training.epsilon);
  put("vocab_percent", vocab_percent);
  put("embedding_init_scale", embedding_init_scale);
  put("trainable_embeddings", trainable_embeddings);
  put("lambda", lambda);
  put("mlp_channel", mlp_channel);
  if (chi2_k) put("chi2_k", *chi2_k);
  put("mlp_chi2", mlp_chi2);
  put("svm_chi2", svm_chi2);
  put("logreg_chi2", logreg_chi2);
  put("baseline_epochs", baseline.epochs);
  put("baseline_learning_rate", baseline.learning_rate);
  put("baseline_l2", baseline.l2);
  put("negative_class", negative_class);
  if (event_data) put("event_data", event_data->string());
  if (out_event_data) put("out_event_data", out_event_data->string());
  if (embeddings) put("embeddings", embeddings->string());
  if (event_model) put("event_model", event_model->string());
  return out;
}

}  // namespace crisiscnn
