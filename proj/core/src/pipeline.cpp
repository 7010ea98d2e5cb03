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

#include "crisiscnn/pipeline.hpp"

#include <fmt/format.h>

#include <nlohmann/json.hpp>

#include "crisiscnn/embeddings.hpp"
#include "crisiscnn/error.hpp"

namespace crisiscnn::pipeline {

using json = nlohmann::json;
using corpus::LabeledExample;

std::vector<double> CnnModel::extra(const corpus::TokenSeq& tokens) const {
  if (!channel) return {};
  return channel->dense(tokens);
}

train::Example CnnModel::encode(const LabeledExample& example) const {
  return {vocab.encode(example.tokens, config.max_len), extra(example.tokens), example.label};
}

std::vector<train::Example> CnnModel::encode(const std::vector<LabeledExample>& examples) const {
  std::vector<train::Example> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(encode(ex));
  return out;
}

cnn::Prediction CnnModel::predict(const corpus::TokenSeq& tokens) const {
  return cnn::predict(config, params, vocab.encode(tokens, config.max_len), extra(tokens));
}

baselines::LinearPrediction LinearClassifier::predict(const corpus::TokenSeq& tokens) const {
  return baselines::predict_linear(model, features.sparse(tokens));
}

std::string kind_name(const Model& model) {
  if (std::holds_alternative<CnnModel>(model)) return "cnn";
  const auto& lin = std::get<LinearClassifier>(model);
  return lin.model.kind == baselines::LinearKind::logistic ? "logreg" : "svm";
}

const corpus::LabelSchema& schema_of(const Model& model) {
  return std::visit([](const auto& m) -> const corpus::LabelSchema& { return m.schema; }, model);
}

Scored score(const Model& model, const corpus::TokenSeq& tokens) {
  if (const auto* m = std::get_if<CnnModel>(&model)) {
    auto p = m->predict(tokens);
    return {p.label, std::move(p.probs)};
  }
  auto p = std::get<LinearClassifier>(model).predict(tokens);
  return {p.label, std::move(p.scores)};
}

// ---------------------------------------------------------------------------
// Container metadata

namespace {

json features_to_json(const features::FeatureExtractor& fx) {
  return {{"ngrams", fx.vocab.ngrams()},
          {"doc_freq", fx.vocab.doc_freq()},
          {"num_docs", fx.vocab.num_docs()},
          {"columns", fx.columns},
          {"selected", fx.selected}};
}

features::FeatureExtractor features_from_json(const json& j) {
  features::FeatureExtractor fx;
  fx.vocab = features::NgramVocab(j.at("ngrams").get<std::vector<std::string>>(),
                                  j.at("doc_freq").get<std::vector<std::uint64_t>>(),
                                  j.at("num_docs").get<std::uint64_t>());
  fx.columns = j.at("columns").get<std::vector<std::size_t>>();
  fx.selected = j.at("selected").get<bool>();
  return fx;
}

json cnn_config_to_json(const cnn::CnnConfig& c) {
  return {{"max_len", c.max_len},         {"embedding_dim", c.embedding_dim},
          {"num_filters", c.num_filters}, {"window", c.window},
          {"pool", c.pool},               {"dense_units", c.dense_units},
          {"num_classes", c.num_classes}, {"extra_dim", c.extra_dim}};
}

cnn::CnnConfig cnn_config_from_json(const json& j) {
  cnn::CnnConfig c;
  c.max_len = j.at("max_len");
  c.embedding_dim = j.at("embedding_dim");
  c.num_filters = j.at("num_filters");
  c.window = j.at("window");
  c.pool = j.at("pool");
  c.dense_units = j.at("dense_units");
  c.num_classes = j.at("num_classes");
  c.extra_dim = j.at("extra_dim");
  c.validate();
  return c;
}

json cnn_metadata(const CnnModel& m) {
  const auto& tokens = m.vocab.tokens();
  const auto& freqs = m.vocab.frequencies();
  json j;
  j["kind"] = "cnn";
  j["schema"] = m.schema.classes();
  j["vocab"] = {{"tokens", std::vector<std::string>(tokens.begin() + 2, tokens.end())},
                {"frequencies", std::vector<std::uint64_t>(freqs.begin() + 2, freqs.end())},
                {"coverage_percent", m.vocab.coverage_percent()}};
  j["config"] = cnn_config_to_json(m.config);
  j["embeddings"] = {{"trainable", m.params.embeddings.trainable},
                     {"pretrained_rows", m.params.embeddings.pretrained_rows},
                     {"warning", m.params.embeddings.warning}};
  j["channel"] = m.channel ? features_to_json(*m.channel) : json(nullptr);
  return j;
}

json linear_metadata(const LinearClassifier& m, const std::string& kind) {
  json j;
  j["kind"] = kind;
  j["schema"] = m.schema.classes();
  j["features"] = features_to_json(m.features);
  j["training"] = {{"l2", m.model.l2},
                   {"epochs", m.model.epochs},
                   {"seed", m.model.seed},
                   {"epoch_objective", m.model.epoch_objective}};
  return j;
}

Matrix bias_matrix(const std::vector<double>& b) {
  Matrix m(b.size(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) m(i, 0) = b[i];
  return m;
}

void require_shape(const Matrix& m, std::size_t rows, std::size_t cols, std::string_view name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(fmt::format("section '{}' is {}x{}, expected {}x{}", name, m.rows(), m.cols(),
                            rows, cols));
  }
}

}  // namespace

container::ModelContainer to_container(const Model& model) {
  container::ModelContainer c;
  if (const auto* m = std::get_if<CnnModel>(&model)) {
    c.metadata = cnn_metadata(*m).dump();
    for (const auto& t : cnn::tensors(m->params)) {
      c.sections.push_back(container::Section::from_matrix(std::string(t.name), *t.tensor));
    }
    return c;
  }
  const auto& lin = std::get<LinearClassifier>(model);
  c.metadata = linear_metadata(lin, kind_name(model)).dump();
  c.sections.push_back(container::Section::from_matrix("weights", lin.model.weights));
  c.sections.push_back(container::Section::from_matrix("bias", bias_matrix(lin.model.bias)));
  return c;
}

Model from_container(const container::ModelContainer& c) {
  json j;
  try {
    j = json::parse(c.metadata);
    const std::string kind = j.at("kind");
    corpus::LabelSchema schema(j.at("schema").get<std::vector<std::string>>());

    if (kind == "cnn") {
      CnnModel m;
      m.schema = std::move(schema);
      const auto& v = j.at("vocab");
      m.vocab = corpus::Vocabulary(v.at("tokens").get<std::vector<std::string>>(),
                                   v.at("frequencies").get<std::vector<std::uint64_t>>(),
                                   v.at("coverage_percent").get<double>());
      m.config = cnn_config_from_json(j.at("config"));
      for (auto& t : cnn::tensors(m.params)) *t.tensor = c.section(t.name).to_matrix();
      const auto& e = j.at("embeddings");
      m.params.embeddings.trainable = e.at("trainable");
      m.params.embeddings.pretrained_rows = e.at("pretrained_rows");
      m.params.embeddings.warning = e.at("warning");
      if (!j.at("channel").is_null()) m.channel = features_from_json(j.at("channel"));
      cnn::check_shapes(m.config, m.params, m.vocab.size());
      return m;
    }
    if (kind == "logreg" || kind == "svm") {
      LinearClassifier m;
      m.schema = std::move(schema);
      m.features = features_from_json(j.at("features"));
      m.model.kind = kind == "logreg" ? baselines::LinearKind::logistic
                                      : baselines::LinearKind::svm_hinge;
      m.model.weights = c.section("weights").to_matrix();
      require_shape(m.model.weights, m.schema.size(), m.features.dimension(), "weights");
      const Matrix bias = c.section("bias").to_matrix();
      require_shape(bias, m.schema.size(), 1, "bias");
      m.model.bias.assign(bias.flat().begin(), bias.flat().end());
      const auto& t = j.at("training");
      m.model.l2 = t.at("l2");
      m.model.epochs = t.at("epochs");
      m.model.seed = t.at("seed");
      m.model.epoch_objective = t.at("epoch_objective").get<std::vector<double>>();
      return m;
    }
    throw Error(fmt::format("unknown model kind '{}'", kind));
  } catch (const json::exception& e) {
    throw Error(fmt::format("bad model metadata: {}", e.what()));
  }
}

void save_model(const std::filesystem::path& path, const Model& model) {
  container::save(path, to_container(model));
}

Model load_model(const std::filesystem::path& path) {
  return from_container(container::load(path));
}

// ---------------------------------------------------------------------------
// Training pipelines

namespace {

// Fixed offsets so each consumer of randomness has its own stream.
constexpr std::uint64_t kEmbeddingSeedOffset = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kParamSeedOffset = 0xD1B54A32D192ED03ULL;

std::size_t channel_chi2_k(const RunConfig& config, bool use_chi2) {
  if (!use_chi2) return 0;
  return config.chi2_k.value();  // validate() guarantees presence
}

TrainedCnn finish(CnnModel model, train::TrainResult result, std::size_t train_size) {
  TrainedCnn out;
  model.params = std::move(result.params);
  out.model = std::move(model);
  out.history = std::move(result.history);
  out.best_epoch = result.best_epoch;
  out.best_val_accuracy = result.best_val_accuracy;
  out.train_size = train_size;
  return out;
}

void require_data(const std::vector<LabeledExample>& train_set,
                  const std::vector<LabeledExample>& validation) {
  if (train_set.empty()) throw Error("training set is empty");
  if (validation.empty()) throw Error("validation set is empty");
}

}  // namespace

TrainedCnn train_cnn(const RunConfig& config, const corpus::LabelSchema& schema,
                     const std::vector<LabeledExample>& train_set,
                     const std::vector<LabeledExample>& validation) {
  config.validate();
  require_data(train_set, validation);

  CnnModel model;
  model.schema = schema;
  model.vocab = corpus::build_vocab(train_set, config.vocab_percent);
  if (config.mlp_channel) {
    model.channel = features::fit_features(train_set, schema.size(),
                                           channel_chi2_k(config, config.mlp_chi2));
  }
  model.config = config.model;
  model.config.num_classes = schema.size();
  model.config.extra_dim = model.channel ? model.channel->dimension() : 0;
  model.config.validate();

  const std::uint64_t seed = config.training.seed;
  embeddings::EmbeddingTable table;
  if (config.embeddings) {
    table = embeddings::load_pretrained(*config.embeddings, model.vocab,
                                        seed ^ kEmbeddingSeedOffset);
    if (table.dim() != model.config.embedding_dim) {
      throw Error(fmt::format("{}: embedding dimension {} does not match embedding_dim = {}",
                              config.embeddings->string(), table.dim(),
                              model.config.embedding_dim));
    }
  } else {
    table = embeddings::random_init(model.vocab, model.config.embedding_dim,
                                    seed ^ kEmbeddingSeedOffset, config.embedding_init_scale);
  }
  table.trainable = config.trainable_embeddings;

  cnn::CnnParams init = cnn::init_params(model.config, std::move(table), seed ^ kParamSeedOffset);
  auto result = train::train(model.config, config.training, std::move(init),
                             model.encode(train_set), model.encode(validation));
  return finish(std::move(model), std::move(result), train_set.size());
}

TrainedCnn adapt_reg(const RunConfig& config, const CnnModel& event_model,
                     const std::vector<LabeledExample>& train_set,
                     const std::vector<LabeledExample>& validation) {
  config.validate();
  require_data(train_set, validation);
  CnnModel model = event_model;
  auto result = train::fit_adapted(model.config, config.training, event_model.params,
                                   event_model.vocab, model.vocab, model.encode(train_set),
                                   model.encode(validation), config.lambda);
  return finish(std::move(model), std::move(result), train_set.size());
}

std::vector<LabeledExample> select_out_of_event(const CnnModel& event_model,
                                                const std::vector<LabeledExample>& out_pool) {
  const auto keep = train::select_instance_indices(event_model.config, event_model.params,
                                                   event_model.encode(out_pool));
  std::vector<LabeledExample> out;
  out.reserve(keep.size());
  for (auto i : keep) out.push_back(out_pool[i]);
  return out;
}

TrainedCnn adapt_select(const RunConfig& config, const CnnModel& event_model,
                        const std::vector<LabeledExample>& event_train,
                        const std::vector<LabeledExample>& out_pool,
                        const std::vector<LabeledExample>& validation) {
  auto selected = select_out_of_event(event_model, out_pool);
  std::vector<LabeledExample> combined = event_train;
  combined.insert(combined.end(), selected.begin(), selected.end());
  TrainedCnn out = train_cnn(config, event_model.schema, combined, validation);
  out.selected = selected.size();
  return out;
}

LinearClassifier train_linear(const RunConfig& config, baselines::LinearKind kind,
                              const corpus::LabelSchema& schema,
                              const std::vector<LabeledExample>& train_set) {
  config.validate();
  if (train_set.empty()) throw Error("training set is empty");
  const bool chi2 = kind == baselines::LinearKind::logistic ? config.logreg_chi2 : config.svm_chi2;

  LinearClassifier m;
  m.schema = schema;
  m.features = features::fit_features(train_set, schema.size(), channel_chi2_k(config, chi2));
  std::vector<features::SparseVec> x;
  std::vector<std::size_t> y;
  x.reserve(train_set.size());
  y.reserve(train_set.size());
  for (const auto& ex : train_set) {
    x.push_back(m.features.sparse(ex.tokens));
    y.push_back(ex.label);
  }
  baselines::LinearTrainConfig lc = config.baseline;
  lc.seed = config.training.seed;
  m.model = kind == baselines::LinearKind::logistic
                ? baselines::train_logreg(x, y, schema.size(), lc)
                : baselines::train_linear_svm(x, y, schema.size(), lc);
  return m;
}

}  // namespace crisiscnn::pipeline
