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

#include "crisiscnn/commands.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <istream>
#include <memory>
#include <nlohmann/json.hpp>
#include <ostream>
#include <string>
#include <tuple>

#include "crisiscnn/error.hpp"
#include "crisiscnn/io.hpp"
#include "crisiscnn/synth.hpp"
#include "crisiscnn/textprep.hpp"

namespace crisiscnn::commands {

using corpus::LabeledExample;
using corpus::LabelSchema;
using Examples = std::vector<LabeledExample>;

// ---------------------------------------------------------------------------
// Shared helpers

EventData load_event_data(const path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(fmt::format("{}: not a prepared data directory", dir.string()));
  }
  EventData d;
  d.schema = LabelSchema::load(dir / "schema.txt");
  d.train = corpus::load_tsv(dir / "train.tsv", d.schema);
  d.dev = corpus::load_tsv(dir / "dev.tsv", d.schema);
  d.test = corpus::load_tsv(dir / "test.tsv", d.schema);
  return d;
}

Examples load_out_of_event(const path& source, const LabelSchema& schema) {
  const corpus::TsvOptions opts{false, corpus::Origin::out_of_event};
  if (!std::filesystem::is_directory(source)) return corpus::load_tsv(source, schema, opts);
  Examples pool;
  for (const char* name : {"train.tsv", "dev.tsv", "test.tsv"}) {
    if (!std::filesystem::exists(source / name)) continue;
    auto part = corpus::load_tsv(source / name, schema, opts);
    pool.insert(pool.end(), part.begin(), part.end());
  }
  if (pool.empty()) throw Error(fmt::format("{}: no out-of-event examples", source.string()));
  return pool;
}

std::size_t threads_from_env() {
  const char* env = std::getenv("CRISISCNN_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  const std::string_view s(env);
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || ptr != s.data() + s.size() || n == 0) {
    throw Error(fmt::format("CRISISCNN_THREADS must be a positive integer, got '{}'", s));
  }
  return n;
}

RunConfig make_config(const std::optional<path>& file, const std::vector<std::string>& overrides) {
  RunConfig cfg = file ? RunConfig::load(*file) : RunConfig{};
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw Error(fmt::format("expected key=value, got '{}'", o));
    cfg.set(io::trim(std::string_view(o).substr(0, eq)),
            io::trim(std::string_view(o).substr(eq + 1)));
  }
  cfg.training.threads = threads_from_env();
  cfg.validate();
  return cfg;
}

eval::EvalReport evaluate_model(const pipeline::Model& model, const Examples& data) {
  std::vector<std::size_t> gold;
  std::vector<std::vector<double>> probs;
  gold.reserve(data.size());
  probs.reserve(data.size());
  for (const auto& ex : data) {
    gold.push_back(ex.label);
    probs.push_back(pipeline::score(model, ex.tokens).scores);
  }
  return eval::evaluate(pipeline::schema_of(model), gold, probs);
}

double binary_merged_auc(const pipeline::Model& model, const Examples& data,
                         std::string_view negative_class) {
  const auto neg = pipeline::schema_of(model).index_of(negative_class);
  if (!neg) throw Error(fmt::format("model schema has no class '{}'", negative_class));
  std::vector<double> scores;
  std::vector<bool> positive(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto s = pipeline::score(model, data[i].tokens).scores;
    // 1 - P(neg) for probabilistic models; the negated margin ranks the same way.
    scores.push_back(pipeline::kind_name(model) == "svm" ? -s[*neg] : 1.0 - s[*neg]);
    positive[i] = data[i].label != *neg;
  }
  return eval::roc_auc(scores, positive);
}

// ---------------------------------------------------------------------------
// prepare

void prepare(const PrepareOptions& options, std::ostream& log) {
  LabelSchema schema = LabelSchema::load(options.schema);
  Examples examples = corpus::load_tsv(options.input, schema, {options.has_header});
  if (options.binary) {
    std::tie(examples, schema) =
        corpus::merge_to_binary(std::move(examples), schema, options.negative_class);
  }
  const auto split = corpus::stratified_split(examples, schema, options.seed);
  const auto vocab = corpus::build_vocab(split.train, options.vocab_percent);

  nlohmann::ordered_json manifest;
  manifest["input"] = options.input.string();
  manifest["seed"] = options.seed;
  manifest["fractions"] = {{"train", corpus::kDefaultFractions[0]},
                           {"dev", corpus::kDefaultFractions[1]},
                           {"test", corpus::kDefaultFractions[2]}};
  manifest["binary"] = options.binary;
  manifest["classes"] = schema.classes();
  manifest["counts"] = {{"train", split.train.size()},
                        {"dev", split.validation.size()},
                        {"test", split.test.size()}};
  manifest["vocab_percent"] = options.vocab_percent;
  manifest["vocab_size"] = vocab.size();

  corpus::write_tsv(options.out / "train.tsv", split.train, schema);
  corpus::write_tsv(options.out / "dev.tsv", split.validation, schema);
  corpus::write_tsv(options.out / "test.tsv", split.test, schema);
  vocab.save(options.out / "vocab.tsv");
  schema.save(options.out / "schema.txt");
  io::write_file_atomic(options.out / "manifest.json", manifest.dump(2) + "\n");

  log << fmt::format("prepared {} examples: train {}, dev {}, test {}; vocabulary {} types\n",
                     examples.size(), split.train.size(), split.validation.size(),
                     split.test.size(), vocab.size());
}

// ---------------------------------------------------------------------------
// train

TrainMode parse_mode(std::string_view s) {
  if (s == "event") return TrainMode::event;
  if (s == "out") return TrainMode::out;
  if (s == "event+out") return TrainMode::event_out;
  if (s == "adapt-reg") return TrainMode::adapt_reg;
  if (s == "adapt-select") return TrainMode::adapt_select;
  throw Error(fmt::format("unknown mode '{}' (event, out, event+out, adapt-reg, adapt-select)", s));
}

ModelKind parse_kind(std::string_view s) {
  if (s == "cnn") return ModelKind::cnn;
  if (s == "logreg") return ModelKind::logreg;
  if (s == "svm") return ModelKind::svm;
  throw Error(fmt::format("unknown model kind '{}' (cnn, logreg, svm)", s));
}

std::string_view mode_name(TrainMode m) {
  switch (m) {
    case TrainMode::event: return "event";
    case TrainMode::out: return "out";
    case TrainMode::event_out: return "event+out";
    case TrainMode::adapt_reg: return "adapt-reg";
    case TrainMode::adapt_select: return "adapt-select";
  }
  return "?";
}

namespace {

std::string_view kind_text(ModelKind k) {
  switch (k) {
    case ModelKind::cnn: return "cnn";
    case ModelKind::logreg: return "logreg";
    case ModelKind::svm: return "svm";
  }
  return "?";
}

Examples concat(const Examples& a, const Examples& b) {
  Examples out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

double linear_accuracy(const pipeline::LinearClassifier& m, const Examples& data) {
  std::size_t correct = 0;
  for (const auto& ex : data) correct += m.predict(ex.tokens).label == ex.label;
  return data.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(data.size());
}

baselines::LinearKind linear_kind(ModelKind k) {
  return k == ModelKind::logreg ? baselines::LinearKind::logistic
                                : baselines::LinearKind::svm_hinge;
}

}  // namespace

TrainOutcome run_training(const RunConfig& config, TrainMode mode, ModelKind kind,
                          const EventData& event, const Examples& out_pool,
                          const pipeline::Model* event_model) {
  const bool needs_out = mode != TrainMode::event;
  if (needs_out && out_pool.empty()) {
    throw Error(fmt::format("mode {} needs out-of-event data", mode_name(mode)));
  }
  const bool adapt = mode == TrainMode::adapt_reg || mode == TrainMode::adapt_select;
  if (adapt) {
    if (event_model == nullptr) {
      throw Error(fmt::format("mode {} requires an event model (--event-model)", mode_name(mode)));
    }
    if (pipeline::kind_name(*event_model) != kind_text(kind)) {
      throw Error(fmt::format("event model is a {} model, expected {}",
                              pipeline::kind_name(*event_model), kind_text(kind)));
    }
    if (pipeline::schema_of(*event_model) != event.schema) {
      throw Error("event model schema differs from the event data schema");
    }
  }

  TrainOutcome out;
  if (kind == ModelKind::cnn) {
    pipeline::TrainedCnn t;
    const auto* em = adapt ? &std::get<pipeline::CnnModel>(*event_model) : nullptr;
    switch (mode) {
      case TrainMode::event:
        t = pipeline::train_cnn(config, event.schema, event.train, event.dev);
        break;
      case TrainMode::out:
        t = pipeline::train_cnn(config, event.schema, out_pool, event.dev);
        break;
      case TrainMode::event_out:
        t = pipeline::train_cnn(config, event.schema, concat(event.train, out_pool), event.dev);
        break;
      case TrainMode::adapt_reg:
        t = pipeline::adapt_reg(config, *em, concat(event.train, out_pool), event.dev);
        break;
      case TrainMode::adapt_select:
        t = pipeline::adapt_select(config, *em, event.train, out_pool, event.dev);
        break;
    }
    out.history = std::move(t.history);
    out.train_size = t.train_size;
    out.selected = t.selected;
    out.dev_accuracy = t.best_val_accuracy;
    out.model = std::move(t.model);
    return out;
  }

  Examples train_set;
  switch (mode) {
    case TrainMode::event: train_set = event.train; break;
    case TrainMode::out: train_set = out_pool; break;
    case TrainMode::event_out: train_set = concat(event.train, out_pool); break;
    case TrainMode::adapt_reg:
      throw Error("regularized adaptation is defined for CNN models only");
    case TrainMode::adapt_select: {
      const auto& em = std::get<pipeline::LinearClassifier>(*event_model);
      train_set = event.train;
      for (const auto& ex : out_pool) {
        if (em.predict(ex.tokens).label == ex.label) {
          train_set.push_back(ex);
          ++out.selected;
        }
      }
      break;
    }
  }
  auto m = pipeline::train_linear(config, linear_kind(kind), event.schema, train_set);
  out.dev_accuracy = linear_accuracy(m, event.dev);
  out.train_size = train_set.size();
  out.model = std::move(m);
  return out;
}

void train(const TrainOptions& options, std::ostream& log) {
  RunConfig cfg = make_config(options.config, options.overrides);
  if (options.event_data) cfg.event_data = options.event_data;
  if (options.out_event_data) cfg.out_event_data = options.out_event_data;
  if (options.embeddings) cfg.embeddings = options.embeddings;
  if (options.event_model) cfg.event_model = options.event_model;

  if (!cfg.event_data) throw Error("no event data (--event-data or event_data in the config)");
  const bool adapt = options.mode == TrainMode::adapt_reg || options.mode == TrainMode::adapt_select;
  if (adapt && !cfg.event_model) {
    throw Error(fmt::format("mode {} requires --event-model", mode_name(options.mode)));
  }
  if (options.mode != TrainMode::event && !cfg.out_event_data) {
    throw Error(fmt::format("mode {} requires --out-event-data", mode_name(options.mode)));
  }

  const EventData event = load_event_data(*cfg.event_data);
  Examples out_pool;
  if (options.mode != TrainMode::event) out_pool = load_out_of_event(*cfg.out_event_data, event.schema);
  std::optional<pipeline::Model> event_model;
  if (adapt) event_model = pipeline::load_model(*cfg.event_model);

  const auto outcome = run_training(cfg, options.mode, options.kind, event, out_pool,
                                    event_model ? &*event_model : nullptr);
  pipeline::save_model(options.out, outcome.model);
  if (options.kind == ModelKind::cnn) {
    path history = options.history.value_or(path(options.out).replace_extension(".history.csv"));
    io::write_file_atomic(history, train::history_csv(outcome.history));
  }

  log << fmt::format("trained {} ({}) on {} examples", kind_text(options.kind),
                     mode_name(options.mode), outcome.train_size);
  if (options.mode == TrainMode::adapt_select) {
    log << fmt::format(" ({} selected of {} out-of-event)", outcome.selected, out_pool.size());
  }
  log << fmt::format("; dev accuracy {:.4f}", outcome.dev_accuracy);
  if (!outcome.history.empty()) log << fmt::format(" after {} epochs", outcome.history.size());
  log << '\n';
}

// ---------------------------------------------------------------------------
// evaluate / predict

namespace {

std::string schema_list(const LabelSchema& s) {
  return fmt::format("[{}]", fmt::join(s.classes(), ", "));
}

}  // namespace

eval::EvalReport evaluate(const EvaluateOptions& options, std::ostream& log) {
  const auto model = pipeline::load_model(options.model);
  const auto& schema = pipeline::schema_of(model);

  std::optional<path> schema_file = options.schema;
  if (!schema_file && std::filesystem::exists(options.data.parent_path() / "schema.txt")) {
    schema_file = options.data.parent_path() / "schema.txt";
  }
  if (schema_file) {
    const auto data_schema = LabelSchema::load(*schema_file);
    if (data_schema != schema) {
      throw Error(fmt::format("schema mismatch: model {} vs data {} ({})", schema_list(schema),
                              schema_list(data_schema), schema_file->string()));
    }
  }
  // Name every foreign label at once instead of failing on the first.
  std::vector<std::string> unknown;
  const std::string text = io::read_file(options.data);
  for (auto line : io::split_lines(text)) {
    const auto cols = io::split(line, '\t');
    if (cols.size() != 3) continue;
    const auto label = io::trim(cols[2]);
    if (!schema.index_of(label) &&
        std::find(unknown.begin(), unknown.end(), label) == unknown.end()) {
      unknown.emplace_back(label);
    }
  }
  if (!unknown.empty()) {
    throw Error(fmt::format("schema mismatch: model {} vs data labels [{}]", schema_list(schema),
                            fmt::join(unknown, ", ")));
  }
  const auto data = corpus::load_tsv(options.data, schema);
  if (data.empty()) throw Error(fmt::format("{}: no examples to evaluate", options.data.string()));

  auto report = evaluate_model(model, data);
  eval::write_report(report, options.out);
  log << fmt::format("{} examples: accuracy {:.4f}, macro-F1 {:.4f}", report.num_examples,
                     report.accuracy, report.macro_f1);
  if (report.auc) log << fmt::format(", AUC {:.4f}", *report.auc);
  log << '\n';
  return report;
}

void predict(const path& model_path, std::istream& in, std::ostream& out) {
  const auto model = pipeline::load_model(model_path);
  const auto& schema = pipeline::schema_of(model);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string id = std::to_string(n);
    std::string_view text = line;
    if (const auto tab = line.find('\t'); tab != std::string::npos) {
      id = line.substr(0, tab);
      text = std::string_view(line).substr(tab + 1);
      if (const auto tab2 = text.find('\t'); tab2 != std::string_view::npos) {
        text = text.substr(0, tab2);
      }
    }
    const auto s = pipeline::score(model, textprep::preprocess(text));
    out << fmt::format("{}\t{}\t{:.6f}\n", id, schema.name(s.label), fmt::join(s.scores, "\t"));
  }
  out.flush();
}

// ---------------------------------------------------------------------------
// grid search

std::size_t Grid::cells() const noexcept {
  return dropout.size() * batch_size.size() * num_filters.size() * window.size() * pool.size() *
         dense_units.size() * vocab_percent.size();
}

namespace {

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view values) {
  std::vector<T> out;
  for (auto v : io::split(values, ',')) {
    v = io::trim(v);
    T x{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
      throw Error(fmt::format("{}: bad grid value '{}'", key, v));
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace

void Grid::restrict(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(fmt::format("expected key=v1,v2,..., got '{}'", assignment));
  }
  const auto key = io::trim(assignment.substr(0, eq));
  const auto values = assignment.substr(eq + 1);
  if (key == "dropout") dropout = parse_list<double>(key, values);
  else if (key == "batch_size") batch_size = parse_list<std::size_t>(key, values);
  else if (key == "num_filters") num_filters = parse_list<std::size_t>(key, values);
  else if (key == "window") window = parse_list<std::size_t>(key, values);
  else if (key == "pool") pool = parse_list<std::size_t>(key, values);
  else if (key == "dense_units") dense_units = parse_list<std::size_t>(key, values);
  else if (key == "vocab_percent") vocab_percent = parse_list<double>(key, values);
  else throw Error(fmt::format("'{}' is not a grid axis", key));
}

GridOutcome gridsearch(const GridOptions& options, std::ostream& log) {
  RunConfig base = make_config(options.config, options.overrides);
  if (options.event_data) base.event_data = options.event_data;
  if (!base.event_data) throw Error("no event data (--event-data or event_data in the config)");

  Grid grid;
  for (const auto& r : options.restrictions) grid.restrict(r);
  GridOutcome result;
  result.cells = grid.cells();
  log << fmt::format("grid: {} cells\n", result.cells);
  if (result.cells > kGridConfirmThreshold && !options.confirm) {
    throw Error(fmt::format("the grid has {} cells (more than {}); pass --confirm to run it",
                            result.cells, kGridConfirmThreshold));
  }
  const EventData event = load_event_data(*base.event_data);

  std::string csv =
      "cell,dropout,batch_size,num_filters,window,pool,dense_units,vocab_percent,"
      "dev_accuracy,best_epoch\n";
  bool have_best = false;
  std::size_t cell = 0;
  for (double dropout : grid.dropout)
    for (auto batch : grid.batch_size)
      for (auto filters : grid.num_filters)
        for (auto window : grid.window)
          for (auto pool : grid.pool)
            for (auto dense : grid.dense_units)
              for (double percent : grid.vocab_percent) {
                ++cell;
                RunConfig cfg = base;
                cfg.training.dropout = dropout;
                cfg.training.batch_size = batch;
                cfg.model.num_filters = filters;
                cfg.model.window = window;
                cfg.model.pool = pool;
                cfg.model.dense_units = dense;
                cfg.vocab_percent = percent;
                const auto t = pipeline::train_cnn(cfg, event.schema, event.train, event.dev);
                csv += fmt::format("{},{},{},{},{},{},{},{},{:.6f},{}\n", cell, dropout, batch,
                                   filters, window, pool, dense, percent, t.best_val_accuracy,
                                   t.best_epoch);
                log << fmt::format("cell {}/{}: dev accuracy {:.4f}\n", cell, result.cells,
                                   t.best_val_accuracy);
                if (!have_best || t.best_val_accuracy > result.best_accuracy) {
                  have_best = true;
                  result.best_accuracy = t.best_val_accuracy;
                  result.best_cell = cell;
                  result.best = cfg;
                }
              }

  io::write_file_atomic(options.out / "grid.csv", csv);
  io::write_file_atomic(options.out / "best.conf", result.best.to_text());
  log << fmt::format("best cell {} with dev accuracy {:.4f}\n", result.best_cell,
                     result.best_accuracy);
  return result;
}

// ---------------------------------------------------------------------------
// tables

namespace {

std::string cell(const std::optional<double>& v, double scale, int decimals) {
  if (!v) return "n/a";
  return fmt::format("{:.{}f}", *v * scale, decimals);
}

EventData to_binary(const EventData& d, std::string_view negative) {
  EventData b;
  std::tie(b.train, b.schema) = corpus::merge_to_binary(d.train, d.schema, negative);
  b.dev = corpus::merge_to_binary(d.dev, d.schema, negative).first;
  b.test = corpus::merge_to_binary(d.test, d.schema, negative).first;
  return b;
}

std::string text_table(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  auto measure = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  };
  measure(header);
  for (const auto& r : rows) measure(r);
  auto line = [&](const std::vector<std::string>& r) {
    std::string s;
    for (std::size_t i = 0; i < r.size(); ++i) {
      s += i == 0 ? fmt::format("{:<{}}", r[i], width[i]) : fmt::format("  {:>{}}", r[i], width[i]);
    }
    return s + "\n";
  };
  std::string out = line(header);
  for (const auto& r : rows) out += line(r);
  return out;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::string out = fmt::format("{}\n", fmt::join(header, ","));
  for (const auto& r : rows) out += fmt::format("{}\n", fmt::join(r, ","));
  return out;
}

constexpr TrainMode kBaseModes[] = {TrainMode::event, TrainMode::out, TrainMode::event_out};
constexpr std::string_view kBaseSettings[] = {"event", "out", "event+out"};

}  // namespace

void tables(const TablesOptions& options, std::ostream& log) {
  RunConfig cfg = make_config(options.config, options.overrides);
  if (options.event_data) cfg.event_data = options.event_data;
  if (options.out_event_data) cfg.out_event_data = options.out_event_data;
  if (!cfg.event_data) throw Error("no event data (--event-data or event_data in the config)");
  if (!cfg.out_event_data) throw Error("no out-of-event data (--out-event-data)");

  const EventData event = load_event_data(*cfg.event_data);
  const Examples pool = load_out_of_event(*cfg.out_event_data, event.schema);
  auto progress = [&](std::string_view what) { log << what << '\n' << std::flush; };

  if (options.binary) {
    const EventData bin = to_binary(event, cfg.negative_class);
    const Examples bin_pool = corpus::merge_to_binary(pool, event.schema, cfg.negative_class).first;
    RunConfig cfg_ii = cfg;
    if (options.embeddings_ii) cfg_ii.embeddings = options.embeddings_ii;

    std::vector<std::vector<std::string>> rows;
    std::string confusion = "setting,model,gold,predicted,count\n";
    std::string confusion_text;
    for (std::size_t s = 0; s < 3; ++s) {
      const auto setting = kBaseSettings[s];
      progress(fmt::format("binary {}", setting));
      auto auc_of = [&](const RunConfig& c, ModelKind k, eval::ConfusionMatrix* cm) {
        const auto o = run_training(c, kBaseModes[s], k, bin, bin_pool, nullptr);
        const auto r = evaluate_model(o.model, bin.test);
        if (cm) *cm = r.confusion;
        return r.auc;
      };
      eval::ConfusionMatrix svm_cm, cnn_cm;
      const auto lr = auc_of(cfg, ModelKind::logreg, nullptr);
      const auto svm = auc_of(cfg, ModelKind::svm, &svm_cm);
      const auto cnn = auc_of(cfg, ModelKind::cnn, &cnn_cm);
      std::optional<double> cnn_ii;
      if (options.embeddings_ii) cnn_ii = auc_of(cfg_ii, ModelKind::cnn, nullptr);
      rows.push_back({fmt::format("B_{}", setting), "unsupported", cell(lr, 100, 2),
                      cell(svm, 100, 2), cell(cnn, 100, 2), cell(cnn_ii, 100, 2)});

      std::vector<std::vector<std::string>> cm_rows;
      for (std::size_t g = 0; g < 2; ++g) {
        cm_rows.push_back({g == 0 ? "Info." : "Not Info.", std::to_string(svm_cm(g, 0)),
                           std::to_string(svm_cm(g, 1)), std::to_string(cnn_cm(g, 0)),
                           std::to_string(cnn_cm(g, 1))});
        for (std::size_t p = 0; p < 2; ++p) {
          confusion += fmt::format("{},SVM,{},{},{}\n", setting, bin.schema.name(g),
                                   bin.schema.name(p), svm_cm(g, p));
          confusion += fmt::format("{},CNN_I,{},{},{}\n", setting, bin.schema.name(g),
                                   bin.schema.name(p), cnn_cm(g, p));
        }
      }
      confusion_text += fmt::format("{}\n", setting);
      confusion_text += text_table({"", "SVM Info.", "SVM Not Info.", "CNN_I Info.",
                                    "CNN_I Not Info."},
                                   cm_rows);
    }
    const std::vector<std::string> header{"SYS", "RF", "LR", "SVM", "CNN_I", "CNN_II"};
    const std::string text = "AUC (x100), binary informative task\n" + text_table(header, rows) +
                             "\nConfusion matrices (rows = gold, columns = predicted)\n" +
                             confusion_text;
    io::write_file_atomic(options.out / "binary_auc.txt", text);
    io::write_file_atomic(options.out / "binary_auc.csv", csv_table(header, rows));
    io::write_file_atomic(options.out / "binary_confusion.csv", confusion);
    log << text;
  }

  if (options.multiclass) {
    RunConfig cfg_mlp = cfg;
    cfg_mlp.mlp_channel = true;
    cfg_mlp.validate();

    struct Row {
      std::string name;
      std::optional<eval::EvalReport> svm, cnn, mlp;
    };
    std::vector<Row> rows;
    std::optional<pipeline::Model> svm_event, cnn_event, mlp_event;
    auto run = [&](const RunConfig& c, TrainMode m, ModelKind k, const pipeline::Model* em,
                   std::optional<pipeline::Model>* keep) {
      auto o = run_training(c, m, k, event, pool, em);
      auto r = evaluate_model(o.model, event.test);
      if (keep) *keep = std::move(o.model);
      return r;
    };
    for (std::size_t s = 0; s < 3; ++s) {
      progress(fmt::format("multi-class {}", kBaseSettings[s]));
      const bool first = s == 0;
      Row row{fmt::format("M_{}", kBaseSettings[s]), {}, {}, {}};
      row.svm = run(cfg, kBaseModes[s], ModelKind::svm, nullptr, first ? &svm_event : nullptr);
      row.cnn = run(cfg, kBaseModes[s], ModelKind::cnn, nullptr, first ? &cnn_event : nullptr);
      row.mlp = run(cfg_mlp, kBaseModes[s], ModelKind::cnn, nullptr, first ? &mlp_event : nullptr);
      rows.push_back(std::move(row));
    }
    progress("multi-class event+adpt01");
    rows.push_back({"M_event+adpt01", std::nullopt,
                    run(cfg, TrainMode::adapt_reg, ModelKind::cnn, &*cnn_event, nullptr),
                    run(cfg_mlp, TrainMode::adapt_reg, ModelKind::cnn, &*mlp_event, nullptr)});
    progress("multi-class event+adpt02");
    rows.push_back({"M_event+adpt02",
                    run(cfg, TrainMode::adapt_select, ModelKind::svm, &*svm_event, nullptr),
                    run(cfg, TrainMode::adapt_select, ModelKind::cnn, &*cnn_event, nullptr),
                    run(cfg_mlp, TrainMode::adapt_select, ModelKind::cnn, &*mlp_event, nullptr)});

    auto acc = [](const std::optional<eval::EvalReport>& r) {
      return r ? std::optional<double>(r->accuracy) : std::nullopt;
    };
    auto f1 = [](const std::optional<eval::EvalReport>& r) {
      return r ? std::optional<double>(r->macro_f1) : std::nullopt;
    };
    std::vector<std::vector<std::string>> table;
    for (const auto& r : rows) {
      table.push_back({r.name, cell(acc(r.svm), 100, 2), cell(acc(r.cnn), 100, 2),
                       cell(acc(r.mlp), 100, 2), cell(f1(r.svm), 1, 2), cell(f1(r.cnn), 1, 2),
                       cell(f1(r.mlp), 1, 2)});
    }
    const std::vector<std::string> header{"SYS",     "SVM acc", "CNN_I acc", "MLP-CNN_I acc",
                                          "SVM F1",  "CNN_I F1", "MLP-CNN_I F1"};
    const std::string text =
        "Accuracy (x100) and macro-F1, multi-class task\n" + text_table(header, table);
    io::write_file_atomic(options.out / "multiclass.txt", text);
    io::write_file_atomic(options.out / "multiclass.csv", csv_table(header, table));
    log << text;
  }
}

// ---------------------------------------------------------------------------
// synth

void synth(const SynthOptions& options, std::ostream& log) {
  const auto schema = LabelSchema::crisis_default();
  synth::SynthConfig sc;
  sc.count = options.count;
  sc.seed = options.seed;
  sc.out_of_event = options.out_of_event;
  sc.noise_fraction = options.noise_fraction;
  sc.id_prefix = options.out_of_event ? "oe" : "ev";
  const auto rows = synth::generate(schema, sc);
  synth::write_tsv(options.out, rows, schema);
  if (options.schema_out) schema.save(*options.schema_out);
  log << fmt::format("wrote {} synthetic tweets to {}\n", rows.size(), options.out.string());
}

}  // namespace crisiscnn::commands
