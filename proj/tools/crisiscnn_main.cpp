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

// crisiscnn: command-line front end.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <exception>
#include <fstream>
#include <iostream>

#include "crisiscnn/commands.hpp"
#include "crisiscnn/error.hpp"

namespace cmd = crisiscnn::commands;

namespace {

void add_config_flags(CLI::App* app, std::optional<cmd::path>& config,
                      std::vector<std::string>& overrides) {
  app->add_option("--config", config, "key = value configuration file")->check(CLI::ExistingFile);
  app->add_option("--set", overrides, "override a configuration key (key=value), repeatable");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convolutional classifiers for crisis tweets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "crisiscnn 0.1.0");

  cmd::PrepareOptions prep;
  auto* prepare = app.add_subcommand("prepare", "split a labeled TSV into train/dev/test");
  prepare->add_option("--input", prep.input, "id<TAB>text<TAB>label file")->required();
  prepare->add_option("--schema", prep.schema, "class names, one per line")->required();
  prepare->add_option("--out", prep.out, "output directory")->required();
  prepare->add_option("--seed", prep.seed, "split seed")->capture_default_str();
  prepare->add_flag("--binary", prep.binary, "merge classes into Informative / Not informative");
  prepare->add_flag("--header", prep.has_header, "input has a header row");
  prepare->add_option("--vocab-percent", prep.vocab_percent, "vocabulary coverage P")
      ->capture_default_str();
  prepare->add_option("--negative-class", prep.negative_class,
                      "class mapped to Not informative by --binary")
      ->capture_default_str();

  cmd::TrainOptions tr;
  std::string mode = "event";
  std::string kind = "cnn";
  auto* train = app.add_subcommand("train", "train a model");
  add_config_flags(train, tr.config, tr.overrides);
  train->add_option("--mode", mode, "event | out | event+out | adapt-reg | adapt-select")
      ->capture_default_str();
  train->add_option("--kind", kind, "cnn | logreg | svm")->capture_default_str();
  train->add_option("--event-data", tr.event_data, "prepared event data directory");
  train->add_option("--out-event-data", tr.out_event_data,
                    "prepared directory or TSV of out-of-event data");
  train->add_option("--embeddings", tr.embeddings, "word2vec text file");
  train->add_option("--event-model", tr.event_model, "event model for the adapt modes");
  train->add_option("--out", tr.out, "model file to write")->required();
  train->add_option("--history", tr.history, "training history CSV");

  cmd::EvaluateOptions ev;
  auto* evaluate = app.add_subcommand("evaluate", "evaluate a model on a labeled TSV");
  evaluate->add_option("--model", ev.model, "model file")->required();
  evaluate->add_option("--data", ev.data, "labeled TSV")->required();
  evaluate->add_option("--out", ev.out, "report directory")->required();
  evaluate->add_option("--schema", ev.schema, "schema of the data, checked against the model");

  cmd::path predict_model;
  std::optional<cmd::path> predict_input;
  auto* predict = app.add_subcommand("predict", "label unlabeled tweets");
  predict->add_option("--model", predict_model, "model file")->required();
  predict->add_option("--input", predict_input, "id<TAB>text file (default: stdin)");

  cmd::GridOptions gr;
  std::string grid_name = "default";
  auto* grid = app.add_subcommand("gridsearch", "tune hyperparameters on the dev split");
  add_config_flags(grid, gr.config, gr.overrides);
  grid->add_option("--event-data", gr.event_data, "prepared event data directory");
  grid->add_option("--grid", grid_name, "grid to search")
      ->check(CLI::IsMember({"default"}))
      ->capture_default_str();
  grid->add_option("--restrict", gr.restrictions,
                   "limit one axis, e.g. num_filters=100,200 (repeatable)");
  grid->add_option("--out", gr.out, "output directory")->required();
  grid->add_flag("--confirm", gr.confirm, "run grids with more than 100 cells");

  cmd::TablesOptions tb;
  bool binary_only = false;
  bool multiclass_only = false;
  auto* tables = app.add_subcommand("tables", "run every table row pipeline and emit the tables");
  add_config_flags(tables, tb.config, tb.overrides);
  tables->add_option("--event-data", tb.event_data, "prepared multi-class event directory");
  tables->add_option("--out-event-data", tb.out_event_data,
                     "prepared directory or TSV of out-of-event data");
  tables->add_option("--embeddings-ii", tb.embeddings_ii,
                     "second embedding file for the CNN_II column");
  tables->add_option("--out", tb.out, "output directory")->required();
  tables->add_flag("--binary-only", binary_only, "only the binary AUC table");
  tables->add_flag("--multiclass-only", multiclass_only, "only the multi-class table");

  cmd::SynthOptions sy;
  auto* synth = app.add_subcommand("synth", "generate a synthetic labeled corpus");
  synth->add_option("--out", sy.out, "TSV to write")->required();
  synth->add_option("--count", sy.count, "number of tweets")->capture_default_str();
  synth->add_option("--seed", sy.seed, "generator seed")->capture_default_str();
  synth->add_option("--noise", sy.noise_fraction, "share of shared-noise tokens")
      ->capture_default_str();
  synth->add_flag("--out-of-event", sy.out_of_event, "shift the keyword vocabulary");
  synth->add_option("--schema-out", sy.schema_out, "also write the class list");

  CLI11_PARSE(app, argc, argv);

  try {
    if (prepare->parsed()) {
      cmd::prepare(prep, std::cerr);
    } else if (train->parsed()) {
      tr.mode = cmd::parse_mode(mode);
      tr.kind = cmd::parse_kind(kind);
      cmd::train(tr, std::cerr);
    } else if (evaluate->parsed()) {
      cmd::evaluate(ev, std::cerr);
    } else if (predict->parsed()) {
      if (predict_input) {
        std::ifstream in(*predict_input);
        if (!in) throw crisiscnn::Error(fmt::format("cannot open {}", predict_input->string()));
        cmd::predict(predict_model, in, std::cout);
      } else {
        cmd::predict(predict_model, std::cin, std::cout);
      }
    } else if (grid->parsed()) {
      cmd::gridsearch(gr, std::cerr);
    } else if (tables->parsed()) {
      if (binary_only && multiclass_only) {
        throw crisiscnn::Error("--binary-only and --multiclass-only are exclusive");
      }
      tb.binary = !multiclass_only;
      tb.multiclass = !binary_only;
      cmd::tables(tb, std::cerr);
    } else if (synth->parsed()) {
      cmd::synth(sy, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "crisiscnn: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
