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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crisiscnn/config.hpp"
#include "crisiscnn/corpus.hpp"
#include "crisiscnn/eval.hpp"
#include "crisiscnn/pipeline.hpp"

namespace crisiscnn::commands {

using std::filesystem::path;

// --- shared helpers --------------------------------------------------------

/// A prepared data directory: train.tsv, dev.tsv, test.tsv and schema.txt.
struct EventData {
  corpus::LabelSchema schema;
  std::vector<corpus::LabeledExample> train;
  std::vector<corpus::LabeledExample> dev;
  std::vector<corpus::LabeledExample> test;
};

EventData load_event_data(const path& dir);

/// Out-of-event pool: every split of a prepared directory (train, dev, test
/// in that order) or a single labeled TSV file.
std::vector<corpus::LabeledExample> load_out_of_event(const path& source,
                                                      const corpus::LabelSchema& schema);

/// Config file (optional) + `key=value` overrides, validated. Threads come
/// from CRISISCNN_THREADS (default 1).
RunConfig make_config(const std::optional<path>& file, const std::vector<std::string>& overrides);

/// Positive integer from CRISISCNN_THREADS, or 1 when unset.
std::size_t threads_from_env();

eval::EvalReport evaluate_model(const pipeline::Model& model,
                                const std::vector<corpus::LabeledExample>& data);

/// AUC of a multi-class model on the binary informative task: the score is
/// 1 - P(negative class) and the positives are all other gold classes.
double binary_merged_auc(const pipeline::Model& model,
                         const std::vector<corpus::LabeledExample>& data,
                         std::string_view negative_class = corpus::kNotInformativeClass);

// --- prepare ---------------------------------------------------------------

struct PrepareOptions {
  path input;
  path schema;
  path out;
  std::uint64_t seed = 1;
  bool binary = false;
  bool has_header = false;
  double vocab_percent = 90.0;
  std::string negative_class{corpus::kNotInformativeClass};
};

void prepare(const PrepareOptions& options, std::ostream& log);

// --- train -----------------------------------------------------------------

enum class TrainMode { event, out, event_out, adapt_reg, adapt_select };
enum class ModelKind { cnn, logreg, svm };

TrainMode parse_mode(std::string_view s);
ModelKind parse_kind(std::string_view s);
std::string_view mode_name(TrainMode m);

struct TrainOptions {
  std::optional<path> config;
  std::vector<std::string> overrides;  ///< "key=value"
  TrainMode mode = TrainMode::event;
  ModelKind kind = ModelKind::cnn;
  std::optional<path> event_data;
  std::optional<path> out_event_data;
  std::optional<path> embeddings;
  std::optional<path> event_model;
  path out;
  /// Defaults to the model path with extension ".history.csv".
  std::optional<path> history;
};

struct TrainOutcome {
  pipeline::Model model;
  std::vector<train::EpochRecord> history;  ///< CNN only
  std::size_t train_size = 0;
  std::size_t selected = 0;                 ///< adapt-select only
  double dev_accuracy = 0.0;
};

/// The pipeline behind one table row. `event_model` is required for
/// the adapt modes and must be of the same kind.
TrainOutcome run_training(const RunConfig& config, TrainMode mode, ModelKind kind,
                          const EventData& event,
                          const std::vector<corpus::LabeledExample>& out_pool,
                          const pipeline::Model* event_model);

void train(const TrainOptions& options, std::ostream& log);

// --- evaluate / predict ----------------------------------------------------

struct EvaluateOptions {
  path model;
  path data;
  path out;
  /// Compared against the model schema when given; defaults to schema.txt
  /// beside the data file if one exists.
  std::optional<path> schema;
};

eval::EvalReport evaluate(const EvaluateOptions& options, std::ostream& log);

/// Each input line is `id<TAB>text` or bare text (id = line number). Writes
/// `id<TAB>label<TAB>p_1<TAB>...<TAB>p_K` with six decimals.
void predict(const path& model, std::istream& in, std::ostream& out);

// --- grid search -----------------------------------------------------------

/// Axes in iteration order (outermost first).
struct Grid {
  std::vector<double> dropout{0.0, 0.2, 0.4, 0.5};
  std::vector<std::size_t> batch_size{32, 64, 128};
  std::vector<std::size_t> num_filters{100, 150, 200};
  std::vector<std::size_t> window{2, 3, 4};
  std::vector<std::size_t> pool{2, 3, 4};
  std::vector<std::size_t> dense_units{100, 150, 200};
  std::vector<double> vocab_percent{80, 85, 90};

  std::size_t cells() const noexcept;
  /// Restricts one axis from "key=v1,v2,...".
  void restrict(std::string_view assignment);
};

inline constexpr std::size_t kGridConfirmThreshold = 100;

struct GridOptions {
  std::optional<path> config;
  std::vector<std::string> overrides;
  std::optional<path> event_data;
  std::vector<std::string> restrictions;  ///< "key=v1,v2"
  path out;                               ///< directory: grid.csv, best.conf
  bool confirm = false;
};

struct GridOutcome {
  std::size_t cells = 0;
  std::size_t best_cell = 0;
  double best_accuracy = 0.0;
  RunConfig best;
};

GridOutcome gridsearch(const GridOptions& options, std::ostream& log);

// --- tables ----------------------------------------------------------------

struct TablesOptions {
  std::optional<path> config;
  std::vector<std::string> overrides;
  std::optional<path> event_data;      ///< prepared multi-class directory
  std::optional<path> out_event_data;  ///< multi-class pool
  /// Second embedding file for the CNN_II column.
  std::optional<path> embeddings_ii;
  path out;
  bool binary = true;
  bool multiclass = true;
};

/// Runs every row of the binary AUC table and the multi-class accuracy /
/// macro-F1 table and writes binary_auc.txt, binary_auc.csv, binary_confusion.csv,
/// multiclass.txt and multiclass.csv into `out`.
void tables(const TablesOptions& options, std::ostream& log);

// --- synth -----------------------------------------------------------------

struct SynthOptions {
  path out;
  std::size_t count = 2000;
  std::uint64_t seed = 1;
  bool out_of_event = false;
  double noise_fraction = 0.2;
  std::optional<path> schema_out;
};

void synth(const SynthOptions& options, std::ostream& log);

}  // namespace crisiscnn::commands
