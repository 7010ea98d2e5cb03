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
#include <span>
#include <string>
#include <vector>

#include "crisiscnn/corpus.hpp"

namespace crisiscnn::eval {

/// K x K counts, rows = gold class, columns = predicted class.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t num_classes = 0)
      : k_(num_classes), counts_(num_classes * num_classes, 0) {}

  std::size_t num_classes() const noexcept { return k_; }
  std::uint64_t operator()(std::size_t gold, std::size_t pred) const {
    return counts_[gold * k_ + pred];
  }
  std::uint64_t& operator()(std::size_t gold, std::size_t pred) {
    return counts_[gold * k_ + pred];
  }
  std::uint64_t total() const noexcept;
  std::uint64_t trace() const noexcept;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t k_;
  std::vector<std::uint64_t> counts_;
};

/// Throws Error on a length mismatch or a label >= num_classes.
ConfusionMatrix confusion_matrix(std::span<const std::size_t> gold,
                                 std::span<const std::size_t> pred, std::size_t num_classes);

/// trace / total. Throws Error on an empty matrix.
double accuracy(const ConfusionMatrix& cm);

/// Unweighted mean of per-class F1; a class whose precision or recall is
/// undefined contributes 0. Throws Error on an empty matrix.
double macro_f1(const ConfusionMatrix& cm);

/// Mann-Whitney AUC: (#pos > neg + 0.5 #ties) / (#pos * #neg).
/// Throws Error unless both classes are present.
double roc_auc(std::span<const double> scores, std::span<const bool> positive);
double roc_auc(std::span<const double> scores, const std::vector<bool>& positive);

struct PrPoint {
  double recall;
  double precision;
};

struct PrCurve {
  std::vector<PrPoint> points;  ///< one per distinct score threshold
  double average_precision = 0.0;
};

/// One-vs-rest precision/recall curve. Tied scores form one threshold step.
/// Throws Error when there are no positives.
PrCurve pr_curve(std::span<const double> scores, std::span<const bool> positive);
PrCurve pr_curve(std::span<const double> scores, const std::vector<bool>& positive);

struct ClassDistribution {
  std::vector<std::uint64_t> counts;
  std::vector<double> fractions;
  std::uint64_t total = 0;
};

ClassDistribution class_distribution(std::span<const std::size_t> labels, std::size_t num_classes);
ClassDistribution class_distribution(const std::vector<corpus::LabeledExample>& examples,
                                     const corpus::LabelSchema& schema);

struct EvalReport {
  std::vector<std::string> classes;
  std::size_t num_examples = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::optional<double> auc;  ///< binary tasks only
  ConfusionMatrix confusion;
  /// Per class; absent when the class has no gold positives.
  std::vector<std::optional<PrCurve>> pr_curves;
  ClassDistribution distribution;
};

/// Builds the full report. `probs[i][k]` is the model's score for class k.
/// For two classes the AUC uses class 0 as the positive class.
EvalReport evaluate(const corpus::LabelSchema& schema, std::span<const std::size_t> gold,
                    const std::vector<std::vector<double>>& probs);

/// metrics.json, confusion.csv, pr_curves.csv, class_distribution.csv.
void write_report(const EvalReport& report, const std::filesystem::path& dir);

std::string metrics_json(const EvalReport& report);
std::string confusion_csv(const EvalReport& report);
std::string pr_curves_csv(const EvalReport& report);
std::string class_distribution_csv(const EvalReport& report);

}  // namespace crisiscnn::eval
