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

#include "crisiscnn/eval.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <memory>
#include <nlohmann/json.hpp>
#include <numeric>

#include "crisiscnn/error.hpp"
#include "crisiscnn/io.hpp"
#include "crisiscnn/numerics.hpp"

namespace crisiscnn::eval {

std::uint64_t ConfusionMatrix::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const noexcept {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < k_; ++i) t += counts_[i * k_ + i];
  return t;
}

ConfusionMatrix confusion_matrix(std::span<const std::size_t> gold,
                                 std::span<const std::size_t> pred, std::size_t num_classes) {
  if (gold.size() != pred.size()) throw Error("gold and predicted label counts differ");
  ConfusionMatrix cm(num_classes);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] >= num_classes || pred[i] >= num_classes) {
      throw Error(fmt::format("label {} outside {} classes", std::max(gold[i], pred[i]),
                              num_classes));
    }
    ++cm(gold[i], pred[i]);
  }
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (total == 0) throw Error("accuracy of an empty confusion matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

double macro_f1(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error("macro-F1 of an empty confusion matrix");
  const std::size_t k = cm.num_classes();
  double sum = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row += cm(c, j);
      col += cm(j, c);
    }
    const double tp = static_cast<double>(cm(c, c));
    if (row == 0 || col == 0 || tp == 0.0) continue;
    const double precision = tp / static_cast<double>(col);
    const double recall = tp / static_cast<double>(row);
    sum += 2.0 * precision * recall / (precision + recall);
  }
  return sum / static_cast<double>(k);
}

namespace {

std::vector<std::size_t> order_by_score(std::span<const double> scores, bool descending) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return descending ? scores[a] > scores[b] : scores[a] < scores[b];
  });
  return idx;
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const bool> positive) {
  if (scores.size() != positive.size()) throw Error("scores and labels differ in count");
  const auto n_pos = static_cast<std::uint64_t>(std::count(positive.begin(), positive.end(), true));
  const std::uint64_t n_neg = positive.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error("AUC needs both positive and negative examples");

  const auto idx = order_by_score(scores, false);
  // Twice the Mann-Whitney count, kept integral so ties stay exact.
  std::uint64_t twice = 0;
  std::uint64_t neg_below = 0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    std::uint64_t pos_here = 0;
    std::uint64_t neg_here = 0;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
      (positive[idx[j]] ? pos_here : neg_here) += 1;
      ++j;
    }
    twice += pos_here * (2 * neg_below + neg_here);
    neg_below += neg_here;
    i = j;
  }
  return static_cast<double>(twice) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

namespace {

// std::vector<bool> is not contiguous, so masks are copied to a plain array.
std::unique_ptr<bool[]> to_array(const std::vector<bool>& v) {
  auto out = std::make_unique<bool[]>(v.size());
  std::copy(v.begin(), v.end(), out.get());
  return out;
}

}  // namespace

double roc_auc(std::span<const double> scores, const std::vector<bool>& positive) {
  const auto a = to_array(positive);
  return roc_auc(scores, std::span<const bool>(a.get(), positive.size()));
}

PrCurve pr_curve(std::span<const double> scores, const std::vector<bool>& positive) {
  const auto a = to_array(positive);
  return pr_curve(scores, std::span<const bool>(a.get(), positive.size()));
}

PrCurve pr_curve(std::span<const double> scores, std::span<const bool> positive) {
  if (scores.size() != positive.size()) throw Error("scores and labels differ in count");
  const auto n_pos = static_cast<std::uint64_t>(std::count(positive.begin(), positive.end(), true));
  if (n_pos == 0) throw Error("precision-recall curve needs at least one positive example");

  const auto idx = order_by_score(scores, true);
  PrCurve curve;
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  double prev_recall = 0.0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
      (positive[idx[j]] ? tp : fp) += 1;
      ++j;
    }
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = static_cast<double>(tp) / static_cast<double>(n_pos);
    curve.points.push_back({recall, precision});
    curve.average_precision += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return curve;
}

ClassDistribution class_distribution(std::span<const std::size_t> labels,
                                     std::size_t num_classes) {
  ClassDistribution d;
  d.counts.assign(num_classes, 0);
  for (std::size_t l : labels) {
    if (l >= num_classes) throw Error("label outside the class range");
    ++d.counts[l];
  }
  d.total = labels.size();
  d.fractions.resize(num_classes, 0.0);
  if (d.total > 0) {
    for (std::size_t c = 0; c < num_classes; ++c) {
      d.fractions[c] = static_cast<double>(d.counts[c]) / static_cast<double>(d.total);
    }
  }
  return d;
}

ClassDistribution class_distribution(const std::vector<corpus::LabeledExample>& examples,
                                     const corpus::LabelSchema& schema) {
  std::vector<std::size_t> labels;
  labels.reserve(examples.size());
  for (const auto& ex : examples) labels.push_back(ex.label);
  return class_distribution(labels, schema.size());
}

EvalReport evaluate(const corpus::LabelSchema& schema, std::span<const std::size_t> gold,
                    const std::vector<std::vector<double>>& probs) {
  if (gold.empty()) throw Error("cannot evaluate on an empty data set");
  if (gold.size() != probs.size()) throw Error("gold labels and predictions differ in count");
  const std::size_t k = schema.size();
  std::vector<std::size_t> pred;
  pred.reserve(probs.size());
  for (const auto& p : probs) {
    if (p.size() != k) throw Error("prediction width does not match the schema");
    pred.push_back(argmax(p));
  }

  EvalReport r;
  r.classes = schema.classes();
  r.num_examples = gold.size();
  r.confusion = confusion_matrix(gold, pred, k);
  r.accuracy = accuracy(r.confusion);
  r.macro_f1 = macro_f1(r.confusion);
  r.distribution = class_distribution(gold, k);

  std::vector<double> scores(gold.size());
  const auto pos = std::make_unique<bool[]>(gold.size());
  const std::span<const bool> positive(pos.get(), gold.size());
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < gold.size(); ++i) {
      scores[i] = probs[i][c];
      pos[i] = gold[i] == c;
    }
    if (r.distribution.counts[c] > 0) {
      r.pr_curves.emplace_back(pr_curve(scores, positive));
    } else {
      r.pr_curves.emplace_back(std::nullopt);
    }
    if (k == 2 && c == 0 && r.distribution.counts[0] > 0 && r.distribution.counts[1] > 0) {
      r.auc = roc_auc(scores, positive);
    }
  }
  return r;
}

std::string metrics_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["num_examples"] = r.num_examples;
  j["classes"] = r.classes;
  j["accuracy"] = r.accuracy;
  j["macro_f1"] = r.macro_f1;
  if (r.auc) j["auc"] = *r.auc;
  nlohmann::ordered_json ap = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < r.classes.size(); ++c) {
    if (r.pr_curves[c]) {
      ap[r.classes[c]] = r.pr_curves[c]->average_precision;
    } else {
      ap[r.classes[c]] = nullptr;
    }
  }
  j["average_precision"] = ap;
  return j.dump(2) + "\n";
}

std::string confusion_csv(const EvalReport& r) {
  std::string out = "actual\\predicted";
  for (const auto& c : r.classes) out += "," + c;
  out += '\n';
  for (std::size_t g = 0; g < r.classes.size(); ++g) {
    out += r.classes[g];
    for (std::size_t p = 0; p < r.classes.size(); ++p) out += fmt::format(",{}", r.confusion(g, p));
    out += '\n';
  }
  return out;
}

std::string pr_curves_csv(const EvalReport& r) {
  std::string out = "class,recall,precision\n";
  for (std::size_t c = 0; c < r.classes.size(); ++c) {
    if (!r.pr_curves[c]) continue;
    for (const auto& pt : r.pr_curves[c]->points) {
      out += fmt::format("{},{:.10g},{:.10g}\n", r.classes[c], pt.recall, pt.precision);
    }
  }
  return out;
}

std::string class_distribution_csv(const EvalReport& r) {
  std::string out = "class,count,fraction\n";
  for (std::size_t c = 0; c < r.classes.size(); ++c) {
    out += fmt::format("{},{},{:.10g}\n", r.classes[c], r.distribution.counts[c],
                       r.distribution.fractions[c]);
  }
  return out;
}

void write_report(const EvalReport& report, const std::filesystem::path& dir) {
  const std::string metrics = metrics_json(report);
  const std::string confusion = confusion_csv(report);
  const std::string pr = pr_curves_csv(report);
  const std::string dist = class_distribution_csv(report);
  io::write_file_atomic(dir / "metrics.json", metrics);
  io::write_file_atomic(dir / "confusion.csv", confusion);
  io::write_file_atomic(dir / "pr_curves.csv", pr);
  io::write_file_atomic(dir / "class_distribution.csv", dist);
}

}  // namespace crisiscnn::eval
