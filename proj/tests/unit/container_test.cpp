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

#include <gtest/gtest.h>

#include "crisiscnn/container.hpp"
#include "crisiscnn/error.hpp"
#include "crisiscnn/io.hpp"
#include "crisiscnn/pipeline.hpp"
#include "crisiscnn/synth.hpp"
#include "crisiscnn/textprep.hpp"
#include "helpers.hpp"

using namespace crisiscnn;
using namespace crisiscnn::container;
using crisiscnn::testing::TempDir;

namespace {

ModelContainer sample() {
  ModelContainer c;
  c.metadata = R"({"kind":"test"})";
  Matrix m(2, 3);
  for (std::size_t i = 0; i < m.size(); ++i) m.flat()[i] = 0.5 * static_cast<double>(i) - 1.0;
  c.sections.push_back(Section::from_matrix("w", m));
  c.sections.push_back({"v", {4}, {1.f, 2.f, 3.f, 4.f}});
  return c;
}

std::vector<corpus::LabeledExample> synthetic(std::size_t n, std::uint64_t seed,
                                              const corpus::LabelSchema& schema) {
  synth::SynthConfig sc;
  sc.count = n;
  sc.seed = seed;
  std::vector<corpus::LabeledExample> out;
  for (const auto& r : synth::generate(schema, sc)) {
    out.push_back({r.id, textprep::preprocess(r.text), r.label});
  }
  return out;
}

}  // namespace

TEST(Container, RoundTrip) {
  const auto c = sample();
  const std::string bytes = serialize(c);
  EXPECT_EQ(bytes.substr(0, 4), "CCNN");
  const auto back = deserialize(bytes);
  EXPECT_EQ(back.version, kVersion);
  EXPECT_EQ(back.metadata, c.metadata);
  ASSERT_EQ(back.sections.size(), 2u);
  EXPECT_EQ(back.section("w").dims, (std::vector<std::uint64_t>{2, 3}));
  EXPECT_EQ(back.section("w").to_matrix()(1, 2), 1.5);
  EXPECT_EQ(back.section("v").to_matrix().rows(), 4u);
  EXPECT_EQ(serialize(back), bytes);
  EXPECT_THROW(back.section("missing"), Error);
}

TEST(Container, FileRoundTripIsByteIdentical) {
  TempDir dir;
  save(dir / "a.ccnn", sample());
  save(dir / "b.ccnn", load(dir / "a.ccnn"));
  EXPECT_EQ(io::read_file(dir / "a.ccnn"), io::read_file(dir / "b.ccnn"));
}

TEST(Container, RejectsBadInput) {
  const std::string bytes = serialize(sample());
  EXPECT_THROW(deserialize("JUNKJUNKJUNKJUNK"), Error);
  EXPECT_THROW(deserialize(""), Error);
  for (std::size_t cut : {5u, 12u, 20u, 40u}) {
    EXPECT_THROW(deserialize(std::string_view(bytes).substr(0, bytes.size() - cut)), Error) << cut;
  }
  std::string newer = bytes;
  newer[4] = 2;
  try {
    deserialize(newer, "m.ccnn");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("version"), std::string::npos);
  }
  try {
    deserialize("XXXX", "m.ccnn");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("m.ccnn"), std::string::npos);
  }
}

TEST(ModelFiles, CnnWithChannelRoundTrip) {
  TempDir dir;
  const auto schema = corpus::LabelSchema::crisis_default();
  auto cfg = crisiscnn::testing::small_config();
  cfg.mlp_channel = true;
  cfg.mlp_chi2 = true;
  cfg.chi2_k = 40;
  cfg.training.max_epochs = 2;
  const auto train = synthetic(120, 1, schema);
  const auto t = pipeline::train_cnn(cfg, schema, train, synthetic(30, 2, schema));
  ASSERT_TRUE(t.model.channel.has_value());
  EXPECT_EQ(t.model.config.extra_dim, 40u);

  pipeline::save_model(dir / "m.ccnn", t.model);
  const auto loaded = pipeline::load_model(dir / "m.ccnn");
  ASSERT_EQ(pipeline::kind_name(loaded), "cnn");
  const auto& m = std::get<pipeline::CnnModel>(loaded);
  EXPECT_EQ(m.vocab, t.model.vocab);
  EXPECT_EQ(m.config, t.model.config);
  EXPECT_EQ(m.channel->columns, t.model.channel->columns);
  for (const auto& ex : synthetic(10, 3, schema)) {
    const auto a = t.model.predict(ex.tokens), b = m.predict(ex.tokens);
    EXPECT_EQ(a.label, b.label);
    for (std::size_t k = 0; k < a.probs.size(); ++k) EXPECT_NEAR(a.probs[k], b.probs[k], 1e-5);
  }
  pipeline::save_model(dir / "m2.ccnn", loaded);
  EXPECT_EQ(io::read_file(dir / "m.ccnn"), io::read_file(dir / "m2.ccnn"));
}

TEST(ModelFiles, LinearRoundTrip) {
  TempDir dir;
  const auto schema = corpus::LabelSchema::crisis_default();
  const auto cfg = crisiscnn::testing::small_config();
  const auto train = synthetic(120, 4, schema);
  for (auto kind : {baselines::LinearKind::logistic, baselines::LinearKind::svm_hinge}) {
    const auto m = pipeline::train_linear(cfg, kind, schema, train);
    pipeline::save_model(dir / "l.ccnn", m);
    const auto loaded = pipeline::load_model(dir / "l.ccnn");
    EXPECT_EQ(pipeline::kind_name(loaded),
              kind == baselines::LinearKind::logistic ? "logreg" : "svm");
    const auto& l = std::get<pipeline::LinearClassifier>(loaded);
    EXPECT_EQ(l.features.vocab, m.features.vocab);
    for (const auto& ex : synthetic(10, 5, schema)) {
      EXPECT_EQ(l.predict(ex.tokens).label, m.predict(ex.tokens).label);
    }
    pipeline::save_model(dir / "l2.ccnn", loaded);
    EXPECT_EQ(io::read_file(dir / "l.ccnn"), io::read_file(dir / "l2.ccnn"));
  }
}

TEST(ModelFiles, TruncatedFileIsAnError) {
  TempDir dir;
  const auto bytes = serialize(sample());
  const auto p = dir.write("t.ccnn", bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(pipeline::load_model(p), Error);
  EXPECT_THROW(pipeline::load_model(dir / "absent.ccnn"), Error);
}
