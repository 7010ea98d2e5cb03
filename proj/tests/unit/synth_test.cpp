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

#include <set>

#include "crisiscnn/corpus.hpp"
#include "crisiscnn/synth.hpp"
#include "crisiscnn/textprep.hpp"
#include "helpers.hpp"

using namespace crisiscnn;
using namespace crisiscnn::synth;

TEST(Synth, DeterministicAndSized) {
  const auto schema = corpus::LabelSchema::crisis_default();
  SynthConfig c;
  c.count = 300;
  const auto a = generate(schema, c);
  EXPECT_EQ(a.size(), 300u);
  EXPECT_EQ(to_tsv(a, schema), to_tsv(generate(schema, c), schema));
  c.seed = 2;
  EXPECT_NE(to_tsv(a, schema), to_tsv(generate(schema, c), schema));
  std::set<std::size_t> labels;
  std::set<std::string> ids;
  for (const auto& r : a) {
    labels.insert(r.label);
    ids.insert(r.id);
    EXPECT_LT(r.label, schema.size());
    EXPECT_EQ(r.text.find('\t'), std::string::npos);
  }
  EXPECT_EQ(labels.size(), schema.size());
  EXPECT_EQ(ids.size(), a.size());
}

TEST(Synth, TsvLoadsBack) {
  crisiscnn::testing::TempDir dir;
  const auto schema = corpus::LabelSchema::crisis_default();
  SynthConfig c;
  c.count = 50;
  const auto rows = generate(schema, c);
  write_tsv(dir / "s.tsv", rows, schema);
  const auto back = corpus::load_tsv(dir / "s.tsv", schema);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].id, rows[i].id);
    EXPECT_EQ(back[i].label, rows[i].label);
  }
}

TEST(Synth, OutOfEventSharesCoreVocabulary) {
  const auto schema = corpus::LabelSchema::crisis_default();
  SynthConfig ev, out;
  ev.count = out.count = 400;
  out.seed = 9;
  out.out_of_event = true;
  std::set<std::string> ev_words, out_words;
  for (const auto& r : generate(schema, ev))
    for (const auto& t : textprep::preprocess(r.text)) ev_words.insert(t);
  for (const auto& r : generate(schema, out))
    for (const auto& t : textprep::preprocess(r.text)) out_words.insert(t);
  std::size_t shared = 0, fresh = 0;
  for (const auto& w : out_words) (ev_words.count(w) ? shared : fresh) += 1;
  EXPECT_GT(shared, fresh);
  EXPECT_GT(fresh, 0u);
}
