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

#include <map>
#include <set>

#include "crisiscnn/corpus.hpp"
#include "crisiscnn/error.hpp"
#include "helpers.hpp"

using namespace crisiscnn;
using namespace crisiscnn::corpus;
using crisiscnn::testing::TempDir;

namespace {

std::vector<LabeledExample> make_examples(const std::vector<std::size_t>& class_counts) {
  std::vector<LabeledExample> out;
  std::size_t id = 0;
  // Interleave classes so input order differs from class order.
  std::vector<std::size_t> left = class_counts;
  bool any = true;
  while (any) {
    any = false;
    for (std::size_t c = 0; c < left.size(); ++c) {
      if (left[c] == 0) continue;
      --left[c];
      any = true;
      out.push_back({"id" + std::to_string(id), {"w" + std::to_string(id)}, c, Origin::event});
      ++id;
    }
  }
  return out;
}

LabeledExample ex(std::string id, TokenSeq tokens, std::size_t label = 0) {
  return {std::move(id), std::move(tokens), label, Origin::event};
}

}  // namespace

TEST(Schema, Construction) {
  EXPECT_THROW(LabelSchema({"only"}), Error);
  EXPECT_THROW(LabelSchema({"a", "a"}), Error);
  const auto s = LabelSchema::crisis_default();
  EXPECT_EQ(s.size(), 6u);
  EXPECT_EQ(s.index_of("Not related or irrelevant"), 5u);
  EXPECT_EQ(s.index_of("Sympathy and support"), 3u);
  EXPECT_FALSE(s.index_of("Bogus"));
  EXPECT_EQ(LabelSchema::binary().name(0), "Informative");
}

TEST(Schema, FileRoundTrip) {
  TempDir dir;
  const auto s = LabelSchema::crisis_default();
  s.save(dir / "schema.txt");
  EXPECT_EQ(LabelSchema::load(dir / "schema.txt"), s);
  dir.write("c.txt", "# comment\nA\n\nB\n");
  EXPECT_EQ(LabelSchema::load(dir / "c.txt"), LabelSchema({"A", "B"}));
  try {
    LabelSchema::load(dir / "missing.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("missing.txt"), std::string::npos);
  }
}

TEST(LoadTsv, Examples) {
  TempDir dir;
  const auto schema = LabelSchema::crisis_default();
  const auto one = corpus::load_tsv(dir.write("a.tsv", "t1\tHelp NOW!!\tOther useful information\n"),
                                    schema);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].id, "t1");
  EXPECT_EQ(one[0].tokens, (TokenSeq{"help", "now", "!", "!"}));
  EXPECT_EQ(one[0].label, *schema.index_of("Other useful information"));

  try {
    corpus::load_tsv(dir.write("b.tsv", "t1\thi\tBogus\n"), schema);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("Bogus"), std::string::npos);
  }
  EXPECT_TRUE(corpus::load_tsv(dir.write("c.tsv", ""), schema).empty());
}

TEST(LoadTsv, MalformedRowsAndHeader) {
  TempDir dir;
  const auto schema = LabelSchema::binary();
  try {
    corpus::load_tsv(dir.write("a.tsv", "t1\tok\tInformative\nt2\ttoo\tmany\tInformative\n"), schema);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(corpus::load_tsv(dir.write("b.tsv", "t1 no tabs\n"), schema), ParseError);
  const auto rows = corpus::load_tsv(dir.write("c.tsv", "id\ttext\tlabel\nx\tA b\tNot informative\r\n"),
                                     schema, {true, Origin::out_of_event});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].label, 1u);
  EXPECT_EQ(rows[0].origin, Origin::out_of_event);
}

TEST(LoadTsv, WriteRoundTrip) {
  TempDir dir;
  const auto schema = LabelSchema::binary();
  const std::vector<LabeledExample> rows{ex("a", {"x", "y", "!"}, 0), ex("b", {"z"}, 1)};
  corpus::write_tsv(dir / "out.tsv", rows, schema);
  const auto back = corpus::load_tsv(dir / "out.tsv", schema);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].tokens, rows[0].tokens);
  EXPECT_EQ(back[1].id, "b");
  EXPECT_EQ(back[1].label, 1u);
}

TEST(MergeToBinary, Examples) {
  const auto schema = LabelSchema::crisis_default();
  std::vector<LabeledExample> rows{ex("a", {"x"}, *schema.index_of("Sympathy and support")),
                                   ex("b", {"y"}, *schema.index_of("Not related or irrelevant")),
                                   ex("c", {"z"}, 0)};
  const auto [merged, bin] = merge_to_binary(rows, schema);
  EXPECT_EQ(bin, LabelSchema::binary());
  ASSERT_EQ(merged.size(), 3u);
  EXPECT_EQ(merged[0].label, 0u);
  EXPECT_EQ(merged[1].label, 1u);
  EXPECT_EQ(merged[2].label, 0u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(merged[i].id, rows[i].id);

  const auto [none, bin2] = merge_to_binary({}, schema);
  EXPECT_TRUE(none.empty());
  EXPECT_EQ(bin2, LabelSchema::binary());
  EXPECT_THROW(merge_to_binary(rows, LabelSchema({"a", "b"})), Error);
}

TEST(StratifiedSplit, SixtyForty) {
  const LabelSchema schema({"pos", "neg"});
  const auto rows = make_examples({60, 40});
  const auto split = stratified_split(rows, schema, 7);
  auto count = [](const std::vector<LabeledExample>& v, std::size_t c) {
    return std::count_if(v.begin(), v.end(), [&](const auto& e) { return e.label == c; });
  };
  EXPECT_EQ(split.train.size(), 70u);
  EXPECT_EQ(split.validation.size(), 10u);
  EXPECT_EQ(split.test.size(), 20u);
  EXPECT_EQ(count(split.train, 0), 42);
  EXPECT_EQ(count(split.train, 1), 28);
  EXPECT_EQ(count(split.validation, 0), 6);
  EXPECT_EQ(count(split.validation, 1), 4);
  EXPECT_EQ(count(split.test, 0), 12);
  EXPECT_EQ(count(split.test, 1), 8);

  std::set<std::string> ids;
  for (const auto* part : {&split.train, &split.validation, &split.test}) {
    for (const auto& e : *part) EXPECT_TRUE(ids.insert(e.id).second);
  }
  EXPECT_EQ(ids.size(), 100u);
}

TEST(StratifiedSplit, Deterministic) {
  const LabelSchema schema({"a", "b", "c"});
  const auto rows = make_examples({31, 17, 9});
  const auto s1 = stratified_split(rows, schema, 3);
  const auto s2 = stratified_split(rows, schema, 3);
  auto ids = [](const std::vector<LabeledExample>& v) {
    std::vector<std::string> out;
    for (const auto& e : v) out.push_back(e.id);
    return out;
  };
  EXPECT_EQ(ids(s1.train), ids(s2.train));
  EXPECT_EQ(ids(s1.validation), ids(s2.validation));
  EXPECT_EQ(ids(s1.test), ids(s2.test));
  const auto s3 = stratified_split(rows, schema, 4);
  EXPECT_NE(ids(s1.test), ids(s3.test));
}

TEST(StratifiedSplit, StratificationProperty) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + rng.below(5);
    std::vector<std::size_t> counts(k);
    for (auto& c : counts) c = 3 + rng.below(60);
    LabelSchema schema([&] {
      std::vector<std::string> names;
      for (std::size_t c = 0; c < k; ++c) names.push_back("c" + std::to_string(c));
      return names;
    }());
    const auto split = stratified_split(make_examples(counts), schema, trial);
    const double fr[3] = {0.7, 0.1, 0.2};
    const std::vector<LabeledExample>* parts[3] = {&split.train, &split.validation, &split.test};
    for (std::size_t c = 0; c < k; ++c) {
      for (int s = 0; s < 3; ++s) {
        const auto got = std::count_if(parts[s]->begin(), parts[s]->end(),
                                       [&](const auto& e) { return e.label == c; });
        EXPECT_LE(std::abs(static_cast<double>(got) - std::round(fr[s] * counts[c])), 1.0);
      }
    }
  }
}

TEST(StratifiedSplit, Errors) {
  const LabelSchema schema({"big", "tiny"});
  try {
    stratified_split(make_examples({10, 2}), schema, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("tiny"), std::string::npos);
  }
  EXPECT_THROW(stratified_split(make_examples({10, 5}), schema, 1, {0.5, 0.5, 0.5}), Error);
}

TEST(Vocab, CoverageArithmetic) {
  std::vector<LabeledExample> train{ex("1", {"a", "a", "a", "b", "b", "c"}),
                                    ex("2", {"a", "a", "b", "b", "b"})};
  const auto v67 = build_vocab(train, 67);
  EXPECT_EQ(v67.size(), 2u + 3u);
  const auto v66 = build_vocab(train, 66);
  EXPECT_EQ(v66.size(), 2u + 2u);
  EXPECT_TRUE(v66.contains("a"));
  EXPECT_TRUE(v66.contains("b"));
  EXPECT_FALSE(v66.contains("c"));
  EXPECT_EQ(build_vocab(train, 100).size(), 5u);
  // a and b both occur 5 times; with room for one type the tie goes to "a".
  const auto v34 = build_vocab(train, 33);
  ASSERT_EQ(v34.size(), 3u);
  EXPECT_EQ(v34.token(2), "a");
  EXPECT_EQ(v34.frequency(2), 5u);
  EXPECT_THROW(build_vocab(train, 0), Error);
  EXPECT_THROW(build_vocab(train, 100.5), Error);
  EXPECT_THROW(build_vocab({}, 90), Error);
}

TEST(Vocab, ReservedIndicesAndEncoding) {
  std::vector<LabeledExample> train{ex("1", {"x", "y", "x"})};
  const auto v = build_vocab(train, 100);
  EXPECT_EQ(v.token(Vocabulary::kPad), "<pad>");
  EXPECT_EQ(v.index_of("<pad>"), Vocabulary::kUnk);  // the literal text is not padding
  EXPECT_EQ(v.token(Vocabulary::kUnk), "<unk>");
  EXPECT_EQ(v.index_of("x"), 2u);
  EXPECT_EQ(v.index_of("y"), 3u);
  EXPECT_EQ(v.index_of("never"), Vocabulary::kUnk);
  EXPECT_FALSE(v.contains("<pad>"));
  EXPECT_EQ(v.encode({"y", "zzz"}, 4), (std::vector<std::size_t>{3, 1, 0, 0}));
  EXPECT_EQ(v.encode({"x", "y", "x"}, 2), (std::vector<std::size_t>{2, 3}));
}

TEST(Vocab, BuiltFromTrainOnly) {
  const LabelSchema schema({"a", "b"});
  auto rows = make_examples({20, 20});
  const auto split = stratified_split(rows, schema, 1);
  const auto v = build_vocab(split.train, 100);
  for (const auto& e : split.test) EXPECT_FALSE(v.contains(e.tokens[0]));
  for (const auto& e : split.train) EXPECT_TRUE(v.contains(e.tokens[0]));
}
