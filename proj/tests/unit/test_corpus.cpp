/* Copyright 2026 The sarcgen Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "sarc/common/rng.hpp"
#include "sarc/common/utf8.hpp"
#include "sarc/corpus/dataset_io.hpp"
#include "sarc/corpus/encoding.hpp"
#include "sarc/corpus/split.hpp"
#include "sarc/corpus/vocab.hpp"

using namespace sarc;
using namespace sarc::corpus;

namespace {

CommentRecord rec(std::string id, std::string text, Label label = Label::kSarcastic) {
  CommentRecord r;
  r.id = std::move(id);
  r.text = std::move(text);
  r.label = label;
  return r;
}

Json valid_raw() {
  return Json::parse(R"({
    "id": "c1", "text": "这张票真值了", "label": 0, "topic": "entertainment",
    "hierarchy": "top_level", "context": null,
    "behavior": {"comment_count": 120, "topic_distribution": [0.2, 0.1, 0.5, 0.1, 0.1],
                 "sarcasm_rate": 0.4, "comment_frequency": 3.5, "reply_ratio": 0.25}
  })");
}

bool has_rule(const std::vector<Violation>& vs, const std::string& rule) {
  return std::any_of(vs.begin(), vs.end(),
                     [&](const Violation& v) { return v.rule == rule; });
}

}  // namespace

TEST_CASE("build_vocab counts characters against min_freq") {
  SUBCASE("min_freq 1 keeps every character") {
    Vocab v = build_vocab({rec("a", "aab")}, 1);
    CHECK(v.size() == 6);
    CHECK(v.index_of(U'a') == 4);  // most frequent first
    CHECK(v.index_of(U'b') == 5);
  }
  SUBCASE("min_freq 2 drops the singleton") {
    Vocab v = build_vocab({rec("a", "aab")}, 2);
    CHECK(v.size() == 5);
    CHECK(v.contains(U'a'));
    CHECK(v.index_of(U'b') == Vocab::kUnk);
  }
  SUBCASE("fixture corpus of ten distinct characters") {
    std::vector<CommentRecord> rs = {rec("1", "你好世界"), rec("2", "电影真好看"),
                                     rec("3", "看了五")};
    // Brute-force distinct count over the fixture.
    std::set<char32_t> distinct;
    for (const auto& r : rs)
      for (char32_t c : utf8::decode(r.text)) distinct.insert(c);
    REQUIRE(distinct.size() == 10);
    CHECK(build_vocab(rs, 1).size() == 14);
  }
  SUBCASE("errors") {
    CHECK_THROWS_WITH(build_vocab({}, 1), "empty corpus");
    CHECK_THROWS(build_vocab({rec("a", "x")}, 0));
  }
  SUBCASE("reserved tokens never collide") {
    Vocab v = build_vocab({rec("a", "<pad>")}, 1);
    CHECK(v.token(Vocab::kPad) == "<pad>");
    CHECK(v.index_of(U'<') >= Vocab::kReserved);
  }
}

TEST_CASE("vocabulary file round-trips") {
  Vocab v = build_vocab({rec("a", "讽刺 sarcasm!")}, 1);
  const auto path = std::filesystem::temp_directory_path() / "sarc_vocab_test.txt";
  v.save(path);
  Vocab w = Vocab::load(path);
  REQUIRE(w.size() == v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(w.token(static_cast<int>(i)) == v.token(static_cast<int>(i)));
  }
  std::filesystem::remove(path);
}

TEST_CASE("encode_text layout") {
  Vocab v;
  v.add(U'a');
  v.add(U'b');
  SUBCASE("empty text") {
    auto s = encode_text("", v, 4);
    CHECK(s.ids == std::vector<int>{Vocab::kSos, Vocab::kEos, Vocab::kPad, Vocab::kPad});
    CHECK(s.length == 2);
    CHECK(s.mask == std::vector<bool>{true, true, false, false});
  }
  SUBCASE("direct mapping") {
    auto s = encode_text("ab", v, 8);
    CHECK(s.ids == std::vector<int>{1, 4, 5, 2, 0, 0, 0, 0});
    CHECK(s.check(v.size()).empty());
  }
  SUBCASE("truncation keeps SOS and EOS") {
    auto s = encode_text("abababab", v, 5);
    CHECK(s.ids == std::vector<int>{1, 4, 5, 4, 2});
    CHECK(s.length == 5);
  }
  SUBCASE("unknown characters map to UNK") {
    auto s = encode_text("a?", v, 6);
    CHECK(s.ids[2] == Vocab::kUnk);
  }
  CHECK_THROWS(encode_text("a", v, 2));
}

TEST_CASE("decode(encode(s)) round-trips over generated strings") {
  std::vector<CommentRecord> rs = {rec("1", "这张票真值了两个小时的电影感觉看了五个小时abc")};
  Vocab v = build_vocab(rs, 1);
  const std::u32string alphabet = utf8::decode(rs[0].text);
  Rng rng(99);
  const std::size_t t_max = 16;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t len = rng.below(t_max - 1);  // <= t_max - 2
    std::u32string s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng.below(alphabet.size())]);
    const std::string text = utf8::encode(s);
    auto seq = encode_text(text, v, t_max);
    REQUIRE(seq.check(v.size()).empty());
    REQUIRE(decode(seq, v) == text);
  }
}

TEST_CASE("encode_condition one-hot layout") {
  CHECK(encode_condition(Label::kSarcastic, Topic::kLifestyle, Hierarchy::kTopLevel).values ==
        std::array<double, 9>{1, 0, 1, 0, 0, 0, 0, 1, 0});
  CHECK(encode_condition(Label::kNonSarcastic, Topic::kPolitics, Hierarchy::kNested).values ==
        std::array<double, 9>{0, 1, 0, 1, 0, 0, 0, 0, 1});
  int combos = 0;
  for (int l = 0; l < 2; ++l)
    for (int t = 0; t < 5; ++t)
      for (int h = 0; h < 2; ++h) {
        auto f = encode_condition(static_cast<Label>(l), static_cast<Topic>(t),
                                  static_cast<Hierarchy>(h));
        int ones = 0, zeros = 0;
        for (double x : f.values) (x == 1.0 ? ones : zeros) += (x == 1.0 || x == 0.0);
        CHECK(ones == 3);
        CHECK(zeros == 6);
        ++combos;
      }
  CHECK(combos == 20);
  CHECK_THROWS_WITH(encode_condition(Label::kAmbiguous, Topic::kLifestyle, Hierarchy::kNested),
                    "condition requires binary label");
}

TEST_CASE("validate_record") {
  SUBCASE("happy path attaches behavior") {
    CommentRecord r = validate_record(valid_raw());
    REQUIRE(r.behavior.has_value());
    CHECK(r.behavior->comment_count == 120);
    CHECK(r.topic == Topic::kEntertainment);
    CHECK_FALSE(r.context.has_value());
    CHECK(validate_record(record_to_json(r)) == r);
  }
  SUBCASE("unnormalized topic distribution") {
    Json j = valid_raw();
    j["behavior"]["topic_distribution"] = {0.5, 0.5, 0.5, 0, 0};
    CHECK(has_rule(check_record(j, ValidationMode::kTraining), "distribution not normalized"));
    CHECK_THROWS_AS(validate_record(j), ValidationError);
  }
  SUBCASE("ambiguous label only in annotation files") {
    Json j = valid_raw();
    j["label"] = 2;
    CHECK(has_rule(check_record(j, ValidationMode::kTraining), "ambiguous label in training data"));
    CHECK(check_record(j, ValidationMode::kAnnotation).empty());
  }
  SUBCASE("missing fields and bad enums") {
    Json j = valid_raw();
    j.erase("text");
    j.erase("label");
    j["topic"] = "sports";
    auto vs = check_record(j, ValidationMode::kTraining);
    CHECK(std::count_if(vs.begin(), vs.end(), [](const Violation& v) {
            return v.rule == "missing required field";
          }) == 2);
    CHECK(has_rule(vs, "invalid topic"));
  }
  SUBCASE("blank text and out-of-range rates") {
    Json j = valid_raw();
    j["text"] = "  \t ";
    j["behavior"]["sarcasm_rate"] = 1.5;
    j["behavior"]["comment_count"] = -1;
    auto vs = check_record(j, ValidationMode::kTraining);
    CHECK(has_rule(vs, "must be non-empty"));
    CHECK(has_rule(vs, "must be in [0,1]"));
    CHECK(has_rule(vs, "must be non-negative"));
  }
}

TEST_CASE("dataset files report line numbers") {
  const auto path = std::filesystem::temp_directory_path() / "sarc_ds_test.jsonl";
  Json bad = valid_raw();
  bad["id"] = "c2";
  bad["label"] = 7;
  write_text_atomic(path, valid_raw().dump() + "\n\n" + bad.dump() + "\n");
  try {
    read_dataset(path);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    REQUIRE(e.violations().size() == 1);
    CHECK(e.violations()[0].field == "line 3: label");
  }
  write_text_atomic(path, valid_raw().dump() + "\n");
  auto rs = read_dataset(path);
  CHECK(rs.size() == 1);
  write_dataset(path, rs);
  CHECK(read_dataset(path) == rs);
  std::filesystem::remove(path);
}

namespace {
std::vector<CommentRecord> labeled(std::size_t n_sarc, std::size_t n_non) {
  std::vector<CommentRecord> rs;
  for (std::size_t i = 0; i < n_sarc + n_non; ++i) {
    rs.push_back(rec("r" + std::to_string(i), "t",
                     i < n_sarc ? Label::kSarcastic : Label::kNonSarcastic));
  }
  return rs;
}
std::vector<std::string> ids_of(const std::vector<CommentRecord>& rs) {
  std::vector<std::string> out;
  for (const auto& r : rs) out.push_back(r.id);
  return out;
}
}  // namespace

TEST_CASE("split_dataset sizes") {
  auto s = split_dataset(labeled(10000, 10000), {0.6, 0.2, 0.2}, 1);
  CHECK(s.train.size() == 12000);
  CHECK(s.val.size() == 4000);
  CHECK(s.test.size() == 4000);

  auto all_train = split_dataset(labeled(5, 5), {1.0, 0.0, 0.0}, 1);
  CHECK(all_train.train.size() == 10);
  CHECK(all_train.val.empty());
  CHECK(all_train.test.empty());

  CHECK_THROWS(split_dataset(labeled(5, 5), {1.2, -0.2, 0.0}, 1));
  CHECK_THROWS(split_dataset(labeled(5, 5), {0.5, 0.2, 0.2}, 1));
  CHECK_THROWS(split_dataset({}, {0.6, 0.2, 0.2}, 1));
}

TEST_CASE("split_dataset determinism") {
  auto rs = labeled(30, 20);
  auto a = split_dataset(rs, {0.6, 0.2, 0.2}, 5);
  auto b = split_dataset(rs, {0.6, 0.2, 0.2}, 5);
  auto c = split_dataset(rs, {0.6, 0.2, 0.2}, 6);
  CHECK(ids_of(a.train) == ids_of(b.train));
  CHECK(ids_of(a.test) == ids_of(b.test));
  CHECK(ids_of(a.train) != ids_of(c.train));
}

TEST_CASE("split_dataset partitions and stratifies for many shapes") {
  Rng rng(2024);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n_s = rng.below(120), n_n = 1 + rng.below(120);
    const double val = 0.05 * static_cast<double>(rng.below(8));
    const double test = 0.05 * static_cast<double>(rng.below(8));
    auto rs = labeled(n_s, n_n);
    auto s = split_dataset(rs, {1.0 - val - test, val, test}, trial);
    const std::size_t n = rs.size();

    std::multiset<std::string> seen;
    for (auto* part : {&s.train, &s.val, &s.test})
      for (const auto& r : *part) seen.insert(r.id);
    auto all = ids_of(rs);
    REQUIRE(seen == std::multiset<std::string>(all.begin(), all.end()));

    const std::size_t n_val = static_cast<std::size_t>(std::floor(n * val + 1e-9));
    const std::size_t n_test = static_cast<std::size_t>(std::floor(n * test + 1e-9));
    REQUIRE(s.val.size() == n_val);
    REQUIRE(s.test.size() == n_test);

    for (auto* part : {&s.train, &s.val, &s.test}) {
      const double share = static_cast<double>(part->size()) / static_cast<double>(n);
      const auto sarc = std::count_if(part->begin(), part->end(), [](const auto& r) {
        return r.label == Label::kSarcastic;
      });
      const double expected_s = share * static_cast<double>(n_s);
      const double expected_n = share * static_cast<double>(n_n);
      REQUIRE(std::abs(static_cast<double>(sarc) - expected_s) <= 1.0 + 1e-9);
      REQUIRE(std::abs(static_cast<double>(part->size() - sarc) - expected_n) <= 1.0 + 1e-9);
    }
  }
}
