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

#include <cmath>
#include <filesystem>

#include "gradcheck.hpp"
#include "sarc/common/jsonl.hpp"
#include "sarc/common/log.hpp"
#include "sarc/corpus/split.hpp"
#include "sarc/corpus/synthetic.hpp"
#include "sarc/detector/trainer.hpp"

using namespace sarc;
using namespace sarc::detector;
using corpus::CommentRecord;
using nn::Matrix;
using nn::Tensor;

namespace {

DetectorConfig tiny_config() {
  DetectorConfig c;
  c.encoder.layers = 1;
  c.encoder.heads = 2;
  c.encoder.d = 4;
  c.encoder.ffn_hidden = 6;
  c.encoder.t_max = 16;
  c.m = 3;
  c.batch_size = 8;
  return c;
}

std::vector<CommentRecord> fixture(std::size_t n, std::uint64_t seed, bool separable = false) {
  corpus::SyntheticOptions o;
  o.count = n;
  o.seed = seed;
  o.separable = separable;
  return corpus::make_synthetic_corpus(o);
}

void zero_all(nn::ParamStore& store) {
  for (auto& [name, p] : store.items()) {
    Tensor t = p;
    t.mutable_value().fill(0.0);
  }
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("encoder input layout") {
  corpus::Vocab v;
  for (char32_t c : std::u32string(U"abcxy")) v.add(c);
  CommentRecord r;
  r.text = "ab";
  auto in = build_encoder_input(r, v, 8);
  CHECK(in.ids == std::vector<int>{1, v.index_of(U'a'), v.index_of(U'b'), 2, 0, 0, 0, 0});
  CHECK(in.length == 4);
  CHECK_FALSE(in.truncated);

  r.context = "xy";
  in = build_encoder_input(r, v, 8);
  const int sep = static_cast<int>(v.size());
  CHECK(in.ids == std::vector<int>{1, v.index_of(U'a'), v.index_of(U'b'), sep, v.index_of(U'x'),
                                   v.index_of(U'y'), 2, 0});

  SUBCASE("context is cut before the comment") {
    in = build_encoder_input(r, v, 6);
    CHECK(in.truncated);
    CHECK(in.ids == std::vector<int>{1, v.index_of(U'a'), v.index_of(U'b'), sep,
                                     v.index_of(U'x'), 2});
    in = build_encoder_input(r, v, 4);
    CHECK(in.ids == std::vector<int>{1, v.index_of(U'a'), v.index_of(U'b'), 2});
    in = build_encoder_input(r, v, 3);
    CHECK(in.ids == std::vector<int>{1, v.index_of(U'a'), 2});
  }
}

TEST_CASE("text encoder") {
  const auto records = fixture(12, 3);
  auto cfg = tiny_config();
  cfg.encoder.d = 8;
  auto det = make_detector(cfg, records);
  const auto inputs = det->inputs(records);
  nn::NoGradGuard ng;

  const Matrix a = det->encoder().encode(inputs).value();
  const Matrix b = det->encoder().encode(inputs).value();
  CHECK(a.rows() == records.size());
  CHECK(a.cols() == 8);
  CHECK(a.values() == b.values());

  std::size_t longest = 0;
  for (const auto& in : inputs) longest = std::max(longest, in.length);
  const Matrix padded = det->encoder().encode(inputs, longest + 7).value();
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(padded[i] == doctest::Approx(a[i]).epsilon(1e-9));

  SUBCASE("last-layer shortcut equals running every row") {
    // A one-row batch padded to its own length must match the batched value.
    for (std::size_t i = 0; i < 3; ++i) {
      const Matrix one = det->encoder().encode({inputs[i]}).value();
      for (std::size_t j = 0; j < one.cols(); ++j) {
        CHECK(one(0, j) == doctest::Approx(a(i, j)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("user embedding") {
  Rng rng(1);
  nn::ParamStore store;
  UserEmbedding user(store, 4, 3, 1, rng);
  const Tensor x = Tensor::constant(Matrix(2, 4, {0.5, -1.0, 2.0, 0.25, 1.0, 1.0, -3.0, 0.0}));

  SUBCASE("dense oracle") {
    const Matrix& w = store.get("det.user0.w").value();
    const Matrix& bias = store.get("det.user0.b").value();
    const Matrix u = user(x).value();
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        double z = bias(0, j);
        for (std::size_t k = 0; k < 4; ++k) z += x.value()(i, k) * w(k, j);
        CHECK(u(i, j) == doctest::Approx(std::max(0.0, z)).epsilon(1e-12));
      }
    }
  }
  SUBCASE("zero and negative bias") {
    zero_all(store);
    const Matrix zero = user(x).value();
    for (double v : zero.values()) CHECK(v == 0.0);
    Tensor bias = store.get("det.user0.b");
    bias.mutable_value().fill(-0.7);
    const Matrix clamped = user(x).value();
    for (double v : clamped.values()) CHECK(v == 0.0);
  }
  CHECK_THROWS_AS(user(Tensor::constant(Matrix(1, 5))), Error);
}

TEST_CASE("fusion head") {
  Rng rng(2);
  nn::ParamStore store;
  FusionHead head(store, 2, 2, rng);
  const Tensor h = Tensor::constant(Matrix(1, 2, {0.3, -1.2}));
  const Tensor u = Tensor::constant(Matrix(1, 2, {0.0, 2.5}));
  const Tensor combined = head.combine(h, u);
  CHECK(combined.value().values() == std::vector<double>{0.3, -1.2, 0.0, 2.5});

  const Matrix& w = head.linear().w.value();
  const double z = 0.3 * w(0, 0) - 1.2 * w(1, 0) + 2.5 * w(3, 0) + head.linear().b.value()(0, 0);
  CHECK(head.logit(combined).item() == doctest::Approx(z).epsilon(1e-12));

  zero_all(store);
  CHECK(1.0 / (1.0 + std::exp(-head.logit(combined).item())) == 0.5);
  Tensor b = head.linear().b;
  b.mutable_value().fill(20.0);
  CHECK(1.0 / (1.0 + std::exp(-head.logit(combined).item())) > 0.9999);
}

TEST_CASE("decision threshold ties go to sarcastic") {
  CHECK(decide(0.5) == corpus::Label::kSarcastic);
  CHECK(decide(std::nextafter(0.5, 0.0)) == corpus::Label::kNonSarcastic);
  CHECK(decide(0.9) == corpus::Label::kSarcastic);
}

TEST_CASE("detector loss matches finite differences") {
  const auto records = fixture(6, 5);
  auto cfg = tiny_config();
  cfg.encoder.t_max = 10;
  auto det = make_detector(cfg, records);
  std::vector<double> targets;
  for (const auto& r : records) targets.push_back(r.label == corpus::Label::kSarcastic ? 1 : 0);
  std::vector<std::pair<std::string, Tensor>> params = det->fusion_params().items();
  for (const auto& kv : det->encoder().params().items()) {
    if (kv.first != "det.encoder.embed") params.push_back(kv);
  }
  const auto res = testing::gradcheck(
      params, [&] { return nn::bce_with_logits(det->forward(records).logits, targets); });
  CHECK_MESSAGE(res.max_rel_error < 1e-3, res.worst);
  CHECK(res.checked < 1000);
}

TEST_CASE("predictions") {
  const auto records = fixture(40, 6);
  auto det = make_detector(tiny_config(), records);
  const auto batched = predict(*det, records, 32);
  const auto again = predict(*det, records, 32);
  REQUIRE(batched.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(batched[i].id == records[i].id);
    CHECK(batched[i].prob > 0.0);
    CHECK(batched[i].prob < 1.0);
    CHECK(batched[i].prob == again[i].prob);
    CHECK(batched[i].label == decide(batched[i].prob));
  }
  const auto single = predict(*det, records, 1);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(single[i].prob == doctest::Approx(batched[i].prob).epsilon(1e-6));
  }

  SUBCASE("masked column is inert") {
    Rng rng(4);
    Tensor w = det->head().linear().w;
    for (auto& v : w.mutable_value().values()) v = rng.normal();
    auto mask = full_mask();
    const auto [b, e] = feature_columns(BehaviorFeature::kSR);
    for (std::size_t j = b; j < e; ++j) mask[j] = 0.0;
    det->set_feature_mask(mask);
    auto moved = records;
    for (auto& r : moved) r.behavior->sarcasm_rate = 1.0 - r.behavior->sarcasm_rate;
    const auto p1 = predict(*det, records);
    const auto p2 = predict(*det, moved);
    for (std::size_t i = 0; i < records.size(); ++i) CHECK(p1[i].prob == p2[i].prob);
    // Any other column still matters.
    for (auto& r : moved) r.behavior->reply_ratio = 1.0 - r.behavior->reply_ratio;
    const auto p3 = predict(*det, moved);
    bool changed = false;
    for (std::size_t i = 0; i < records.size(); ++i) changed |= p3[i].prob != p1[i].prob;
    CHECK(changed);
  }
  SUBCASE("missing behavior is reported") {
    auto bad = records;
    bad[3].behavior.reset();
    CHECK_THROWS_WITH_AS(predict(*det, bad), doctest::Contains("behavior-fill"), Error);
  }
}

TEST_CASE("feature columns") {
  CHECK(feature_columns(BehaviorFeature::kSR).second - feature_columns(BehaviorFeature::kSR).first == 1);
  CHECK(feature_columns(BehaviorFeature::kTD).second - feature_columns(BehaviorFeature::kTD).first == 5);
  CHECK(parse_feature("CF") == BehaviorFeature::kCF);
  CHECK_THROWS_AS(parse_feature("XX"), Error);
  std::size_t covered = 0;
  for (auto f : kAllBehaviorFeatures) {
    const auto [b, e] = feature_columns(f);
    covered += e - b;
  }
  CHECK(covered + kBehaviorOffset == kUserFeatureWidth);
}

TEST_CASE("embedding export") {
  const auto records = fixture(10, 8);
  auto det = make_detector(tiny_config(), records);
  const auto dir = temp_dir("sarc_export_test");
  std::filesystem::create_directories(dir);
  export_embeddings(*det, records, dir / "a.csv");
  export_embeddings(*det, records, dir / "b.csv");
  const std::string a = read_text(dir / "a.csv");
  CHECK(a == read_text(dir / "b.csv"));
  std::size_t lines = 0;
  for (char c : a) lines += c == '\n';
  CHECK(lines == 11);
  const std::string header = a.substr(0, a.find('\n'));
  CHECK(header.rfind("id,label,prob,e0,", 0) == 0);
  CHECK(std::count(header.begin(), header.end(), ',') == 3 + static_cast<long>(det->combined_width()) - 1);
  CHECK(det->combined_width() == 4 + 3);
  CHECK_THROWS_AS(export_embeddings(*det, records, dir / "missing" / "x.csv"), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("training on the separable fixture") {
  set_log_level(LogLevel::kError);
  const auto records = fixture(600, 11, true);
  const auto split = corpus::split_dataset(records, {0.6, 0.2, 0.2}, 11);
  DetectorConfig cfg;
  cfg.lr = 1e-3;
  cfg.batch_size = 16;

  auto det = make_detector(cfg, split.train);
  const auto history = train_detector(*det, split.train, split.val);
  CHECK(history.best_f1 >= 0.99);
  CHECK(evaluate(*det, split.val).sarcastic.f1 == history.best_f1);
  CHECK(history.epochs.size() <= history.best_epoch + cfg.patience + 1);

  SUBCASE("inverted labels are learned as well") {
    auto flip_all = [](std::vector<CommentRecord> rs) {
      for (auto& r : rs) r.label = corpus::flip(r.label);
      return rs;
    };
    auto inv = make_detector(cfg, split.train);
    const auto h = train_detector(*inv, flip_all(split.train), flip_all(split.val));
    CHECK(h.best_f1 >= 0.99);
  }
  SUBCASE("patience zero stops one epoch after the best") {
    auto p0 = cfg;
    p0.patience = 0;
    auto d0 = make_detector(p0, split.train);
    const auto h = train_detector(*d0, split.train, split.val);
    CHECK((h.epochs.size() == h.best_epoch + 1 || h.epochs.size() == p0.max_epochs));
  }
  SUBCASE("checkpoint round trip and encoder reuse") {
    const auto dir = temp_dir("sarc_detector_ckpt");
    save_detector(dir / "det", *det);
    const auto loaded = load_detector(dir / "det");
    const auto a = predict(*det, split.test);
    const auto b = predict(*loaded, split.test);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].prob == b[i].prob);

    det->encoder().save(dir / "enc", det->vocab());
    DetectorConfig pc = cfg;
    pc.encoder.mode = EncoderMode::kPretrainedCheckpoint;
    pc.encoder.checkpoint = dir / "enc";
    pc.encoder.d = 999;  // replaced by the stored shape
    auto pre = make_detector(pc, split.train);
    CHECK(pre->config().encoder.d == 64);
    nn::NoGradGuard ng;
    const auto inputs = det->inputs(split.test);
    CHECK(pre->encoder().encode(inputs).value().values() ==
          det->encoder().encode(inputs).value().values());
    std::filesystem::remove_all(dir);
  }
}

TEST_CASE("detector config validation") {
  auto cfg = tiny_config();
  cfg.encoder.heads = 3;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = tiny_config();
  cfg.encoder.mode = EncoderMode::kPretrainedCheckpoint;
  CHECK_THROWS_AS(cfg.validate(), Error);
  CHECK_THROWS_AS(parse_encoder_mode("bert"), Error);
  const auto back = detector_config_from_json(detector_config_to_json(tiny_config()));
  CHECK(back.encoder.d == 4);
  CHECK(back.m == 3);
}
