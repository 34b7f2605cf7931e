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
#include <fstream>

#include "sarc/common/jsonl.hpp"
#include "sarc/common/log.hpp"
#include "sarc/corpus/synthetic.hpp"
#include "sarc/harness/ablation.hpp"
#include "sarc/harness/metrics.hpp"
#include "sarc/harness/noise.hpp"
#include "sarc/harness/projection.hpp"
#include "sarc/harness/sweep.hpp"

using namespace sarc;
using namespace sarc::harness;
using corpus::Label;
using nn::Matrix;

namespace {

constexpr Label S = Label::kSarcastic;
constexpr Label N = Label::kNonSarcastic;

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("metrics examples") {
  const auto perfect = compute_metrics({S, N, S, N}, {S, N, S, N});
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.sarcastic.f1 == 1.0);
  CHECK(perfect.non_sarcastic.f1 == 1.0);

  const auto m = compute_metrics({S, N, N, N}, {S, S, N, N});
  CHECK(m.sarcastic.precision == 1.0);
  CHECK(m.sarcastic.recall == 0.5);
  CHECK(m.sarcastic.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(m.accuracy == 0.75);
  CHECK(m.non_sarcastic.precision == doctest::Approx(2.0 / 3.0));
  CHECK(m.non_sarcastic.recall == 1.0);
  CHECK(m.count() == 4);

  CHECK_THROWS_AS(compute_metrics({S}, {S, N}), Error);
  CHECK_THROWS_AS(compute_metrics({}, {}), Error);
  CHECK_THROWS_AS(compute_metrics({Label::kAmbiguous}, {S}), Error);

  const auto none_predicted = compute_metrics({N, N}, {S, N});
  CHECK(none_predicted.sarcastic.precision == 0.0);
  CHECK(none_predicted.sarcastic.f1 == 0.0);

  const auto back = MetricsReport::from_json(m.to_json());
  CHECK(back.tp == m.tp);
  CHECK(back.sarcastic.f1 == m.sarcastic.f1);
  CHECK(table_row("ours", m) ==
        "| ours | 0.7500 | 0.6667 | 1.0000 | 0.8000 | 1.0000 | 0.5000 | 0.6667 |");
}

TEST_CASE("metrics agree with a brute-force confusion matrix") {
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(40);
    std::vector<Label> p(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = rng.bernoulli(0.5) ? S : N;
      g[i] = rng.bernoulli(0.5) ? S : N;
    }
    long c[2][2] = {{0, 0}, {0, 0}};  // [gold][pred], index 0 = sarcastic
    for (std::size_t i = 0; i < n; ++i) ++c[static_cast<int>(g[i])][static_cast<int>(p[i])];
    auto ratio = [](long a, long b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
    auto f1 = [](double pr, double rc) { return pr + rc > 0 ? 2 * pr * rc / (pr + rc) : 0.0; };
    const double ps = ratio(c[0][0], c[0][0] + c[1][0]), rs = ratio(c[0][0], c[0][0] + c[0][1]);
    const double pn = ratio(c[1][1], c[1][1] + c[0][1]), rn = ratio(c[1][1], c[1][1] + c[1][0]);
    const auto m = compute_metrics(p, g);
    CHECK(m.tp == static_cast<std::size_t>(c[0][0]));
    CHECK(m.fn == static_cast<std::size_t>(c[0][1]));
    CHECK(m.fp == static_cast<std::size_t>(c[1][0]));
    CHECK(m.tn == static_cast<std::size_t>(c[1][1]));
    CHECK(m.accuracy == ratio(c[0][0] + c[1][1], static_cast<long>(n)));
    CHECK(m.sarcastic.precision == ps);
    CHECK(m.sarcastic.recall == rs);
    CHECK(m.sarcastic.f1 == f1(ps, rs));
    CHECK(m.non_sarcastic.precision == pn);
    CHECK(m.non_sarcastic.recall == rn);
    CHECK(m.non_sarcastic.f1 == f1(pn, rn));
  }
}

TEST_CASE("label noise") {
  std::vector<Label> labels(20000);
  Rng rng(3);
  for (auto& l : labels) l = rng.bernoulli(0.5) ? S : N;

  const auto zero = inject_label_noise(labels, 0.0, 1);
  CHECK(zero.labels == labels);
  CHECK(zero.flip_count() == 0);

  const auto all = inject_label_noise(labels, 1.0, 1);
  CHECK(all.flip_count() == labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) CHECK(all.labels[i] == corpus::flip(labels[i]));

  const auto q = inject_label_noise(labels, 0.25, 9);
  const double sigma = std::sqrt(20000 * 0.25 * 0.75);
  CHECK(std::abs(static_cast<double>(q.flip_count()) - 5000.0) <= 4 * sigma);
  CHECK(q.flipped.size() == labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    CHECK((q.labels[i] != labels[i]) == q.flipped[i]);
  }
  CHECK(inject_label_noise(labels, 0.25, 9).flipped == q.flipped);
  CHECK(inject_label_noise(labels, 0.25, 10).flipped != q.flipped);

  CHECK_THROWS_AS(inject_label_noise(labels, -0.1, 1), Error);
  CHECK_THROWS_AS(inject_label_noise(labels, 1.5, 1), Error);
}

TEST_CASE("label noise flips are independent of their neighbours") {
  // 2x2 contingency of (flip_i, flip_{i+1}); chi-square with one degree of
  // freedom must stay below the 4-sigma threshold 16.
  const std::size_t n = 100000;
  const auto r = inject_label_noise(std::vector<Label>(n, S), 0.3, 21);
  double c[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i + 1 < n; ++i) c[r.flipped[i]][r.flipped[i + 1]] += 1;
  const double total = static_cast<double>(n - 1);
  double chi2 = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double e = (c[a][0] + c[a][1]) * (c[0][b] + c[1][b]) / total;
      chi2 += (c[a][b] - e) * (c[a][b] - e) / e;
    }
  }
  CHECK(chi2 < 16.0);
}

TEST_CASE("feature ablation") {
  const auto f = all_features();
  const auto none = ablate_features(f, {});
  CHECK(none.remaining == f);
  for (double v : none.mask) CHECK(v == 1.0);

  auto zeros = [](const detector::FeatureMask& m) {
    return std::count(m.begin(), m.end(), 0.0);
  };
  const auto sr = ablate_features(f, {detector::BehaviorFeature::kSR});
  CHECK(zeros(sr.mask) == 1);
  CHECK(sr.mask[13] == 0.0);
  CHECK(sr.remaining.size() == 4);
  const auto td = ablate_features(f, {detector::BehaviorFeature::kTD});
  CHECK(zeros(td.mask) == 5);
  for (std::size_t j = 0; j < 7; ++j) CHECK(td.mask[j] == 1.0);

  CHECK_THROWS_AS(ablate_features(sr.remaining, {detector::BehaviorFeature::kSR}), Error);
  CHECK(feature_set_name(parse_feature_set("CC+TD")) == "CC+TD");
  CHECK(parse_feature_set("none").empty());
  CHECK_THROWS_AS(parse_feature_set("SR+SR"), Error);
  CHECK_THROWS_AS(parse_feature_set("XY"), Error);
}

TEST_CASE("sweep specification") {
  SweepSpec spec;
  spec.grid = default_grid(SweepKind::kNoise);
  CHECK(spec.grid.size() == 9);
  CHECK(spec.grid.front() == "0.05");
  CHECK(spec.grid.back() == "0.45");
  CHECK_NOTHROW(spec.validate());
  spec.grid = {"0.5"};
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.kind = SweepKind::kRobustness;
  spec.grid = {"0.15"};
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.grid = default_grid(SweepKind::kRobustness);
  CHECK_NOTHROW(spec.validate());
  spec.kind = SweepKind::kAblation;
  spec.grid = {"none", "QQ"};
  CHECK_THROWS_AS(spec.validate(), Error);
  CHECK(default_grid(SweepKind::kSize) == std::vector<std::string>{"5000", "10000", "15000", "20000"});
  CHECK_THROWS_AS(parse_sweep_kind("speed"), Error);
}

TEST_CASE("training set construction") {
  set_log_level(LogLevel::kError);
  corpus::SyntheticOptions o;
  o.count = 300;
  const auto records = corpus::make_synthetic_corpus(o);
  std::size_t available_s = 0;
  for (const auto& r : records) available_s += r.label == S;

  for (double prop = 0.1; prop < 0.95; prop += 0.1) {
    const auto out = resample_to_proportion(records, prop, 200, 5);
    CHECK(out.size() == 200);
    const auto s = std::count_if(out.begin(), out.end(), [](const auto& r) { return r.label == S; });
    CHECK(s == std::llround(prop * 200));
  }
  CHECK_THROWS_WITH_AS(resample_to_proportion(records, 0.9, 2 * available_s, 5, false),
                       doctest::Contains("shortfall"), Error);
  CHECK_NOTHROW(resample_to_proportion(records, 0.9, 2 * available_s, 5, true));

  const auto sub = subsample(records, 50, 4);
  CHECK(sub.size() == 50);
  CHECK(subsample(records, 50, 4)[7].id == sub[7].id);
  CHECK_THROWS_WITH_AS(subsample(records, 301, 4), doctest::Contains("shortfall"), Error);

  SweepSpec spec;
  spec.kind = SweepKind::kNoise;
  const auto noisy = sweep_training_set(spec, "0.25", records, 1);
  std::size_t flips = 0;
  for (std::size_t i = 0; i < records.size(); ++i) flips += noisy[i].label != records[i].label;
  CHECK(flips > 30);
  CHECK(flips < 120);
}

TEST_CASE("sweep runs are append-only and reproducible") {
  set_log_level(LogLevel::kError);
  corpus::SyntheticOptions o;
  o.count = 120;
  o.separable = true;
  const auto split = corpus::split_dataset(corpus::make_synthetic_corpus(o), {0.6, 0.2, 0.2}, 1);
  SweepSpec spec;
  spec.kind = SweepKind::kAblation;
  spec.grid = {"none", "SR"};
  spec.seeds = {1};
  spec.base.encoder.d = 8;
  spec.base.encoder.ffn_hidden = 8;
  spec.base.encoder.layers = 1;
  spec.base.max_epochs = 2;
  spec.base.lr = 1e-3;

  const auto dir = temp_dir("sarc_sweep_test");
  const auto rows = run_sweep(spec, split, dir);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].point == "none");
  CHECK(std::filesystem::exists(dir / "ablation.svg"));
  const std::string table = read_text(dir / "results.csv");
  CHECK(table.rfind(sweep_csv_header() + "\n", 0) == 0);

  // Completed rows are not recomputed.
  const auto again = run_sweep(spec, split, dir);
  CHECK(read_text(dir / "results.csv") == table);
  CHECK(again[1].csv() == rows[1].csv());

  // A fresh run reproduces the rows bit for bit.
  const auto other = temp_dir("sarc_sweep_test_b");
  const auto fresh = run_sweep(spec, split, other);
  CHECK(read_text(other / "results.csv") == table);
  CHECK(read_sweep_table(other / "results.csv").size() == 2);

  // Two workers give the same rows.
  spec.jobs = 2;
  const auto third = temp_dir("sarc_sweep_test_c");
  const auto parallel = run_sweep(spec, split, third);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(parallel[i].csv() == rows[i].csv());
  for (const auto& d : {dir, other, third}) std::filesystem::remove_all(d);
}

TEST_CASE("2-D projection") {
  Rng rng(12);
  const std::size_t n = 60;
  Matrix x(n, 6);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = i < n / 2 ? 0 : 1;
    for (std::size_t j = 0; j < 6; ++j) x(i, j) = rng.normal() + (labels[i] ? 8.0 : 0.0);
  }
  // Row 5 duplicated into row 6.
  for (std::size_t j = 0; j < 6; ++j) x(6, j) = x(5, j);

  TsneConfig cfg;
  cfg.iterations = 400;
  const Matrix y = tsne_2d(x, cfg);
  CHECK(y.rows() == n);
  CHECK(y.cols() == 2);
  CHECK(std::hypot(y(5, 0) - y(6, 0), y(5, 1) - y(6, 1)) < 1e-12);
  CHECK(silhouette(y, labels) >= 0.5);
  CHECK(tsne_2d(x, cfg).values() == y.values());
  CHECK_THROWS_AS(tsne_2d(Matrix(9, 3), cfg), Error);

  SUBCASE("file round trip") {
    const auto dir = temp_dir("sarc_projection_test");
    std::string csv = "id,label,prob,e0,e1,e2,e3,e4,e5\n";
    for (std::size_t i = 0; i < n; ++i) {
      csv += "r" + std::to_string(i) + "," + std::to_string(labels[i]) + ",0.5";
      for (std::size_t j = 0; j < 6; ++j) csv += "," + std::to_string(x(i, j));
      csv += "\n";
    }
    write_text_atomic(dir / "emb.csv", csv);
    project_2d(dir / "emb.csv", dir / "xy.csv", cfg, dir / "xy.svg");
    const std::string out = read_text(dir / "xy.csv");
    CHECK(std::count(out.begin(), out.end(), '\n') == static_cast<long>(n + 1));
    CHECK(out.rfind("id,label,x,y\nr0,0,", 0) == 0);
    CHECK(std::filesystem::exists(dir / "xy.svg"));

    write_text_atomic(dir / "bad.csv", "id,label,prob,e0\nr0,0,0.5,1\nr1,0,0.5,abc\n");
    CHECK_THROWS_WITH_AS(read_embeddings(dir / "bad.csv"), doctest::Contains("line 3"), Error);
    write_text_atomic(dir / "short.csv", "id,label,prob,e0,e1\nr0,0,0.5,1\n");
    CHECK_THROWS_WITH_AS(read_embeddings(dir / "short.csv"), doctest::Contains("line 2"), Error);
    std::filesystem::remove_all(dir);
  }
}

TEST_CASE("silhouette oracle") {
  const Matrix p(4, 1, {0.0, 1.0, 10.0, 11.0});
  const std::vector<int> l = {0, 0, 1, 1};
  // Point 0: a=1, b=(10+11)/2=10.5 -> 9.5/10.5; point 1: a=1, b=9.5 -> 8.5/9.5;
  // symmetric for the other cluster.
  const double expect = (9.5 / 10.5 + 8.5 / 9.5) / 2.0;
  CHECK(silhouette(p, l) == doctest::Approx(expect).epsilon(1e-12));
}
