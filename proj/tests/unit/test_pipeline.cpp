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

#include <unistd.h>

#include <filesystem>
#include <map>
#include <string>

#include "sarc/common/error.hpp"
#include "sarc/common/hash.hpp"
#include "sarc/common/log.hpp"
#include "sarc/corpus/dataset_io.hpp"
#include "sarc/corpus/synthetic.hpp"
#include "sarc/pipeline/pipeline.hpp"

using namespace sarc;
using namespace sarc::pipeline;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() /
                     ("sarc_pipeline_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ConfigSources no_env() {
  ConfigSources s;
  s.env = [](const std::string&) { return std::optional<std::string>(); };
  return s;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::kState;
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

// Small enough for a few seconds per run.
std::vector<std::pair<std::string, std::string>> tiny_flags(const fs::path& corpus,
                                                            const fs::path& run) {
  return {{"corpus.path", corpus.string()},
          {"run_dir", run.string()},
          {"gan.d_model", "16"},
          {"gan.layers", "1"},
          {"gan.heads", "2"},
          {"gan.ffn_hidden", "32"},
          {"gan.embed_dim", "8"},
          {"gan.channels", "4"},
          {"gan.t_max", "24"},
          {"gan.batch", "16"},
          {"gan.n_critic", "1"},
          {"gan.pretrain_epochs", "1"},
          {"gan.adversarial_steps", "2"},
          {"gan.generate", "40"},
          {"augment.factor", "1"},
          {"augment.replacements", "1"},
          {"behavior.epochs", "2"},
          {"behavior.batch", "32"},
          {"det.d", "16"},
          {"det.layers", "1"},
          {"det.ffn_hidden", "32"},
          {"det.t_max", "32"},
          {"det.max_epochs", "2"},
          {"det.lr", "0.001"}};
}

fs::path write_corpus(const fs::path& dir, std::size_t n) {
  corpus::SyntheticOptions o;
  o.count = n;
  o.seed = 5;
  const fs::path p = dir / "seed.jsonl";
  corpus::write_dataset(p, corpus::make_synthetic_corpus(o));
  return p;
}

}  // namespace

TEST_CASE("defaults validate and every key round-trips through the snapshot") {
  const PipelineConfig c = load_config(no_env());
  const Json snap = c.snapshot();
  CHECK(snap.size() == config_keys().size());
  ConfigSources s = no_env();
  for (const auto& [k, v] : snap.items()) s.flags.emplace_back(k, v.get<std::string>());
  CHECK(load_config(s).snapshot() == snap);
  for (const auto& k : config_keys()) {
    CHECK(describe_keys().find(k.name) != std::string::npos);
  }
}

TEST_CASE("layers apply in order: defaults, file, flags, environment") {
  const fs::path dir = scratch("layers");
  write_text_atomic(dir / "cfg.json",
                    R"({"gan": {"alpha": 0.6, "n_critic": 3}, "det.lr": 0.002, "det.patience": 7})");
  ConfigSources s = no_env();
  s.file = dir / "cfg.json";
  s.flags = {{"gan.n_critic", "4"}, {"det.lr", "0.003"}};
  std::map<std::string, std::string> env = {{"SARC_DET_LR", "0.004"}};
  s.env = [&](const std::string& name) -> std::optional<std::string> {
    auto it = env.find(name);
    return it == env.end() ? std::nullopt : std::optional<std::string>(it->second);
  };
  const PipelineConfig c = load_config(s);
  CHECK(c.gan.model.train.alpha == doctest::Approx(0.6));
  CHECK(c.gan.model.train.n_critic == 4);
  CHECK(c.det.lr == doctest::Approx(0.004));
  CHECK(c.det.patience == 7);
  CHECK(c.behavior.lambda == doctest::Approx(0.5));
  CHECK(env_name("gan.lambda_gp") == "SARC_GAN_LAMBDA_GP");
  fs::remove_all(dir);
}

TEST_CASE("unknown keys and invalid values are config errors naming the key") {
  ConfigSources s = no_env();
  s.flags = {{"gan.alpha", "1.5"}};
  CHECK(kind_of([&] { load_config(s); }) == ErrorKind::kConfig);
  CHECK(message_of([&] { load_config(s); }).find("gan.alpha") != std::string::npos);

  s.flags = {{"gan.alpah", "0.5"}};
  CHECK(message_of([&] { load_config(s); }).find("gan.alpah") != std::string::npos);

  s.flags = {{"det.batch", "lots"}};
  CHECK(message_of([&] { load_config(s); }).find("det.batch") != std::string::npos);

  s.flags = {{"augment.client", "carrier-pigeon"}};
  CHECK(kind_of([&] { load_config(s); }) == ErrorKind::kConfig);

  s.flags = {{"sweep.kind", "noise"}, {"sweep.grid", "0.05,0.9"}};
  CHECK(kind_of([&] { load_config(s); }) == ErrorKind::kConfig);

  CHECK_THROWS_AS(parse_assignment("novalue"), Error);
  CHECK(parse_assignment("a.b=c=d") == std::pair<std::string, std::string>("a.b", "c=d"));
}

TEST_CASE("module seeds derive from the global seed unless set explicitly") {
  ConfigSources a = no_env();
  a.flags = {{"seed", "1"}};
  ConfigSources b = no_env();
  b.flags = {{"seed", "2"}};
  const PipelineConfig ca = load_config(a);
  const PipelineConfig cb = load_config(b);
  CHECK(ca.gan.model.train.seed != cb.gan.model.train.seed);
  CHECK(ca.det.seed != cb.det.seed);
  CHECK(ca.gan.model.train.seed != ca.det.seed);
  CHECK(load_config(a).det.seed == ca.det.seed);

  a.flags.emplace_back("det.seed", "77");
  CHECK(load_config(a).det.seed == 77);
}

TEST_CASE("det.drop masks the dropped behavior columns") {
  ConfigSources s = no_env();
  s.flags = {{"det.drop", "SR"}};
  const PipelineConfig c = load_config(s);
  for (std::size_t i = 0; i < c.det.feature_mask.size(); ++i) {
    CHECK(c.det.feature_mask[i] == (i == 13 ? 0.0 : 1.0));
  }
}

TEST_CASE("generation conditions alternate labels and copy seed attributes") {
  corpus::SyntheticOptions o;
  o.count = 50;
  const auto seed = corpus::make_synthetic_corpus(o);
  const auto conds = generation_conditions(seed, 11, 3);
  REQUIRE(conds.size() == 11);
  std::size_t s = 0;
  for (std::size_t i = 0; i < conds.size(); ++i) {
    CHECK(conds[i].label ==
          (i % 2 == 0 ? corpus::Label::kSarcastic : corpus::Label::kNonSarcastic));
    s += conds[i].label == corpus::Label::kSarcastic;
  }
  CHECK(s == 6);
  CHECK(generation_conditions(seed, 11, 3) == conds);
  CHECK_THROWS_AS(generation_conditions({}, 3, 1), Error);
}

TEST_CASE("run lock excludes a second writer and recovers a stale lock") {
  const fs::path dir = scratch("lock");
  {
    RunLock first(dir);
    CHECK(kind_of([&] { RunLock second(dir); }) == ErrorKind::kState);
  }
  CHECK_FALSE(fs::exists(dir / ".lock"));
  write_text_atomic(dir / ".lock", "2147483646\n");
  set_log_level(LogLevel::kQuiet);
  { RunLock taken(dir); }
  CHECK_FALSE(fs::exists(dir / ".lock"));
  fs::remove_all(dir);
}

TEST_CASE("pipeline runs six stages, resumes by hash and reruns only what changed") {
  set_log_level(LogLevel::kQuiet);
  const fs::path dir = scratch("run");
  const fs::path corpus_path = write_corpus(dir, 120);
  ConfigSources s = no_env();
  s.flags = tiny_flags(corpus_path, dir / "a");
  const PipelineConfig cfg = load_config(s);

  const RunResult first = run_pipeline(cfg);
  REQUIRE(first.stages.size() == 6);
  for (const auto& st : first.stages) CHECK_FALSE(st.reused);
  REQUIRE(first.metrics.has_value());

  const Json manifest = read_manifest(cfg.run_dir);
  REQUIRE(manifest["stages"].size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(manifest["stages"][i]["name"] == kStageNames[i]);
    CHECK(manifest["stages"][i]["status"] == "done");
    CHECK_FALSE(manifest["stages"][i]["outputs"].empty());
  }
  CHECK(manifest["config"]["det.lr"] == "0.001");
  CHECK_FALSE(fs::exists(cfg.run_dir / ".lock"));

  // 6:2:2 split of the final dataset.
  const auto all = corpus::read_dataset(cfg.run_dir / "data" / "with_behavior.jsonl");
  const auto val = corpus::read_dataset(cfg.run_dir / "data" / "val.jsonl");
  const auto test = corpus::read_dataset(cfg.run_dir / "data" / "test.jsonl");
  CHECK(val.size() == all.size() / 5);
  CHECK(test.size() == all.size() / 5);
  for (const auto& r : all) CHECK(r.behavior.has_value());

  const std::string report = read_text(cfg.run_dir / "report" / "report.md");
  CHECK(report.find(harness::table_header()) != std::string::npos);
  CHECK(report.find("| detector (F) |") != std::string::npos);

  SUBCASE("a run interrupted in stage 4 resumes without redoing stages 1-3") {
    Json m = read_manifest(cfg.run_dir);
    m["stages"][3]["status"] = "running";
    for (std::size_t i = 4; i < 6; ++i) m["stages"][i] = Json{{"name", kStageNames[i]}, {"status", "pending"}};
    write_text_atomic(manifest_path(cfg.run_dir), m.dump(2));
    fs::remove(cfg.run_dir / "data" / "test.jsonl");
    const RunResult again = run_pipeline(cfg);
    for (std::size_t i = 0; i < 3; ++i) CHECK(again.stages[i].reused);
    for (std::size_t i = 3; i < 6; ++i) CHECK_FALSE(again.stages[i].reused);
    CHECK(again.metrics->sarcastic.f1 == first.metrics->sarcastic.f1);
  }

  SUBCASE("an unchanged rerun reuses everything") {
    const RunResult again = run_pipeline(cfg);
    for (const auto& st : again.stages) CHECK(st.reused);
    CHECK(again.metrics->accuracy == first.metrics->accuracy);
  }

  SUBCASE("changing a detector key reruns only training and evaluation") {
    s.flags.emplace_back("det.patience", "0");
    const RunResult again = run_pipeline(load_config(s));
    for (std::size_t i = 0; i < 4; ++i) CHECK(again.stages[i].reused);
    CHECK_FALSE(again.stages[4].reused);
    CHECK_FALSE(again.stages[5].reused);
  }

  SUBCASE("a tampered output is detected and rebuilt") {
    write_text_atomic(cfg.run_dir / "data" / "augmented.jsonl", "{}\n");
    const RunResult again = run_pipeline(cfg);
    CHECK(again.stages[0].reused);
    CHECK_FALSE(again.stages[1].reused);
    CHECK(read_manifest(cfg.run_dir)["stages"][1]["status"] == "done");
  }

  SUBCASE("same config and seed give byte-identical artifacts in a fresh directory") {
    ConfigSources s2 = no_env();
    s2.flags = tiny_flags(corpus_path, dir / "b");
    const PipelineConfig cfg2 = load_config(s2);
    run_pipeline(cfg2, RunOptions{std::string("split")});
    for (const char* f : {"data/generated.jsonl", "data/augmented.jsonl",
                          "data/with_behavior.jsonl", "data/train.jsonl", "gan/generator.bin"}) {
      CHECK(sha256_file(cfg.run_dir / f) == sha256_file(cfg2.run_dir / f));
    }
    const Json m2 = read_manifest(cfg2.run_dir);
    CHECK(m2["stages"][3]["status"] == "done");
    CHECK(m2["stages"][4]["status"] == "pending");
  }
  fs::remove_all(dir);
}

TEST_CASE("a failing stage is named, recorded and leaves earlier stages reusable") {
  set_log_level(LogLevel::kQuiet);
  const fs::path dir = scratch("fail");
  const fs::path corpus_path = write_corpus(dir, 60);
  ConfigSources s = no_env();
  s.flags = tiny_flags(corpus_path, dir / "run");
  s.flags.emplace_back("augment.lexicon", (dir / "missing.tsv").string());
  const PipelineConfig cfg = load_config(s);
  const std::string msg = message_of([&] { run_pipeline(cfg); });
  CHECK(msg.find("augment") != std::string::npos);
  const Json m = read_manifest(cfg.run_dir);
  CHECK(m["stages"][0]["status"] == "done");
  CHECK(m["stages"][1]["status"] == "failed");
  CHECK_FALSE(fs::exists(cfg.run_dir / ".lock"));

  s.flags.pop_back();
  const RunResult fixed = run_pipeline(load_config(s), RunOptions{std::string("augment")});
  REQUIRE(fixed.stages.size() == 2);
  CHECK(fixed.stages[0].reused);
  CHECK_FALSE(fixed.stages[1].reused);

  ConfigSources missing = no_env();
  missing.flags = tiny_flags(dir / "nope.jsonl", dir / "run2");
  CHECK(kind_of([&] { run_pipeline(load_config(missing)); }) == ErrorKind::kData);
  fs::remove_all(dir);
}
