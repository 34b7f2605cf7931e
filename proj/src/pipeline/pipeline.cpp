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

#include "sarc/pipeline/pipeline.hpp"

#include <fcntl.h>
#include <signal.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "sarc/augment/client.hpp"
#include "sarc/behavior/trainer.hpp"
#include "sarc/common/error.hpp"
#include "sarc/common/hash.hpp"
#include "sarc/common/log.hpp"
#include "sarc/corpus/dataset_io.hpp"
#include "sarc/corpus/vocab.hpp"
#include "sarc/detector/trainer.hpp"
#include "sarc/gan/checkpoint.hpp"

namespace sarc::pipeline {

namespace fs = std::filesystem;
using corpus::CommentRecord;
using corpus::Label;

RunLock::RunLock(const fs::path& run_dir) : path_(run_dir / ".lock") {
  fs::create_directories(run_dir);
  for (int attempt = 0; attempt < 2; ++attempt) {
    const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd >= 0) {
      const std::string pid = std::to_string(::getpid()) + "\n";
      const ssize_t written = ::write(fd, pid.data(), pid.size());
      ::close(fd);
      if (written != static_cast<ssize_t>(pid.size())) {
        throw io_error("cannot write lock file " + path_.string());
      }
      return;
    }
    if (errno != EEXIST) {
      throw io_error("cannot create lock file " + path_.string() + ": " + std::strerror(errno));
    }
    long owner = 0;
    std::ifstream(path_) >> owner;
    if (owner > 0 && (::kill(static_cast<pid_t>(owner), 0) == 0 || errno == EPERM)) {
      throw state_error("run directory " + run_dir.string() + " is locked by process " +
                        std::to_string(owner));
    }
    log_warn("removing stale lock left by process " + std::to_string(owner));
    fs::remove(path_);
  }
  throw state_error("could not lock run directory " + run_dir.string());
}

RunLock::~RunLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

fs::path manifest_path(const fs::path& run_dir) { return run_dir / "manifest.json"; }

Json read_manifest(const fs::path& run_dir) {
  const fs::path p = manifest_path(run_dir);
  if (!fs::exists(p)) throw state_error("no manifest in " + run_dir.string());
  try {
    return Json::parse(read_text(p));
  } catch (const Json::exception& e) {
    throw data_error(p.string() + ": " + e.what());
  }
}

std::string evaluation_report(
    const std::vector<std::pair<std::string, harness::MetricsReport>>& rows) {
  std::string out = harness::table_header() + "\n";
  for (const auto& [name, m] : rows) out += harness::table_row(name, m) + "\n";
  return out;
}

std::vector<CommentRecord> generation_conditions(const std::vector<CommentRecord>& seed_corpus,
                                                 std::size_t n, std::uint64_t seed) {
  if (seed_corpus.empty()) throw data_error("generation needs a non-empty seed corpus");
  std::vector<const CommentRecord*> by_label[2];
  for (const auto& r : seed_corpus) {
    if (corpus::is_binary(r.label)) by_label[static_cast<int>(r.label)].push_back(&r);
  }
  Rng rng = Rng::substream(seed, "pipeline.conditions");
  std::vector<CommentRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Label label = i % 2 == 0 ? Label::kSarcastic : Label::kNonSarcastic;
    const auto& pool = by_label[static_cast<int>(label)];
    const CommentRecord& src =
        pool.empty() ? seed_corpus[rng.below(seed_corpus.size())] : *pool[rng.below(pool.size())];
    CommentRecord c;
    c.label = label;
    c.topic = src.topic;
    c.hierarchy = src.hierarchy;
    c.context = src.context;
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

struct Paths {
  fs::path root;
  fs::path gan() const { return root / "gan"; }
  fs::path generated() const { return root / "data" / "generated.jsonl"; }
  fs::path augmented() const { return root / "data" / "augmented.jsonl"; }
  fs::path skips() const { return root / "augment" / "skips.jsonl"; }
  fs::path behavior() const { return root / "behavior"; }
  fs::path with_behavior() const { return root / "data" / "with_behavior.jsonl"; }
  fs::path train() const { return root / "data" / "train.jsonl"; }
  fs::path val() const { return root / "data" / "val.jsonl"; }
  fs::path test() const { return root / "data" / "test.jsonl"; }
  fs::path detector() const { return root / "detector"; }
  fs::path report_md() const { return root / "report" / "report.md"; }
  fs::path report_json() const { return root / "report" / "report.json"; }
  fs::path predictions() const { return root / "report" / "predictions.jsonl"; }
};

std::string rel(const fs::path& root, const fs::path& p) {
  return p.lexically_relative(root).generic_string();
}

// path -> hash for a file, or for every file below a directory.
void hash_into(const fs::path& root, const fs::path& p, Json& out) {
  if (fs::is_directory(p)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(p)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out[rel(root, f)] = sha256_file(f);
  } else if (fs::exists(p)) {
    out[rel(root, p)] = sha256_file(p);
  }
}

bool outputs_intact(const fs::path& root, const Json& recorded) {
  if (!recorded.is_object() || recorded.empty()) return false;
  for (const auto& [name, hash] : recorded.items()) {
    const fs::path p = root / name;
    if (!fs::is_regular_file(p) || sha256_file(p) != hash.get<std::string>()) return false;
  }
  return true;
}

std::string now_iso() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

Json section(const Json& snapshot, const std::vector<std::string>& prefixes) {
  Json out = Json::object();
  for (const auto& [k, v] : snapshot.items()) {
    for (const auto& p : prefixes) {
      if (k == p || k.rfind(p + ".", 0) == 0) out[k] = v;
    }
  }
  return out;
}

struct Stage {
  std::string name;
  Json config;                    // keys that influence the stage
  std::vector<fs::path> inputs;   // hashed into the fingerprint
  std::vector<fs::path> outputs;  // files or directories
  std::function<void()> run;
};

}  // namespace

std::unique_ptr<augment::ReplacementClient> make_replacement_client(const PipelineConfig& c,
                                                                    const fs::path& audit_dir) {
  if (c.augment.client == "remote") {
    auto rc = augment::RemoteClientConfig::from_env();
    rc.prompt_template = c.augment.prompt.empty()
                             ? asset_dir() / "prompts" / "replace_word.v1.txt"
                             : c.augment.prompt;
    fs::create_directories(audit_dir);
    rc.audit_log = audit_dir / "audit.jsonl";
    return std::make_unique<augment::RemoteClient>(rc);
  }
  return std::make_unique<augment::MockClient>(augment::Lexicon::load(
      c.augment.lexicon.empty() ? asset_dir() / "lexicon_zh.tsv" : c.augment.lexicon));
}

namespace {

// Builds `dir` beside its final location and swaps it in, so a failure
// never leaves a half-written directory behind.
void publish_dir(const fs::path& dir, const std::function<void(const fs::path&)>& write) {
  const fs::path tmp = dir.string() + ".partial";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  write(tmp);
  fs::remove_all(dir);
  fs::rename(tmp, dir);
}

}  // namespace

std::unique_ptr<gan::GanModel> train_gan_into(const PipelineConfig& c,
                                              const std::vector<CommentRecord>& records,
                                              const fs::path& out_dir) {
  if (records.empty()) throw data_error("no records to train the generator on");
  const corpus::Vocab vocab = corpus::build_vocab(records, c.corpus.min_freq);
  gan::GanConfig g = c.gan.model;
  g.generator.vocab_size = g.critic.vocab_size = g.classifier.vocab_size = vocab.size();
  auto model = std::make_unique<gan::GanModel>(g);

  std::string curve = "phase,step,loss\n";
  gan::train_gan(*model, records, vocab, c.gan.schedule,
                 [&](const std::string& phase, std::size_t step, double loss) {
                   char buf[128];
                   std::snprintf(buf, sizeof buf, "%s,%zu,%.9g\n", phase.c_str(), step, loss);
                   curve += buf;
                   if (phase == "pretrain" || step % 10 == 0) {
                     log_info("gan " + phase + " " + std::to_string(step) + " loss " +
                              std::to_string(loss));
                   }
                 });
  publish_dir(out_dir, [&](const fs::path& dir) {
    gan::save_checkpoint(dir, *model);
    vocab.save(dir / "vocab.txt");
    write_text_atomic(dir / "losses.csv", curve);
  });
  return model;
}

augment::AugmentResult augment_into(const PipelineConfig& c,
                                    const std::vector<CommentRecord>& records,
                                    const fs::path& out_file, const fs::path& skips_file,
                                    const fs::path& audit_dir) {
  const auto client = make_replacement_client(c, audit_dir);
  auto result = augment::augment_dataset(records, *client, c.augment.config);
  std::string skips;
  for (const auto& s : result.skips) {
    skips += Json{{"parent_id", s.parent_id}, {"wanted", s.wanted}, {"produced", s.produced},
                  {"reason", s.reason}}
                 .dump() +
             "\n";
  }
  fs::create_directories(skips_file.parent_path());
  write_text_atomic(skips_file, skips);
  log_info("augmented " + std::to_string(records.size()) + " -> " +
           std::to_string(result.records.size()) + " records, " +
           std::to_string(result.skips.size()) + " shortfalls");
  corpus::write_dataset(out_file, result.records);
  return result;
}

std::unique_ptr<behavior::BehaviorModel> train_behavior_into(
    const PipelineConfig& c, const std::vector<CommentRecord>& records, const fs::path& gan_dir,
    const fs::path& out_dir) {
  const auto gan_model = gan::load_checkpoint(gan_dir);
  corpus::Vocab vocab = corpus::Vocab::load(gan_dir / "vocab.txt");
  const nn::Matrix table = gan_model->classifier().embedding_table().value();
  behavior::ContentEncoder encoder(std::move(vocab), table, gan_model->config().train.t_max);

  std::vector<corpus::UserBehavior> real;
  for (const auto& r : records) {
    if (r.behavior && r.behavior_source.value_or("real") == "real") real.push_back(*r.behavior);
  }
  if (real.size() < 2) {
    throw data_error("behavior training needs at least two records with real behavior blocks");
  }
  behavior::BehaviorGanConfig b = c.behavior;
  b.content_dim = table.cols();
  auto model = std::make_unique<behavior::BehaviorModel>(
      b, std::move(encoder), behavior::BehaviorNormalizer::fit(real));
  std::string curve = "epoch,l_d,l_g,l_t,l_c\n";
  behavior::train_behavior_gan(*model, records, [&](const behavior::EpochReport& e) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.9g,%.9g\n", e.epoch, e.l_d, e.l_g, e.l_t,
                  e.l_c);
    curve += buf;
  });
  publish_dir(out_dir, [&](const fs::path& dir) {
    behavior::save_behavior_checkpoint(dir, *model);
    write_text_atomic(dir / "losses.csv", curve);
  });
  return model;
}

detector::TrainHistory train_detector_into(const PipelineConfig& c,
                                           const std::vector<CommentRecord>& train,
                                           const std::vector<CommentRecord>& val,
                                           const fs::path& out_dir) {
  auto det = detector::make_detector(c.det, train);
  const auto history =
      detector::train_detector(*det, train, val, [](const detector::EpochRecord& e) {
        log_info("detector epoch " + std::to_string(e.epoch) + " loss " +
                 std::to_string(e.train_loss) + " val F1 " + std::to_string(e.val.sarcastic.f1));
      });
  publish_dir(out_dir, [&](const fs::path& dir) {
    detector::save_detector(dir, *det);
    write_text_atomic(dir / "history.json", history.to_json().dump(2) + "\n");
  });
  return history;
}

harness::MetricsReport evaluate_into(const detector::Detector& det,
                                     const std::vector<CommentRecord>& test,
                                     const fs::path& out_dir, const std::string& note) {
  const auto preds = detector::predict(det, test);
  std::vector<Label> p, g;
  for (std::size_t i = 0; i < test.size(); ++i) {
    p.push_back(preds[i].label);
    g.push_back(test[i].label);
  }
  const auto m = harness::compute_metrics(p, g);
  fs::create_directories(out_dir);
  detector::write_predictions(out_dir / "predictions.jsonl", preds);
  const Json report{{"model", "detector"}, {"records", test.size()}, {"metrics", m.to_json()}};
  write_text_atomic(out_dir / "report.json", report.dump(2) + "\n");
  std::string md = "# Evaluation\n\n" + std::to_string(test.size()) + " test records.";
  if (!note.empty()) md += " " + note;
  md += "\n\n" + evaluation_report({{"detector (F)", m}});
  write_text_atomic(out_dir / "report.md", md);
  return m;
}

namespace {

void stage_generate(const PipelineConfig& c, const Paths& paths) {
  auto seed_corpus = corpus::read_dataset(c.corpus.path);
  if (seed_corpus.empty()) throw data_error("seed corpus " + c.corpus.path.string() + " is empty");
  for (auto& r : seed_corpus) {
    if (!r.provenance) r.provenance = "seed";
    if (r.behavior && !r.behavior_source) r.behavior_source = "real";
  }
  const auto model = train_gan_into(c, seed_corpus, paths.gan());
  const corpus::Vocab vocab = corpus::Vocab::load(paths.gan() / "vocab.txt");

  const std::uint64_t seed = c.gan.model.train.seed;
  const std::size_t n = c.gan.generate == 0 ? seed_corpus.size() : c.gan.generate;
  const auto generated = gan::generate_records(*model, vocab, generation_conditions(seed_corpus, n, seed),
                                               mix_seed(seed, "generate"), "gan-");
  std::set<std::string> ids;
  for (const auto& r : seed_corpus) ids.insert(r.id);
  for (const auto& r : generated) {
    if (!ids.insert(r.id).second) {
      throw data_error("generated id " + r.id + " collides with the seed corpus");
    }
  }
  log_info("generated " + std::to_string(generated.size()) + " of " + std::to_string(n) +
           " requested records");
  auto all = seed_corpus;
  all.insert(all.end(), generated.begin(), generated.end());
  corpus::write_dataset(paths.generated(), all);
}

void stage_augment(const PipelineConfig& c, const Paths& paths) {
  augment_into(c, corpus::read_dataset(paths.generated()), paths.augmented(), paths.skips(),
               paths.root / "augment");
}

void stage_behaviors(const PipelineConfig& c, const Paths& paths) {
  const auto records = corpus::read_dataset(paths.augmented());
  const auto model = train_behavior_into(c, records, paths.gan(), paths.behavior());
  corpus::write_dataset(paths.with_behavior(), behavior::synthesize_behaviors(records, *model));
}

void stage_split(const PipelineConfig& c, const Paths& paths) {
  const auto records = corpus::read_dataset(paths.with_behavior());
  const auto split = corpus::split_dataset(records, c.corpus.split, mix_seed(c.seed, "split"));
  corpus::write_dataset(paths.train(), split.train);
  corpus::write_dataset(paths.val(), split.val);
  corpus::write_dataset(paths.test(), split.test);
  log_info("split " + std::to_string(split.train.size()) + "/" +
           std::to_string(split.val.size()) + "/" + std::to_string(split.test.size()));
}

void stage_train(const PipelineConfig& c, const Paths& paths) {
  train_detector_into(c, corpus::read_dataset(paths.train()), corpus::read_dataset(paths.val()),
                      paths.detector());
}

harness::MetricsReport stage_evaluate(const Paths& paths) {
  const auto test = corpus::read_dataset(paths.test());
  const auto det = detector::load_detector(paths.detector());
  const std::size_t train = corpus::read_dataset(paths.train()).size();
  const std::size_t val = corpus::read_dataset(paths.val()).size();
  return evaluate_into(*det, test, paths.report_md().parent_path(),
                       "Split sizes: train " + std::to_string(train) + ", val " +
                           std::to_string(val) + ", test " + std::to_string(test.size()) + ".");
}

Json fresh_manifest(const PipelineConfig& c) {
  Json stages = Json::array();
  for (const char* name : kStageNames) stages.push_back(Json{{"name", name}, {"status", "pending"}});
  return Json{{"format", "sarc-pipeline-manifest"}, {"version", 1}, {"config", c.snapshot()},
              {"stages", stages}};
}

}  // namespace

RunResult run_pipeline(const PipelineConfig& config, const RunOptions& options) {
  config.validate();
  if (config.corpus.path.empty()) throw config_error("corpus.path must name the seed corpus");
  if (!fs::is_regular_file(config.corpus.path)) {
    throw data_error("seed corpus " + config.corpus.path.string() + " not found");
  }
  if (options.until &&
      std::find(kStageNames.begin(), kStageNames.end(), *options.until) == kStageNames.end()) {
    throw config_error("unknown stage '" + *options.until + "'");
  }

  const Paths paths{config.run_dir};
  RunLock lock(config.run_dir);
  Json manifest = fresh_manifest(config);
  if (fs::exists(manifest_path(paths.root))) {
    const Json old = read_manifest(paths.root);
    if (old.value("format", "") == "sarc-pipeline-manifest" && old.contains("stages") &&
        old["stages"].size() == kStageNames.size()) {
      manifest["stages"] = old["stages"];
    }
  }
  const auto save = [&] {
    write_text_atomic(manifest_path(paths.root), manifest.dump(2) + "\n");
  };

  const Json snap = config.snapshot();
  const fs::path lexicon =
      config.augment.lexicon.empty() ? asset_dir() / "lexicon_zh.tsv" : config.augment.lexicon;
  RunResult result;
  const std::vector<Stage> stages = {
      {"generate", section(snap, {"corpus.path", "corpus.min_freq", "gan"}),
       {config.corpus.path}, {paths.gan(), paths.generated()},
       [&] { stage_generate(config, paths); }},
      {"augment", section(snap, {"augment"}),
       config.augment.client == "mock" ? std::vector<fs::path>{paths.generated(), lexicon}
                                       : std::vector<fs::path>{paths.generated()},
       {paths.augmented(), paths.skips()}, [&] { stage_augment(config, paths); }},
      {"synthesize_behaviors", section(snap, {"behavior"}), {paths.augmented(), paths.gan()},
       {paths.behavior(), paths.with_behavior()}, [&] { stage_behaviors(config, paths); }},
      {"split", section(snap, {"seed", "corpus.val_ratio", "corpus.test_ratio"}),
       {paths.with_behavior()}, {paths.train(), paths.val(), paths.test()},
       [&] { stage_split(config, paths); }},
      {"train_detector", section(snap, {"det"}), {paths.train(), paths.val()},
       {paths.detector()}, [&] { stage_train(config, paths); }},
      {"evaluate", Json::object(), {paths.test(), paths.detector()},
       {paths.report_md(), paths.report_json(), paths.predictions()},
       [&] { result.metrics = stage_evaluate(paths); }},
  };

  for (std::size_t i = 0; i < stages.size(); ++i) {
    const Stage& st = stages[i];
    Json& entry = manifest["stages"][i];
    Json inputs = Json::object();
    for (const auto& p : st.inputs) {
      if (!fs::exists(p)) {
        const std::string msg = "stage " + st.name + " failed: missing input " + p.string();
        entry = Json{{"name", st.name}, {"status", "failed"}, {"error", msg}};
        save();
        throw data_error(msg);
      }
      if (fs::is_directory(p)) {
        hash_into(paths.root, p, inputs);
      } else {
        const std::string r = rel(paths.root, p);
        inputs[r.starts_with("..") ? p.string() : r] = sha256_file(p);
      }
    }
    const std::string fingerprint =
        sha256_hex(st.name + "\n" + st.config.dump() + "\n" + inputs.dump());

    const auto t0 = std::chrono::steady_clock::now();
    const bool reuse = entry.value("status", "") == "done" &&
                       entry.value("fingerprint", "") == fingerprint &&
                       outputs_intact(paths.root, entry.value("outputs", Json::object()));
    if (reuse) {
      log_info("stage " + st.name + ": up to date");
      if (st.name == "evaluate") {
        result.metrics = harness::MetricsReport::from_json(
            Json::parse(read_text(paths.report_json())).at("metrics"));
      }
    } else {
      log_info("stage " + st.name + ": running");
      entry = Json{{"name", st.name}, {"status", "running"}, {"fingerprint", fingerprint},
                   {"inputs", inputs}};
      save();
      try {
        st.run();
      } catch (const Error& e) {
        entry["status"] = "failed";
        entry["error"] = e.what();
        save();
        throw Error(e.kind(), "stage " + st.name + " failed: " + e.what());
      } catch (const std::exception& e) {
        entry["status"] = "failed";
        entry["error"] = e.what();
        save();
        throw data_error("stage " + st.name + " failed: " + e.what());
      }
      Json outputs = Json::object();
      for (const auto& p : st.outputs) hash_into(paths.root, p, outputs);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      entry["status"] = "done";
      entry["outputs"] = outputs;
      entry["seconds"] = secs;
      entry["finished_at"] = now_iso();
      manifest["config"] = snap;
      save();
    }
    result.stages.push_back(
        {st.name, reuse,
         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
    if (options.until && *options.until == st.name) break;
  }
  save();
  return result;
}

}  // namespace sarc::pipeline
