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

// Command-line entry point: one subcommand per pipeline step plus the full
// pipeline. Exit codes: 0 success, 2 config error, 3 data error, 4 training
// divergence.

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sarc/common/error.hpp"
#include "sarc/common/log.hpp"
#include "sarc/common/rng.hpp"
#include "sarc/corpus/dataset_io.hpp"
#include "sarc/corpus/vocab.hpp"
#include "sarc/gan/checkpoint.hpp"
#include "sarc/harness/projection.hpp"
#include "sarc/harness/sweep.hpp"
#include "sarc/pipeline/pipeline.hpp"

namespace fs = std::filesystem;
using namespace sarc;
using pipeline::PipelineConfig;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string run_dir;
  std::string log_level = "info";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON config file (nested sections or dotted keys)");
  app->add_option("--set", c.sets, "override one config key: key=value (repeatable)");
  app->add_option("--run-dir", c.run_dir, "run directory (same as --set run_dir=...)");
  app->add_option("--log-level", c.log_level, "debug, info, warn, error or quiet");
}

PipelineConfig load(const Common& c) {
  if (c.log_level == "debug") set_log_level(LogLevel::kDebug);
  else if (c.log_level == "info") set_log_level(LogLevel::kInfo);
  else if (c.log_level == "warn") set_log_level(LogLevel::kWarn);
  else if (c.log_level == "error") set_log_level(LogLevel::kError);
  else if (c.log_level == "quiet") set_log_level(LogLevel::kQuiet);
  else throw config_error("unknown log level '" + c.log_level + "'");

  pipeline::ConfigSources sources;
  if (!c.config.empty()) sources.file = fs::path(c.config);
  if (!c.run_dir.empty()) sources.flags.emplace_back("run_dir", c.run_dir);
  for (const auto& s : c.sets) sources.flags.push_back(pipeline::parse_assignment(s));
  return pipeline::load_config(sources);
}

// Relative outputs land in the run directory; anything resolving outside it
// is refused.
fs::path output(const PipelineConfig& c, const std::string& p) {
  const fs::path out = fs::path(p).is_absolute() ? fs::path(p) : c.run_dir / p;
  const fs::path root = fs::weakly_canonical(fs::absolute(c.run_dir));
  const fs::path rel = fs::weakly_canonical(fs::absolute(out)).lexically_relative(root);
  if (rel.empty() || rel == "." || *rel.begin() == "..") {
    throw config_error("output " + p + " is outside the run directory " + c.run_dir.string());
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

corpus::Label parse_label(const std::string& s) {
  const std::string v = lower(s);
  if (v == "0" || v == "sarcastic" || v == "s") return corpus::Label::kSarcastic;
  if (v == "1" || v == "non_sarcastic" || v == "non-sarcastic" || v == "n") {
    return corpus::Label::kNonSarcastic;
  }
  throw config_error("--label must be SARCASTIC (0) or NON_SARCASTIC (1), got '" + s + "'");
}

corpus::DatasetSplit read_split(const std::string& train, const std::string& val,
                                const std::string& test) {
  return {corpus::read_dataset(train), corpus::read_dataset(val), corpus::read_dataset(test)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sarcasm dataset construction and detection toolkit"};
  app.require_subcommand(1);
  app.footer(pipeline::describe_keys());

  Common common;
  std::string corpus_path, checkpoint, in, out, gan_dir, train, val, test, svg, until;
  std::string label, topic, hierarchy;
  long n = 0;
  harness::TsneConfig tsne;

  auto* gan_train = app.add_subcommand("gan-train", "pretrain and adversarially train the comment generator");
  add_common(gan_train, common);
  gan_train->add_option("--corpus", corpus_path, "training corpus (JSONL)")->required();
  gan_train->add_option("--out", out, "checkpoint directory")->default_val("gan");

  auto* generate = app.add_subcommand("generate", "generate comments from a generator checkpoint");
  add_common(generate, common);
  generate->add_option("--checkpoint", checkpoint, "generator checkpoint directory")->required();
  generate->add_option("-n,--count", n, "records to generate")->required();
  generate->add_option("--label", label, "fix the label (SARCASTIC or NON_SARCASTIC)");
  generate->add_option("--topic", topic, "fix the topic");
  generate->add_option("--hierarchy", hierarchy, "fix the hierarchy (top_level or nested)");
  generate->add_option("--out", out, "output dataset")->default_val("generated.jsonl");

  auto* augment = app.add_subcommand("augment", "word-replacement augmentation");
  add_common(augment, common);
  augment->add_option("--in", in, "input dataset")->required();
  augment->add_option("--out", out, "output dataset")->default_val("augmented.jsonl");

  auto* behavior_train = app.add_subcommand("behavior-train", "train the user behavior generator");
  add_common(behavior_train, common);
  behavior_train->add_option("--in", in, "dataset with real behavior blocks")->required();
  behavior_train->add_option("--gan", gan_dir, "generator checkpoint supplying the content encoder")
      ->required();
  behavior_train->add_option("--out", out, "checkpoint directory")->default_val("behavior");

  auto* behavior_fill = app.add_subcommand("behavior-fill", "attach generated behavior where missing");
  add_common(behavior_fill, common);
  behavior_fill->add_option("--checkpoint", checkpoint, "behavior checkpoint directory")->required();
  behavior_fill->add_option("--in", in, "input dataset")->required();
  behavior_fill->add_option("--out", out, "output dataset")->default_val("with_behavior.jsonl");

  auto* detect_train = app.add_subcommand("detect-train", "train the sarcasm detector");
  add_common(detect_train, common);
  detect_train->add_option("--train", train, "training split")->required();
  detect_train->add_option("--val", val, "validation split")->required();
  detect_train->add_option("--out", out, "checkpoint directory")->default_val("detector");

  auto* evaluate = app.add_subcommand("evaluate", "evaluate a detector on a labelled split");
  add_common(evaluate, common);
  evaluate->add_option("--checkpoint", checkpoint, "detector checkpoint directory")->required();
  evaluate->add_option("--test", test, "test split")->required();
  evaluate->add_option("--out", out, "report directory")->default_val("report");

  auto* sweep = app.add_subcommand("sweep", "noise, robustness, size or ablation sweep");
  add_common(sweep, common);
  sweep->add_option("--train", train, "training split")->required();
  sweep->add_option("--val", val, "validation split")->required();
  sweep->add_option("--test", test, "test split")->required();
  sweep->add_option("--out", out, "results directory")->default_val("sweep");

  auto* export_emb = app.add_subcommand("export-embeddings", "write fused detector vectors as CSV");
  add_common(export_emb, common);
  export_emb->add_option("--checkpoint", checkpoint, "detector checkpoint directory")->required();
  export_emb->add_option("--in", in, "dataset")->required();
  export_emb->add_option("--out", out, "CSV file")->default_val("embeddings.csv");

  auto* project = app.add_subcommand("project-2d", "t-SNE projection of exported embeddings");
  add_common(project, common);
  project->add_option("--in", in, "embedding CSV")->required();
  project->add_option("--out", out, "projection CSV")->default_val("projection.csv");
  project->add_option("--svg", svg, "scatter plot")->default_val("projection.svg");
  project->add_option("--perplexity", tsne.perplexity, "t-SNE perplexity")->default_val(30.0);
  project->add_option("--iterations", tsne.iterations, "t-SNE iterations")->default_val(1000);

  auto* run = app.add_subcommand("pipeline", "generate, augment, synthesize behaviors, split, train, evaluate");
  add_common(run, common);
  run->add_option("--until", until, "stop after this stage");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const PipelineConfig cfg = load(common);
    fs::create_directories(cfg.run_dir);

    if (*run) {
      pipeline::RunOptions opts;
      if (!until.empty()) opts.until = until;
      const auto result = pipeline::run_pipeline(cfg, opts);
      for (const auto& s : result.stages) {
        std::cout << s.name << ": " << (s.reused ? "reused" : "ran") << "\n";
      }
      if (result.metrics) {
        std::cout << pipeline::evaluation_report({{"detector (F)", *result.metrics}});
      }
      return 0;
    }

    pipeline::RunLock lock(cfg.run_dir);
    if (*gan_train) {
      const fs::path dir = output(cfg, out);
      pipeline::train_gan_into(cfg, corpus::read_dataset(corpus_path), dir);
      std::cout << "checkpoint: " << dir.string() << "\n";
    } else if (*generate) {
      if (n <= 0) throw config_error("--count must be positive");
      const fs::path dest = output(cfg, out);
      const auto model = gan::load_checkpoint(checkpoint);
      const auto vocab = corpus::Vocab::load(fs::path(checkpoint) / "vocab.txt");
      const std::uint64_t seed = cfg.gan.model.train.seed;
      Rng rng = Rng::substream(seed, "cli.generate.conditions");
      std::optional<corpus::Topic> fixed_topic;
      std::optional<corpus::Hierarchy> fixed_hierarchy;
      if (!topic.empty() && !(fixed_topic = corpus::parse_topic(lower(topic)))) {
        throw config_error("unknown --topic '" + topic + "'");
      }
      if (!hierarchy.empty() && !(fixed_hierarchy = corpus::parse_hierarchy(lower(hierarchy)))) {
        throw config_error("unknown --hierarchy '" + hierarchy + "'");
      }
      std::vector<corpus::CommentRecord> conditions(static_cast<std::size_t>(n));
      for (std::size_t i = 0; i < conditions.size(); ++i) {
        auto& c = conditions[i];
        c.label = !label.empty() ? parse_label(label)
                  : i % 2 == 0   ? corpus::Label::kSarcastic
                                 : corpus::Label::kNonSarcastic;
        c.topic = fixed_topic.value_or(static_cast<corpus::Topic>(rng.below(corpus::kTopicCount)));
        c.hierarchy = fixed_hierarchy.value_or(
            static_cast<corpus::Hierarchy>(rng.below(corpus::kHierarchyCount)));
      }
      const auto records =
          gan::generate_records(*model, vocab, conditions, mix_seed(seed, "generate"), "gan-");
      if (records.size() < conditions.size()) {
        log_warn(std::to_string(conditions.size() - records.size()) +
                 " generated comments were blank and dropped");
      }
      fs::create_directories(dest.parent_path());
      corpus::write_dataset(dest, records);
      std::cout << records.size() << " records: " << dest.string() << "\n";
    } else if (*augment) {
      const fs::path dest = output(cfg, out);
      fs::create_directories(dest.parent_path());
      fs::path skips = dest;
      skips.replace_extension(".skips.jsonl");
      const auto r = pipeline::augment_into(cfg, corpus::read_dataset(in), dest, skips,
                                            dest.parent_path());
      std::cout << r.records.size() << " records, " << r.skips.size() << " shortfalls: "
                << dest.string() << "\n";
    } else if (*behavior_train) {
      const fs::path dir = output(cfg, out);
      pipeline::train_behavior_into(cfg, corpus::read_dataset(in), gan_dir, dir);
      std::cout << "checkpoint: " << dir.string() << "\n";
    } else if (*behavior_fill) {
      const fs::path dest = output(cfg, out);
      const auto model = behavior::load_behavior_checkpoint(checkpoint);
      fs::create_directories(dest.parent_path());
      corpus::write_dataset(dest, behavior::synthesize_behaviors(corpus::read_dataset(in), *model));
      std::cout << dest.string() << "\n";
    } else if (*detect_train) {
      const fs::path dir = output(cfg, out);
      const auto h = pipeline::train_detector_into(cfg, corpus::read_dataset(train),
                                                   corpus::read_dataset(val), dir);
      std::cout << "best epoch " << h.best_epoch << ", validation F1 " << h.best_f1 << ": "
                << dir.string() << "\n";
    } else if (*evaluate) {
      const fs::path dir = output(cfg, out);
      const auto det = detector::load_detector(checkpoint);
      const auto m = pipeline::evaluate_into(*det, corpus::read_dataset(test), dir);
      std::cout << pipeline::evaluation_report({{"detector (F)", m}});
    } else if (*sweep) {
      const fs::path dir = output(cfg, out);
      const auto rows = harness::run_sweep(cfg.sweep_spec(), read_split(train, val, test), dir,
                                           [](const harness::SweepRow& r) {
                                             log_info(r.sweep + " " + r.point + " seed " +
                                                      std::to_string(r.seed) + " F1 " +
                                                      std::to_string(r.metrics.sarcastic.f1));
                                           });
      for (const auto& [point, f1] :
           harness::mean_f1_by_point(rows, harness::sweep_kind_name(cfg.sweep.kind))) {
        std::cout << point << "\t" << f1 << "\n";
      }
    } else if (*export_emb) {
      const fs::path dest = output(cfg, out);
      const auto det = detector::load_detector(checkpoint);
      fs::create_directories(dest.parent_path());
      detector::export_embeddings(*det, corpus::read_dataset(in), dest);
      std::cout << dest.string() << "\n";
    } else if (*project) {
      const fs::path dest = output(cfg, out);
      const fs::path plot = output(cfg, svg);
      tsne.seed = mix_seed(cfg.seed, "projection");
      fs::create_directories(dest.parent_path());
      harness::project_2d(in, dest, tsne, plot);
      std::cout << dest.string() << "\n";
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
