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

// Acceptance checks. Prints one PASS/FAIL line per criterion with the
// measured values; exits non-zero when any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.hpp"
#include "sarc/augment/augmenter.hpp"
#include "sarc/augment/targets.hpp"
#include "sarc/behavior/trainer.hpp"
#include "sarc/common/log.hpp"
#include "sarc/common/utf8.hpp"
#include "sarc/corpus/dataset_io.hpp"
#include "sarc/corpus/split.hpp"
#include "sarc/corpus/synthetic.hpp"
#include "sarc/corpus/vocab.hpp"
#include "sarc/detector/trainer.hpp"
#include "sarc/gan/gradient_penalty.hpp"
#include "sarc/gan/losses.hpp"
#include "sarc/gan/trainer.hpp"
#include "sarc/harness/ablation.hpp"
#include "sarc/harness/metrics.hpp"
#include "sarc/harness/noise.hpp"
#include "sarc/harness/sweep.hpp"
#include "sarc/pipeline/pipeline.hpp"

using namespace sarc;
using corpus::CommentRecord;
using corpus::Label;
using nn::Matrix;
using nn::Tensor;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double scale = 1.0) {
  Matrix m(r, c);
  for (auto& v : m.values()) v = scale * rng.normal();
  return m;
}

Matrix conditions(std::size_t batch) {
  Matrix f(batch, corpus::kConditionWidth);
  for (std::size_t i = 0; i < batch; ++i) {
    const auto c = corpus::encode_condition(static_cast<Label>(i % 2),
                                            static_cast<corpus::Topic>(i % 5),
                                            static_cast<corpus::Hierarchy>((i / 2) % 2));
    std::copy(c.values.begin(), c.values.end(), f.row(i).begin());
  }
  return f;
}

double log_sum_exp(const std::vector<double>& v) {
  double m = -INFINITY;
  for (double x : v) m = std::max(m, x);
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

gan::GeneratorConfig tiny_generator(std::size_t vocab) {
  gan::GeneratorConfig g;
  g.vocab_size = vocab;
  g.d_model = 8;
  g.layers = 1;
  g.heads = 2;
  g.ffn_hidden = 8;
  g.noise_dim = 4;
  return g;
}

gan::ConvNetConfig tiny_conv(std::size_t vocab) {
  gan::ConvNetConfig c;
  c.vocab_size = vocab;
  c.embed_dim = 4;
  c.kernel_sizes = {2, 3};
  c.channels = 2;
  return c;
}

std::vector<CommentRecord> separable_fixture() {
  corpus::SyntheticOptions o;
  o.count = 2000;
  o.seed = 1;
  o.separable = true;
  o.margin = 0.3;
  return corpus::make_synthetic_corpus(o);
}

detector::DetectorConfig fixture_detector() {
  detector::DetectorConfig c;  // small_scratch encoder
  c.lr = 1e-3;
  c.max_epochs = 20;
  c.seed = 1;
  return c;
}

// ---------------------------------------------------------------------------

Outcome gp_oracle() {
  const auto t0 = Clock::now();
  Rng rng(8);
  const std::size_t dim = 12;
  const Matrix real = random_matrix(16, dim, rng);
  const Matrix fake = random_matrix(16, dim, rng);
  const auto eps = gan::interpolation_coefficients(16, rng);
  double worst = 0.0;
  std::string got;
  for (double norm : {1.0, 3.0}) {
    std::vector<double> w(dim);
    double sq = 0.0;
    for (auto& v : w) sq += (v = rng.normal()) * v;
    for (auto& v : w) v *= norm / std::sqrt(sq);
    const double gp = gan::gradient_penalty([&](const std::vector<double>&) { return w; }, real,
                                            fake, eps);
    worst = std::max(worst, std::abs(gp - (norm - 1.0) * (norm - 1.0)));
    got += (got.empty() ? "" : ", ") + fmt("%.8f", gp);
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-5 && secs < 1.0,
          "GP for |w|=1,3: " + got + " (max err " + fmt("%.2e", worst) + ", " + fmt("%.3fs", secs) + ")"};
}

Outcome nll_oracle() {
  const std::size_t vocab = 9, steps = 8;
  gan::Generator gen(tiny_generator(vocab), 2);
  Rng rng(3);
  gan::SequenceBatch batch;
  batch.sequences = {corpus::encode_ids({4, 5, 6}, steps), corpus::encode_ids({7}, steps)};
  batch.conditions = conditions(2);
  batch.labels = {0, 1};
  const Matrix z = random_matrix(2, 4, rng);
  const double loss = gan::pretrain_loss(gen, batch, z).item();

  // Each sequence decoded on its own, log-probabilities summed by hand.
  nn::NoGradGuard ng;
  const Tensor mem = gen.project_memory(Tensor::constant(z), Tensor::constant(batch.conditions));
  double total = 0.0;
  for (std::size_t s = 0; s < 2; ++s) {
    const auto& ids = batch.sequences[s].ids;
    const Matrix memory(1, 8, std::vector<double>(mem.value().row(s).begin(), mem.value().row(s).end()));
    const Matrix lg = gen.logits(std::vector<int>(ids.begin(), ids.end() - 1), 1, steps - 1,
                                 Tensor::constant(memory))
                          .value();
    for (std::size_t t = 0; t + 1 < steps; ++t) {
      if (ids[t + 1] == corpus::Vocab::kPad) continue;
      std::vector<double> row(lg.row(t).begin(), lg.row(t).end());
      total -= row[ids[t + 1]] - log_sum_exp(row);
    }
  }
  const double oracle = total / 2.0;

  const auto targets = gan::next_token_targets(batch.sequences);
  Matrix logits = random_matrix(targets.size(), vocab, rng);
  const double base = gan::masked_nll(Tensor::constant(logits), targets, 2).item();
  for (std::size_t r = 0; r < targets.size(); ++r) {
    if (targets[r] >= 0) continue;
    for (auto& v : logits.row(r)) v += 50.0 * rng.normal();
  }
  const double perturbed = gan::masked_nll(Tensor::constant(logits), targets, 2).item();
  const double err = std::abs(loss - oracle), shift = std::abs(perturbed - base);
  return {err < 1e-6 && shift < 1e-7,
          "loss " + fmt("%.10f", loss) + " vs hand-rolled " + fmt("%.10f", oracle) + " (err " +
              fmt("%.1e", err) + "), padding shift " + fmt("%.1e", shift)};
}

Outcome finite_differences() {
  const auto t0 = Clock::now();
  std::vector<std::pair<std::string, testing::GradCheckResult>> results;
  std::size_t largest = 0;

  {  // GAN losses
    const std::size_t vocab = 7, batch = 2, steps = 6;
    gan::Generator gen(tiny_generator(vocab), 31);
    gan::Critic critic(tiny_conv(vocab), 32);
    gan::Classifier cls(tiny_conv(vocab), 33);
    largest = std::max({largest, gen.params().scalar_count(), critic.params().scalar_count(),
                        cls.params().scalar_count()});
    Rng rng(34);
    const Matrix z = random_matrix(batch, 4, rng);
    const Matrix f = conditions(batch);
    const std::vector<int> labels = {1, 0};
    gan::SequenceBatch real;
    real.sequences = {corpus::encode_ids({4, 5, 6}, steps), corpus::encode_ids({6, 4}, steps)};
    real.conditions = f;
    real.labels = labels;
    std::vector<corpus::TokenSequence> fakes;
    for (const auto& g : gen.generate(z, f, steps, gan::DecodeMode::kSample, 4)) {
      fakes.push_back(g.sequence);
    }
    const Matrix soft =
        gen.soft_sequence(fakes, gen.project_memory(Tensor::constant(z), Tensor::constant(f)))
            .value();
    results.emplace_back("pretrain NLL", testing::gradcheck(gen.params().items(), [&] {
                           return gan::pretrain_loss(gen, real, z);
                         }));
    results.emplace_back("critic loss + GP", testing::gradcheck(critic.params().items(), [&] {
                           return gan::discriminator_loss(critic, critic.embed_ids(real.flat_ids()),
                                                          critic.embed_soft(Tensor::constant(soft)),
                                                          f, batch, steps, 10.0, {0.3, 0.8})
                               .total;
                         }));
    results.emplace_back("classifier loss", testing::gradcheck(cls.params().items(), [&] {
                           return gan::classifier_loss(cls, cls.embed_ids(real.flat_ids()), f,
                                                       labels, cls.embed_soft(Tensor::constant(soft)),
                                                       f, labels, steps);
                         }));
    results.emplace_back("generator loss", testing::gradcheck(gen.params().items(), [&] {
                           const Tensor mem =
                               gen.project_memory(Tensor::constant(z), Tensor::constant(f));
                           return gan::generator_loss(critic, cls, gen.soft_sequence(fakes, mem), f,
                                                      labels, steps, 0.7)
                               .total;
                         }));
  }
  {  // behavior GAN
    behavior::BehaviorGanConfig cfg;
    cfg.content_dim = 2;
    cfg.modality_hidden = 3;
    cfg.hidden = 4;
    cfg.noise_dim = 2;
    cfg.disc_hidden = 4;
    behavior::BehaviorGenerator gen(cfg, 3);
    behavior::BehaviorDiscriminator disc(cfg, 4);
    Rng rng(9);
    const Tensor pe = Tensor::constant(random_matrix(4, cfg.basic_width(), rng));
    const Tensor z = Tensor::constant(random_matrix(4, cfg.noise_dim, rng));
    Matrix rbm(4, behavior::kBehaviorWidth);
    for (auto& v : rbm.values()) v = 0.1 + 0.8 * rng.uniform();
    auto all = gen.params().items();
    for (const auto& kv : disc.params().items()) all.push_back(kv);
    largest = std::max(largest, gen.params().scalar_count() + disc.params().scalar_count());
    results.emplace_back("behavior L_G", testing::gradcheck(all, [&] {
                           return behavior::generator_loss(disc, pe, gen(pe, z), rbm, 0.4).l_g;
                         }));
    results.emplace_back("behavior L_D", testing::gradcheck(all, [&] {
                           return behavior::discriminator_loss(disc, pe, Tensor::constant(rbm),
                                                               gen(pe, z), {1, 2, 3, 0})
                               .l_d;
                         }));
  }
  {  // detector BCE
    corpus::SyntheticOptions o;
    o.count = 6;
    o.seed = 5;
    const auto records = corpus::make_synthetic_corpus(o);
    detector::DetectorConfig c;
    c.encoder.layers = 1;
    c.encoder.heads = 2;
    c.encoder.d = 4;
    c.encoder.ffn_hidden = 6;
    c.encoder.t_max = 10;
    c.m = 3;
    auto det = detector::make_detector(c, records);
    std::vector<double> y;
    for (const auto& r : records) y.push_back(r.label == Label::kSarcastic ? 1.0 : 0.0);
    auto params = det->fusion_params().items();
    std::size_t count = det->fusion_params().scalar_count();
    for (const auto& kv : det->encoder().params().items()) {
      if (kv.first == "det.encoder.embed") continue;
      params.push_back(kv);
      count += kv.second.value().size();
    }
    largest = std::max(largest, count);
    results.emplace_back("detector BCE", testing::gradcheck(params, [&] {
                           return nn::bce_with_logits(det->forward(records).logits, y);
                         }));
  }
  double worst = 0.0;
  std::string names;
  for (const auto& [name, r] : results) {
    worst = std::max(worst, r.max_rel_error);
    if (r.max_rel_error >= 1e-3) names += " " + name + ": " + r.worst;
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-3 && largest <= 1000 && secs < 120.0,
          std::to_string(results.size()) + " losses, max rel err " + fmt("%.2e", worst) +
              ", largest config " + std::to_string(largest) + " params, " + fmt("%.1fs", secs) +
              names};
}

Outcome metrics_oracle() {
  Rng rng(17);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(60);
    std::vector<Label> p(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = rng.bernoulli(0.5) ? Label::kSarcastic : Label::kNonSarcastic;
      g[i] = rng.bernoulli(0.5) ? Label::kSarcastic : Label::kNonSarcastic;
    }
    long c[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < n; ++i) ++c[static_cast<int>(g[i])][static_cast<int>(p[i])];
    auto ratio = [](long a, long b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
    auto f1 = [](double pr, double rc) { return pr + rc > 0 ? 2 * pr * rc / (pr + rc) : 0.0; };
    const double ps = ratio(c[0][0], c[0][0] + c[1][0]), rs = ratio(c[0][0], c[0][0] + c[0][1]);
    const double pn = ratio(c[1][1], c[1][1] + c[0][1]), rn = ratio(c[1][1], c[1][1] + c[1][0]);
    const auto m = harness::compute_metrics(p, g);
    const bool same = m.tp == static_cast<std::size_t>(c[0][0]) &&
                      m.fn == static_cast<std::size_t>(c[0][1]) &&
                      m.fp == static_cast<std::size_t>(c[1][0]) &&
                      m.tn == static_cast<std::size_t>(c[1][1]) &&
                      m.accuracy == ratio(c[0][0] + c[1][1], static_cast<long>(n)) &&
                      m.sarcastic.precision == ps && m.sarcastic.recall == rs &&
                      m.sarcastic.f1 == f1(ps, rs) && m.non_sarcastic.precision == pn &&
                      m.non_sarcastic.recall == rn && m.non_sarcastic.f1 == f1(pn, rn);
    mismatches += !same;
  }
  const Label S = Label::kSarcastic, N = Label::kNonSarcastic;
  const double hand = harness::compute_metrics({S, N, N, N}, {S, S, N, N}).sarcastic.f1;
  return {mismatches == 0 && std::abs(hand - 2.0 / 3.0) < 1e-4,
          std::to_string(mismatches) + "/1000 mismatches, hand case sarcastic F1 " +
              fmt("%.4f", hand)};
}

Outcome noise_statistics() {
  std::vector<Label> labels(20000);
  Rng rng(3);
  for (auto& l : labels) l = rng.bernoulli(0.5) ? Label::kSarcastic : Label::kNonSarcastic;
  const auto q = harness::inject_label_noise(labels, 0.25, 9);
  const auto again = harness::inject_label_noise(labels, 0.25, 9);
  const auto zero = harness::inject_label_noise(labels, 0.0, 9);
  const long flips = static_cast<long>(q.flip_count());
  const bool ok = std::abs(flips - 5000) <= 245 && zero.labels == labels &&
                  zero.flip_count() == 0 && again.flipped == q.flipped;
  return {ok, "flips " + std::to_string(flips) + " (5000 +/- 245), p=0 identity " +
                  (zero.labels == labels ? "yes" : "no") + ", mask reproducible " +
                  (again.flipped == q.flipped ? "yes" : "no")};
}

struct FixtureRun {
  double val_f1 = 0.0;
  double test_f1 = 0.0;
  std::size_t epochs = 0;
  double seconds = 0.0;
};

FixtureRun train_on_fixture(const corpus::DatasetSplit& split, const detector::DetectorConfig& c) {
  const auto t0 = Clock::now();
  auto det = detector::make_detector(c, split.train);
  const auto h = detector::train_detector(*det, split.train, split.val);
  FixtureRun r;
  r.val_f1 = h.best_f1;
  r.test_f1 = detector::evaluate(*det, split.test).sarcastic.f1;
  r.epochs = h.epochs.size();
  r.seconds = seconds_since(t0);
  return r;
}

Outcome separability(const FixtureRun& full) {
  return {full.val_f1 >= 0.99 && full.epochs <= 20 && full.seconds < 300.0,
          "validation F1 " + fmt("%.4f", full.val_f1) + " (test " + fmt("%.4f", full.test_f1) +
              ") after " + std::to_string(full.epochs) + " epochs, " + fmt("%.1fs", full.seconds)};
}

Outcome ablation(const corpus::DatasetSplit& split, const FixtureRun& full) {
  detector::DetectorConfig c = fixture_detector();
  c.feature_mask = harness::ablate_features(harness::all_features(), {detector::BehaviorFeature::kSR}).mask;
  const FixtureRun no_sr = train_on_fixture(split, c);
  const bool ok = std::abs(no_sr.test_f1 - 0.5) <= 0.1 && full.test_f1 >= 0.99;
  return {ok, "test F1: F " + fmt("%.4f", full.test_f1) + ", F\\SR " + fmt("%.4f", no_sr.test_f1) +
                  " (target 0.5 +/- 0.1)"};
}

Outcome noise_trend(const corpus::DatasetSplit& split) {
  const fs::path dir = fs::temp_directory_path() / ("sarc_accept_noise_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  harness::SweepSpec spec;
  spec.kind = harness::SweepKind::kNoise;
  spec.grid = {"0.05", "0.45"};
  spec.seeds = {1, 2, 3};
  spec.base = fixture_detector();
  const auto rows = harness::run_sweep(spec, split, dir);
  const auto means = harness::mean_f1_by_point(rows, "noise");
  fs::remove_all(dir);
  double lo = 0.0, hi = 0.0;
  for (const auto& [point, f1] : means) (point == "0.05" ? lo : hi) = f1;
  return {hi < lo, "mean F1 over 3 seeds: p=0.05 " + fmt("%.4f", lo) + ", p=0.45 " + fmt("%.4f", hi)};
}

Outcome gan_smoke() {
  const auto t0 = Clock::now();
  corpus::SyntheticOptions o;
  o.count = 200;
  o.seed = 4;
  const auto records = corpus::make_synthetic_corpus(o);
  const auto vocab = corpus::build_vocab(records, 1);
  gan::GanConfig cfg;  // default model sizes
  cfg.generator.vocab_size = cfg.critic.vocab_size = cfg.classifier.vocab_size = vocab.size();
  cfg.train.t_max = 32;
  gan::GanModel model(cfg);
  bool finite = true;
  std::size_t adversarial = 0;
  gan::train_gan(model, records, vocab, {1, 50}, [&](const std::string& phase, std::size_t, double loss) {
    finite = finite && std::isfinite(loss);
    adversarial += phase == "adversarial";
  });
  // Re-check every loss component on one more step.
  const auto report = model.adversarial_step(gan::make_batch(
      std::vector<CommentRecord>(records.begin(), records.begin() + 32), vocab, cfg.train.t_max));
  for (double v : {report.l_d, report.l_g, report.l_c, report.gp, report.e_real, report.e_fake}) {
    finite = finite && std::isfinite(v);
  }

  std::size_t bad_format = 0, sequences = 0;
  double worst_norm = 0.0;
  const auto samples = model.sample(conditions(64), gan::DecodeMode::kSample, 7);
  for (const auto& s : samples) {
    ++sequences;
    const auto& ids = s.sequence.ids;
    const long eos = std::count(ids.begin(), ids.end(), corpus::Vocab::kEos);
    bool ok = ids.front() == corpus::Vocab::kSos && eos <= 1 && s.sequence.check(vocab.size()).empty();
    for (int id : ids) ok = ok && id >= 0 && static_cast<std::size_t>(id) < vocab.size();
    bad_format += !ok;
    for (const auto& lp : s.log_probs) {
      double mass = 0.0;
      for (double v : lp) mass += std::exp(v);
      worst_norm = std::max(worst_norm, std::abs(mass - 1.0));
    }
  }
  const double secs = seconds_since(t0);
  return {finite && adversarial == 50 && bad_format == 0 && worst_norm < 1e-5 && secs < 300.0,
          std::to_string(adversarial) + " adversarial steps, losses finite " +
              (finite ? "yes" : "no") + ", " + std::to_string(bad_format) + "/" +
              std::to_string(sequences) + " malformed, max |sum p - 1| " + fmt("%.1e", worst_norm) +
              ", " + fmt("%.1fs", secs)};
}

Outcome behavior_ranges() {
  corpus::SyntheticOptions o;
  o.count = 1000;
  o.seed = 6;
  auto records = corpus::make_synthetic_corpus(o);
  const auto vocab = corpus::build_vocab(records, 1);
  Rng rng(6);
  std::vector<corpus::UserBehavior> real;
  for (const auto& r : records) real.push_back(*r.behavior);
  behavior::BehaviorGanConfig cfg;
  cfg.epochs = 5;
  behavior::BehaviorModel model(cfg,
                                behavior::ContentEncoder(vocab, random_matrix(vocab.size(), cfg.content_dim, rng), 32),
                                behavior::BehaviorNormalizer::fit(real));
  behavior::train_behavior_gan(model, records);
  const Matrix out = model.generate(records);
  std::size_t violations = 0;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    double topic = 0.0;
    bool ok = true;
    for (std::size_t j = 0; j < behavior::kBehaviorWidth; ++j) {
      ok = ok && out(i, j) >= 0.0 && out(i, j) <= 1.0;
      if (j >= behavior::kTopicCol && j < behavior::kSarcasmCol) topic += out(i, j);
    }
    violations += !(ok && std::abs(topic - 1.0) <= 1e-6);
  }

  behavior::BehaviorGenerator zero(cfg, 5);
  for (auto& [name, p] : zero.params().items()) {
    Tensor t = p;
    t.mutable_value().fill(0.0);
  }
  const Matrix z = zero(Tensor::constant(random_matrix(8, cfg.basic_width(), rng, 3.0)),
                        Tensor::constant(random_matrix(8, cfg.noise_dim, rng)))
                       .value();
  double worst = 0.0;
  for (std::size_t i = 0; i < z.rows(); ++i) {
    for (std::size_t j = 0; j < behavior::kBehaviorWidth; ++j) {
      const bool topic = j >= behavior::kTopicCol && j < behavior::kSarcasmCol;
      worst = std::max(worst, std::abs(z(i, j) - (topic ? 0.2 : 0.5)));
    }
  }
  return {out.rows() == 1000 && violations == 0 && worst < 1e-12,
          std::to_string(violations) + "/" + std::to_string(out.rows()) +
              " vectors violate ranges, zero-weight max deviation " + fmt("%.1e", worst)};
}

Outcome augmentation_invariants() {
  corpus::SyntheticOptions o;
  o.count = 600;
  o.seed = 12;
  const auto records = corpus::make_synthetic_corpus(o);
  const augment::MockClient client(
      augment::Lexicon::load(fs::path(SARC_ASSET_DIR) / "lexicon_zh.tsv"));
  augment::AugmentConfig cfg;
  cfg.factor = 1;
  cfg.replacements = 2;
  cfg.seed = 21;
  const auto a = augment::augment_dataset(records, client, cfg);
  const auto b = augment::augment_dataset(records, client, cfg);

  std::map<std::string, const CommentRecord*> parents;
  for (const auto& r : records) parents[r.id] = &r;
  std::size_t checked = 0, broken = 0;
  for (const auto& child : a.children) {
    if (checked == 500) break;
    ++checked;
    const CommentRecord& parent = *parents.at(child.parent_id);
    const auto& plan = child.plan;
    // Walk parent and child together: outside the spans every code point
    // must match; each span is replaced by the chosen word.
    const std::u32string p = utf8::decode(parent.text);
    const std::u32string c = utf8::decode(child.record.text);
    std::u32string rebuilt;
    std::size_t cur = 0;
    bool ok = plan.original == parent.text;
    for (std::size_t k = 0; k < plan.targets.size(); ++k) {
      rebuilt += p.substr(cur, plan.targets[k].start - cur);
      rebuilt += utf8::decode(plan.chosen[k]);
      ok = ok && utf8::encode(p.substr(plan.targets[k].start,
                                       plan.targets[k].end - plan.targets[k].start)) ==
                     plan.targets[k].surface;
      cur = plan.targets[k].end;
    }
    rebuilt += p.substr(cur);
    ok = ok && rebuilt == c && utf8::encode(rebuilt) == child.record.text;
    ok = ok && child.record.label == parent.label && child.record.topic == parent.topic &&
         child.record.hierarchy == parent.hierarchy && child.record.context == parent.context &&
         child.record.behavior == parent.behavior;
    broken += !ok;
  }
  const bool same = corpus::dataset_to_string(a.records) == corpus::dataset_to_string(b.records);
  return {checked == 500 && broken == 0 && same,
          std::to_string(broken) + "/" + std::to_string(checked) +
              " augmentations break invariants, seeded rerun byte-identical " + (same ? "yes" : "no")};
}

int run_command(const std::vector<std::string>& args, const fs::path& log) {
  const pid_t pid = ::fork();
  if (pid == 0) {
    if (!std::freopen(log.c_str(), "w", stderr) || !std::freopen("/dev/null", "w", stdout)) {
      std::_Exit(126);
    }
    std::vector<char*> argv;
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    ::execv(argv[0], argv.data());
    std::_Exit(127);
  }
  int status = 0;
  ::waitpid(pid, &status, 0);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome end_to_end() {
  const fs::path dir = fs::temp_directory_path() / ("sarc_accept_pipeline_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  corpus::SyntheticOptions o;
  o.count = 1000;
  o.seed = 1;
  corpus::write_dataset(dir / "seed.jsonl", corpus::make_synthetic_corpus(o));

  const auto t0 = Clock::now();
  const int rc = run_command({SARC_CLI, "pipeline", "--config",
                              (fs::path(SARC_ASSET_DIR) / "configs" / "desk.json").string(),
                              "--set", "corpus.path=" + (dir / "seed.jsonl").string(),
                              "--run-dir", (dir / "run").string()},
                             dir / "pipeline.log");
  const double secs = seconds_since(t0);
  const fs::path run = dir / "run";
  std::string detail = "exit " + std::to_string(rc) + ", " + fmt("%.0fs", secs);
  bool ok = rc == 0 && secs < 900.0;
  try {
    const Json m = pipeline::read_manifest(run);
    bool stages = m["stages"].size() == 6;
    for (std::size_t i = 0; stages && i < 6; ++i) {
      stages = m["stages"][i]["name"] == pipeline::kStageNames[i] &&
               m["stages"][i]["status"] == "done";
    }
    const std::size_t n = corpus::read_dataset(run / "data" / "with_behavior.jsonl").size();
    const std::size_t tr = corpus::read_dataset(run / "data" / "train.jsonl").size();
    const std::size_t va = corpus::read_dataset(run / "data" / "val.jsonl").size();
    const std::size_t te = corpus::read_dataset(run / "data" / "test.jsonl").size();
    const bool split = va == n / 5 && te == n / 5 && tr == n - va - te;
    const std::string report = read_text(run / "report" / "report.md");
    const bool table = report.find(harness::table_header()) != std::string::npos &&
                       report.find("| detector (F) |") != std::string::npos;
    const auto metrics = harness::MetricsReport::from_json(
        Json::parse(read_text(run / "report" / "report.json")).at("metrics"));
    ok = ok && stages && split && table;
    detail += ", 6 stages done " + std::string(stages ? "yes" : "no") + ", split " +
              std::to_string(tr) + "/" + std::to_string(va) + "/" + std::to_string(te) +
              ", report table " + (table ? "yes" : "no") + ", test acc " +
              fmt("%.4f", metrics.accuracy) + " sarcastic F1 " + fmt("%.4f", metrics.sarcastic.f1);
  } catch (const std::exception& e) {
    ok = false;
    detail += std::string(", ") + e.what();
  }
  if (ok) fs::remove_all(dir);
  else detail += " (artifacts kept in " + dir.string() + ")";
  return {ok, detail};
}

}  // namespace

int main() {
  set_log_level(LogLevel::kError);
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  %2d %-28s %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "gradient-penalty oracle", gp_oracle);
  report(2, "NLL oracle", nll_oracle);
  report(3, "finite differences", finite_differences);
  report(4, "metrics oracle", metrics_oracle);
  report(5, "noise statistics", noise_statistics);

  const auto records = separable_fixture();
  const auto split = corpus::split_dataset(records, {0.6, 0.2, 0.2}, 1);
  FixtureRun full;
  report(6, "detector separability", [&] {
    full = train_on_fixture(split, fixture_detector());
    return separability(full);
  });
  report(7, "ablation direction", [&] { return ablation(split, full); });
  report(8, "noise trend", [&] { return noise_trend(split); });
  report(9, "GAN smoke", gan_smoke);
  report(10, "behavior ranges", behavior_ranges);
  report(11, "augmentation invariants", augmentation_invariants);
  report(12, "end-to-end pipeline", end_to_end);

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
