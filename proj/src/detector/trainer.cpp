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

#include "sarc/detector/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "sarc/common/error.hpp"
#include "sarc/common/log.hpp"
#include "sarc/common/utf8.hpp"
#include "sarc/nn/params.hpp"

namespace sarc::detector {

using corpus::CommentRecord;
using nn::Matrix;
using nn::Tensor;

namespace {

std::vector<CommentRecord> gather(const std::vector<CommentRecord>& records,
                                  const std::vector<std::size_t>& idx, std::size_t begin,
                                  std::size_t end) {
  std::vector<CommentRecord> out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) out.push_back(records[idx[i]]);
  return out;
}

void require_trainable(const std::vector<CommentRecord>& records, const char* split) {
  if (records.empty()) throw data_error(std::string(split) + " split is empty");
  for (const auto& r : records) {
    if (!corpus::is_binary(r.label)) {
      throw data_error("record " + r.id + " in the " + split + " split has a non-binary label");
    }
    if (!r.behavior) {
      throw data_error("record " + r.id + " in the " + split +
                       " split has no behavior block; run behavior-fill to synthesize one first");
    }
  }
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::unique_ptr<Detector> make_detector(const DetectorConfig& config,
                                        const std::vector<CommentRecord>& train) {
  require_trainable(train, "training");
  std::vector<corpus::UserBehavior> behaviors;
  for (const auto& r : train) behaviors.push_back(*r.behavior);
  corpus::Vocab vocab;
  if (config.encoder.mode == EncoderMode::kSmallScratch) {
    // Contexts feed the encoder too, so they contribute characters.
    std::vector<CommentRecord> texts = train;
    for (const auto& r : train) {
      if (r.context && !utf8::is_blank(*r.context)) {
        CommentRecord c = r;
        c.text = *r.context;
        texts.push_back(std::move(c));
      }
    }
    vocab = corpus::build_vocab(texts, 1);
  }
  return std::make_unique<Detector>(config, std::move(vocab),
                                    behavior::BehaviorNormalizer::fit(behaviors));
}

Json TrainHistory::to_json() const {
  Json rows = Json::array();
  for (const auto& e : epochs) {
    rows.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"val", e.val.to_json()}});
  }
  return Json{{"best_epoch", best_epoch}, {"best_val_f1", best_f1}, {"epochs", rows}};
}

TrainHistory train_detector(Detector& detector, const std::vector<CommentRecord>& train,
                            const std::vector<CommentRecord>& val,
                            const DetectorEpochFn& on_epoch) {
  require_trainable(train, "training");
  require_trainable(val, "validation");
  const DetectorConfig& cfg = detector.config();
  const auto params = detector.all_parameters();
  nn::AdamConfig adam;
  adam.lr = cfg.lr;
  nn::Adam opt(params, adam);
  Rng rng = Rng::substream(cfg.seed, "detector.batches");

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  TrainHistory history;
  std::vector<Matrix> best;
  std::size_t since_best = 0;
  bool have_best = false;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t b = 0; b < order.size(); b += cfg.batch_size) {
      const std::size_t e = std::min(order.size(), b + cfg.batch_size);
      const auto batch = gather(train, order, b, e);
      std::vector<double> targets(batch.size());
      for (std::size_t i = 0; i < batch.size(); ++i) {
        targets[i] = batch[i].label == corpus::Label::kSarcastic ? 1.0 : 0.0;
      }
      opt.zero_grad();
      const Tensor loss = nn::bce_with_logits(detector.forward(batch).logits, targets);
      const double l = loss.item();
      if (!std::isfinite(l)) throw divergence_error("detector training loss diverged");
      loss.backward();
      opt.step();
      loss_sum += l * static_cast<double>(batch.size());
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(train.size());
    rec.val = evaluate(detector, val);
    history.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);

    if (!have_best || rec.val.sarcastic.f1 > history.best_f1) {
      have_best = true;
      history.best_f1 = rec.val.sarcastic.f1;
      history.best_epoch = epoch;
      since_best = 0;
      best.clear();
      for (const auto& p : params) best.push_back(p.value());
    } else if (++since_best > cfg.patience) {
      break;
    }
  }
  for (std::size_t i = 0; cfg.restore_best && i < params.size(); ++i) {
    Tensor p = params[i];
    p.mutable_value() = best[i];
  }
  return history;
}

corpus::Label decide(double prob) {
  return prob >= 0.5 ? corpus::Label::kSarcastic : corpus::Label::kNonSarcastic;
}

std::vector<Prediction> predict(const Detector& detector, const std::vector<CommentRecord>& records,
                                std::size_t batch_size) {
  if (batch_size == 0) throw config_error("prediction batch size must be positive");
  nn::NoGradGuard ng;
  std::vector<Prediction> out;
  out.reserve(records.size());
  for (std::size_t b = 0; b < records.size(); b += batch_size) {
    const std::vector<CommentRecord> batch(
        records.begin() + static_cast<long>(b),
        records.begin() + static_cast<long>(std::min(records.size(), b + batch_size)));
    const Matrix z = detector.forward(batch).logits.value();
    for (std::size_t i = 0; i < batch.size(); ++i) {
      Prediction p;
      p.id = batch[i].id;
      p.prob = 1.0 / (1.0 + std::exp(-z(i, 0)));
      p.label = decide(p.prob);
      out.push_back(std::move(p));
    }
  }
  return out;
}

harness::MetricsReport evaluate(const Detector& detector,
                                const std::vector<CommentRecord>& records) {
  const auto preds = predict(detector, records, detector.config().batch_size);
  std::vector<corpus::Label> p, g;
  for (std::size_t i = 0; i < records.size(); ++i) {
    p.push_back(preds[i].label);
    g.push_back(records[i].label);
  }
  return harness::compute_metrics(p, g);
}

void write_predictions(const std::filesystem::path& path, const std::vector<Prediction>& preds) {
  std::string text;
  for (const auto& p : preds) {
    text += Json{{"id", p.id}, {"prob", p.prob}, {"label", static_cast<int>(p.label)}}.dump();
    text += '\n';
  }
  write_text_atomic(path, text);
}

void export_embeddings(const Detector& detector, const std::vector<CommentRecord>& records,
                       const std::filesystem::path& path) {
  const std::size_t width = detector.combined_width();
  std::string text = "id,label,prob";
  for (std::size_t j = 0; j < width; ++j) text += ",e" + std::to_string(j);
  text += '\n';
  nn::NoGradGuard ng;
  const std::size_t bs = detector.config().batch_size;
  for (std::size_t b = 0; b < records.size(); b += bs) {
    const std::vector<CommentRecord> batch(
        records.begin() + static_cast<long>(b),
        records.begin() + static_cast<long>(std::min(records.size(), b + bs)));
    const auto out = detector.forward(batch);
    const Matrix& z = out.logits.value();
    const Matrix& c = out.combined.value();
    for (std::size_t i = 0; i < batch.size(); ++i) {
      text += quote_csv(batch[i].id) + "," + std::to_string(static_cast<int>(batch[i].label)) +
              "," + num(1.0 / (1.0 + std::exp(-z(i, 0))));
      for (std::size_t j = 0; j < width; ++j) text += "," + num(c(i, j));
      text += '\n';
    }
  }
  const auto parent = path.parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent)) {
    throw io_error("cannot write embeddings: " + parent.string() + " is not a directory");
  }
  write_text_atomic(path, text);
}

Json detector_config_to_json(const DetectorConfig& c) {
  Json mask = Json::array();
  for (double v : c.feature_mask) mask.push_back(v);
  return Json{{"encoder", encoder_mode_name(c.encoder.mode)},
              {"encoder_checkpoint", c.encoder.checkpoint.string()},
              {"layers", c.encoder.layers},
              {"heads", c.encoder.heads},
              {"d", c.encoder.d},
              {"ffn_hidden", c.encoder.ffn_hidden},
              {"t_max", c.encoder.t_max},
              {"m", c.m},
              {"user_layers", c.user_layers},
              {"lr", c.lr},
              {"batch", c.batch_size},
              {"patience", c.patience},
              {"max_epochs", c.max_epochs},
              {"seed", c.seed},
              {"feature_mask", mask}};
}

DetectorConfig detector_config_from_json(const Json& j) {
  DetectorConfig c;
  c.encoder.mode = parse_encoder_mode(j.at("encoder").get<std::string>());
  c.encoder.checkpoint = j.at("encoder_checkpoint").get<std::string>();
  c.encoder.layers = j.at("layers").get<std::size_t>();
  c.encoder.heads = j.at("heads").get<std::size_t>();
  c.encoder.d = j.at("d").get<std::size_t>();
  c.encoder.ffn_hidden = j.at("ffn_hidden").get<std::size_t>();
  c.encoder.t_max = j.at("t_max").get<std::size_t>();
  c.m = j.at("m").get<std::size_t>();
  c.user_layers = j.at("user_layers").get<std::size_t>();
  c.lr = j.at("lr").get<double>();
  c.batch_size = j.at("batch").get<std::size_t>();
  c.patience = j.at("patience").get<std::size_t>();
  c.max_epochs = j.at("max_epochs").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  const auto& mask = j.at("feature_mask");
  if (mask.size() != kUserFeatureWidth) throw data_error("feature_mask must have 16 entries");
  for (std::size_t i = 0; i < kUserFeatureWidth; ++i) c.feature_mask[i] = mask[i].get<double>();
  return c;
}

void save_detector(const std::filesystem::path& dir, const Detector& detector) {
  std::filesystem::create_directories(dir);
  detector.vocab().save(dir / "vocab.txt");
  detector.encoder().params().save(dir / "encoder.bin");
  detector.fusion_params().save(dir / "fusion.bin");
  // The stored encoder is self-contained, so reloading never needs the
  // original pretrained checkpoint.
  DetectorConfig cfg = detector.config();
  cfg.encoder.mode = EncoderMode::kSmallScratch;
  cfg.encoder.checkpoint.clear();
  const Json manifest{{"format", "sarc-detector-checkpoint"},
                      {"version", 1},
                      {"config", detector_config_to_json(cfg)},
                      {"trained_encoder_mode", encoder_mode_name(detector.config().encoder.mode)},
                      {"normalizer", detector.normalizer().to_json()}};
  write_text_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::unique_ptr<Detector> load_detector(const std::filesystem::path& dir) {
  const Json manifest = Json::parse(read_text(dir / "manifest.json"), nullptr, false);
  if (manifest.is_discarded() || manifest.value("format", "") != "sarc-detector-checkpoint") {
    throw data_error(dir.string() + " is not a detector checkpoint");
  }
  try {
    auto det = std::make_unique<Detector>(
        detector_config_from_json(manifest.at("config")), corpus::Vocab::load(dir / "vocab.txt"),
        behavior::BehaviorNormalizer::from_json(manifest.at("normalizer")));
    det->encoder().params().load(dir / "encoder.bin");
    det->fusion_params().load(dir / "fusion.bin");
    return det;
  } catch (const Json::exception& e) {
    throw data_error(std::string("malformed detector checkpoint: ") + e.what());
  }
}

}  // namespace sarc::detector
