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

#include "sarc/harness/metrics.hpp"

#include <cstdio>

#include "sarc/common/error.hpp"

namespace sarc::harness {

namespace {

ClassMetrics class_metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassMetrics m;
  m.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  const double s = m.precision + m.recall;
  m.f1 = s > 0.0 ? 2.0 * m.precision * m.recall / s : 0.0;
  return m;
}

Json class_json(const ClassMetrics& c) {
  return Json{{"precision", c.precision}, {"recall", c.recall}, {"f1", c.f1}};
}

ClassMetrics class_from(const Json& j) {
  return ClassMetrics{j.at("precision").get<double>(), j.at("recall").get<double>(),
                      j.at("f1").get<double>()};
}

std::string fmt(double v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

MetricsReport compute_metrics(const std::vector<corpus::Label>& predictions,
                              const std::vector<corpus::Label>& golds) {
  if (predictions.size() != golds.size()) {
    throw data_error("prediction and gold lengths differ");
  }
  if (golds.empty()) throw data_error("cannot score an empty prediction set");
  MetricsReport r;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (golds[i] == corpus::Label::kAmbiguous || predictions[i] == corpus::Label::kAmbiguous) {
      throw data_error("metrics require binary labels");
    }
    const bool gold_s = golds[i] == corpus::Label::kSarcastic;
    const bool pred_s = predictions[i] == corpus::Label::kSarcastic;
    if (gold_s && pred_s) ++r.tp;
    else if (!gold_s && pred_s) ++r.fp;
    else if (gold_s) ++r.fn;
    else ++r.tn;
  }
  r.accuracy = static_cast<double>(r.tp + r.tn) / static_cast<double>(golds.size());
  r.sarcastic = class_metrics(r.tp, r.fp, r.fn);
  r.non_sarcastic = class_metrics(r.tn, r.fn, r.fp);
  return r;
}

Json MetricsReport::to_json() const {
  return Json{{"accuracy", accuracy},
              {"non_sarcastic", class_json(non_sarcastic)},
              {"sarcastic", class_json(sarcastic)},
              {"confusion", {{"tp", tp}, {"fp", fp}, {"tn", tn}, {"fn", fn}}}};
}

MetricsReport MetricsReport::from_json(const Json& j) {
  MetricsReport r;
  r.accuracy = j.at("accuracy").get<double>();
  r.non_sarcastic = class_from(j.at("non_sarcastic"));
  r.sarcastic = class_from(j.at("sarcastic"));
  const Json& c = j.at("confusion");
  r.tp = c.at("tp").get<std::size_t>();
  r.fp = c.at("fp").get<std::size_t>();
  r.tn = c.at("tn").get<std::size_t>();
  r.fn = c.at("fn").get<std::size_t>();
  return r;
}

std::string table_header() {
  return "| Model | Acc. | Non-sarcastic Pre. | Non-sarcastic Rec. | Non-sarcastic F1 "
         "| Sarcastic Pre. | Sarcastic Rec. | Sarcastic F1 |\n"
         "|---|---|---|---|---|---|---|---|";
}

std::string table_row(const std::string& model, const MetricsReport& m) {
  return "| " + model + " | " + fmt(m.accuracy) + " | " + fmt(m.non_sarcastic.precision) +
         " | " + fmt(m.non_sarcastic.recall) + " | " + fmt(m.non_sarcastic.f1) + " | " +
         fmt(m.sarcastic.precision) + " | " + fmt(m.sarcastic.recall) + " | " +
         fmt(m.sarcastic.f1) + " |";
}

}  // namespace sarc::harness
