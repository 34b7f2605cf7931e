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

#include "sarc/corpus/record.hpp"

#include <cmath>

#include "sarc/common/utf8.hpp"

namespace sarc::corpus {

namespace {

constexpr std::array<std::string_view, kTopicCount> kTopicNames = {
    "lifestyle", "politics", "entertainment", "relationships",
    "public_incidents"};
constexpr std::array<std::string_view, kHierarchyCount> kHierarchyNames = {
    "top_level", "nested"};

constexpr std::array<std::string_view, 9> kKnownFields = {
    "id",      "text",     "label",      "topic",          "hierarchy",
    "context", "behavior", "provenance", "behavior_source"};

std::string describe(const std::vector<Violation>& vs) {
  std::string out = "invalid record:";
  for (const auto& v : vs) out += " [" + v.field + ": " + v.rule + "]";
  return out;
}

void check_behavior_json(const Json& b, std::vector<Violation>& out) {
  if (!b.is_object()) {
    out.push_back({"behavior", "must be an object or null"});
    return;
  }
  auto number = [&](const char* key) -> std::optional<double> {
    const std::string field = std::string("behavior.") + key;
    if (!b.contains(key) || b.at(key).is_null()) {
      out.push_back({field, "missing required field"});
      return std::nullopt;
    }
    if (!b.at(key).is_number()) {
      out.push_back({field, "must be a number"});
      return std::nullopt;
    }
    return b.at(key).get<double>();
  };
  if (auto cc = number("comment_count")) {
    if (*cc < 0) out.push_back({"behavior.comment_count", "must be non-negative"});
    else if (std::floor(*cc) != *cc)
      out.push_back({"behavior.comment_count", "must be an integer"});
  }
  if (auto sr = number("sarcasm_rate"); sr && (*sr < 0 || *sr > 1)) {
    out.push_back({"behavior.sarcasm_rate", "must be in [0,1]"});
  }
  if (auto cf = number("comment_frequency"); cf && *cf < 0) {
    out.push_back({"behavior.comment_frequency", "must be non-negative"});
  }
  if (auto rr = number("reply_ratio"); rr && (*rr < 0 || *rr > 1)) {
    out.push_back({"behavior.reply_ratio", "must be in [0,1]"});
  }
  if (!b.contains("topic_distribution") || b.at("topic_distribution").is_null()) {
    out.push_back({"behavior.topic_distribution", "missing required field"});
    return;
  }
  const Json& td = b.at("topic_distribution");
  if (!td.is_array() || td.size() != kTopicCount) {
    out.push_back({"behavior.topic_distribution", "must have 5 entries"});
    return;
  }
  double sum = 0.0;
  for (const auto& v : td) {
    if (!v.is_number()) {
      out.push_back({"behavior.topic_distribution", "must be numeric"});
      return;
    }
    const double x = v.get<double>();
    if (x < 0) {
      out.push_back({"behavior.topic_distribution", "must be non-negative"});
      return;
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    out.push_back({"behavior.topic_distribution", "distribution not normalized"});
  }
}

UserBehavior parse_behavior(const Json& b) {
  UserBehavior u;
  u.comment_count = static_cast<std::uint64_t>(b.at("comment_count").get<double>());
  for (std::size_t i = 0; i < kTopicCount; ++i) {
    u.topic_distribution[i] = b.at("topic_distribution")[i].get<double>();
  }
  u.sarcasm_rate = b.at("sarcasm_rate").get<double>();
  u.comment_frequency = b.at("comment_frequency").get<double>();
  u.reply_ratio = b.at("reply_ratio").get<double>();
  return u;
}

}  // namespace

std::string_view topic_name(Topic t) { return kTopicNames[static_cast<int>(t)]; }
std::string_view hierarchy_name(Hierarchy h) {
  return kHierarchyNames[static_cast<int>(h)];
}

std::optional<Topic> parse_topic(std::string_view s) {
  for (std::size_t i = 0; i < kTopicCount; ++i) {
    if (kTopicNames[i] == s) return static_cast<Topic>(i);
  }
  return std::nullopt;
}

std::optional<Hierarchy> parse_hierarchy(std::string_view s) {
  for (std::size_t i = 0; i < kHierarchyCount; ++i) {
    if (kHierarchyNames[i] == s) return static_cast<Hierarchy>(i);
  }
  return std::nullopt;
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(ErrorKind::kData, describe(violations)),
      violations_(std::move(violations)) {}

std::vector<Violation> check_behavior(const UserBehavior& b) {
  Json j = record_to_json(CommentRecord{.id = "x", .text = "x", .behavior = b});
  std::vector<Violation> out;
  check_behavior_json(j.at("behavior"), out);
  return out;
}

std::vector<Violation> check_record(const Json& raw, ValidationMode mode) {
  std::vector<Violation> out;
  if (!raw.is_object()) {
    out.push_back({"<record>", "must be an object"});
    return out;
  }
  for (const auto& [key, value] : raw.items()) {
    bool known = false;
    for (auto k : kKnownFields) known = known || k == key;
    if (!known) out.push_back({key, "unknown field"});
  }
  auto require = [&](const char* key) -> const Json* {
    if (!raw.contains(key) || raw.at(key).is_null()) {
      out.push_back({key, "missing required field"});
      return nullptr;
    }
    return &raw.at(key);
  };
  if (const Json* id = require("id"); id && !id->is_string()) {
    out.push_back({"id", "must be a string"});
  }
  if (const Json* text = require("text")) {
    if (!text->is_string()) {
      out.push_back({"text", "must be a string"});
    } else {
      const auto& s = text->get_ref<const std::string&>();
      try {
        utf8::decode(s);
        if (utf8::is_blank(s)) out.push_back({"text", "must be non-empty"});
      } catch (const Error&) {
        out.push_back({"text", "invalid utf-8"});
      }
    }
  }
  if (const Json* label = require("label")) {
    if (!label->is_number_integer()) {
      out.push_back({"label", "must be an integer"});
    } else {
      const auto l = label->get<long long>();
      if (l < 0 || l > 2) {
        out.push_back({"label", "invalid label"});
      } else if (l == 2 && mode == ValidationMode::kTraining) {
        out.push_back({"label", "ambiguous label in training data"});
      }
    }
  }
  if (const Json* topic = require("topic")) {
    if (!topic->is_string() || !parse_topic(topic->get<std::string>())) {
      out.push_back({"topic", "invalid topic"});
    }
  }
  if (const Json* h = require("hierarchy")) {
    if (!h->is_string() || !parse_hierarchy(h->get<std::string>())) {
      out.push_back({"hierarchy", "invalid hierarchy"});
    }
  }
  if (raw.contains("context") && !raw.at("context").is_null() &&
      !raw.at("context").is_string()) {
    out.push_back({"context", "must be a string or null"});
  }
  if (raw.contains("behavior") && !raw.at("behavior").is_null()) {
    check_behavior_json(raw.at("behavior"), out);
  }
  for (const char* key : {"provenance", "behavior_source"}) {
    if (raw.contains(key) && !raw.at(key).is_null() && !raw.at(key).is_string()) {
      out.push_back({key, "must be a string or null"});
    }
  }
  return out;
}

CommentRecord validate_record(const Json& raw, ValidationMode mode) {
  auto violations = check_record(raw, mode);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  CommentRecord r;
  r.id = raw.at("id").get<std::string>();
  r.text = raw.at("text").get<std::string>();
  r.label = static_cast<Label>(raw.at("label").get<int>());
  r.topic = *parse_topic(raw.at("topic").get<std::string>());
  r.hierarchy = *parse_hierarchy(raw.at("hierarchy").get<std::string>());
  if (raw.contains("context") && raw.at("context").is_string()) {
    r.context = raw.at("context").get<std::string>();
  }
  if (raw.contains("behavior") && raw.at("behavior").is_object()) {
    r.behavior = parse_behavior(raw.at("behavior"));
  }
  if (raw.contains("provenance") && raw.at("provenance").is_string()) {
    r.provenance = raw.at("provenance").get<std::string>();
  }
  if (raw.contains("behavior_source") && raw.at("behavior_source").is_string()) {
    r.behavior_source = raw.at("behavior_source").get<std::string>();
  }
  return r;
}

Json record_to_json(const CommentRecord& r) {
  Json j;
  j["id"] = r.id;
  j["text"] = r.text;
  j["label"] = static_cast<int>(r.label);
  j["topic"] = std::string(topic_name(r.topic));
  j["hierarchy"] = std::string(hierarchy_name(r.hierarchy));
  j["context"] = r.context ? Json(*r.context) : Json(nullptr);
  if (r.behavior) {
    const auto& b = *r.behavior;
    Json bj;
    bj["comment_count"] = b.comment_count;
    bj["topic_distribution"] = Json::array();
    for (double v : b.topic_distribution) bj["topic_distribution"].push_back(v);
    bj["sarcasm_rate"] = b.sarcasm_rate;
    bj["comment_frequency"] = b.comment_frequency;
    bj["reply_ratio"] = b.reply_ratio;
    j["behavior"] = std::move(bj);
  } else {
    j["behavior"] = nullptr;
  }
  if (r.provenance) j["provenance"] = *r.provenance;
  if (r.behavior_source) j["behavior_source"] = *r.behavior_source;
  return j;
}

}  // namespace sarc::corpus
