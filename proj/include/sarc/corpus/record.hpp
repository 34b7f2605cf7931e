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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sarc/common/error.hpp"
#include "sarc/common/jsonl.hpp"

namespace sarc::corpus {

enum class Label : int { kSarcastic = 0, kNonSarcastic = 1, kAmbiguous = 2 };

enum class Topic : int {
  kLifestyle = 0,
  kPolitics,
  kEntertainment,
  kRelationships,
  kPublicIncidents,
};
inline constexpr std::size_t kTopicCount = 5;

enum class Hierarchy : int { kTopLevel = 0, kNested = 1 };
inline constexpr std::size_t kHierarchyCount = 2;

std::string_view topic_name(Topic t);
std::string_view hierarchy_name(Hierarchy h);
std::optional<Topic> parse_topic(std::string_view s);
std::optional<Hierarchy> parse_hierarchy(std::string_view s);
inline bool is_binary(Label l) { return l != Label::kAmbiguous; }
inline Label flip(Label l) {
  return l == Label::kSarcastic ? Label::kNonSarcastic : Label::kSarcastic;
}

struct UserBehavior {
  std::uint64_t comment_count = 0;
  std::array<double, kTopicCount> topic_distribution{};
  double sarcasm_rate = 0.0;
  double comment_frequency = 0.0;  // comments per day
  double reply_ratio = 0.0;

  bool operator==(const UserBehavior&) const = default;
};

struct CommentRecord {
  std::string id;
  std::string text;
  Label label = Label::kSarcastic;
  Topic topic = Topic::kLifestyle;
  Hierarchy hierarchy = Hierarchy::kTopLevel;
  std::optional<std::string> context;
  std::optional<UserBehavior> behavior;
  // Where the record came from: "seed", "gan" or "augmented".
  std::optional<std::string> provenance;
  // "real" or "generated" once a behavior block is attached.
  std::optional<std::string> behavior_source;

  bool operator==(const CommentRecord&) const = default;
};

// Annotation files may carry AMBIGUOUS labels; training files may not.
enum class ValidationMode { kTraining, kAnnotation };

struct Violation {
  std::string field;
  std::string rule;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

inline constexpr double kSimplexTolerance = 1e-6;

// Empty when the object is a well-formed record under `mode`.
std::vector<Violation> check_record(const Json& raw, ValidationMode mode);
// Parses a raw object; throws ValidationError listing every violation.
CommentRecord validate_record(const Json& raw,
                              ValidationMode mode = ValidationMode::kTraining);
Json record_to_json(const CommentRecord& record);

std::vector<Violation> check_behavior(const UserBehavior& b);

}  // namespace sarc::corpus
