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

#include "sarc/corpus/dataset_io.hpp"

#include <unordered_set>

namespace sarc::corpus {

std::vector<CommentRecord> read_dataset(const std::filesystem::path& path,
                                        ValidationMode mode) {
  std::vector<CommentRecord> out;
  std::vector<Violation> problems;
  std::unordered_set<std::string> ids;
  for_each_jsonl(path, [&](std::size_t lineno, const Json& obj) {
    auto vs = check_record(obj, mode);
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (!vs.empty()) {
      for (auto& v : vs) problems.push_back({where + v.field, v.rule});
      return;
    }
    CommentRecord r = validate_record(obj, mode);
    if (!ids.insert(r.id).second) {
      problems.push_back({where + "id", "duplicate id " + r.id});
      return;
    }
    out.push_back(std::move(r));
  });
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return out;
}

std::string dataset_to_string(const std::vector<CommentRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += record_to_json(r).dump(-1, ' ', false);
    out += '\n';
  }
  return out;
}

void write_dataset(const std::filesystem::path& path,
                   const std::vector<CommentRecord>& records) {
  write_text_atomic(path, dataset_to_string(records));
}

}  // namespace sarc::corpus
