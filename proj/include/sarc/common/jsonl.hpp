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

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace sarc {

using Json = nlohmann::ordered_json;

// Calls `fn(line_number, object)` for each non-blank line. Parse failures
// throw a data error naming the file and 1-based line.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(std::size_t, const Json&)>& fn);

// Writes to `path.tmp` then renames, so readers never see partial files.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& contents);
std::string read_text(const std::filesystem::path& path);

}  // namespace sarc
