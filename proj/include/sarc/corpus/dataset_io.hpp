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
#include <vector>

#include "sarc/corpus/record.hpp"

namespace sarc::corpus {

// Reads a line-delimited dataset. Every violation in the file is collected
// and reported with its line number before throwing.
std::vector<CommentRecord> read_dataset(
    const std::filesystem::path& path,
    ValidationMode mode = ValidationMode::kTraining);
void write_dataset(const std::filesystem::path& path,
                   const std::vector<CommentRecord>& records);
std::string dataset_to_string(const std::vector<CommentRecord>& records);

}  // namespace sarc::corpus
