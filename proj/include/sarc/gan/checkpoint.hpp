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
#include <memory>

#include "sarc/common/jsonl.hpp"
#include "sarc/gan/trainer.hpp"

namespace sarc::gan {

Json config_to_json(const GanConfig& config);
GanConfig config_from_json(const Json& j);

// Writes <dir>/manifest.json plus one parameter blob per network. Optimizer
// moments are not persisted.
void save_checkpoint(const std::filesystem::path& dir, const GanModel& model);
std::unique_ptr<GanModel> load_checkpoint(const std::filesystem::path& dir);

}  // namespace sarc::gan
