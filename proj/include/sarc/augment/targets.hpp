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

#include <cstdint>
#include <string>
#include <vector>

#include "sarc/augment/plan.hpp"

namespace sarc::augment {

// High-frequency function characters never offered for replacement.
bool is_stop_character(char32_t c);
bool is_punctuation(char32_t c);
// Ideographs and letters; digits, spaces and symbols are not content.
bool is_content_character(char32_t c);

// Left-to-right maximal match against `words` (longest first), falling back
// to single content characters. Returns every eligible span in text order.
std::vector<Span> eligible_spans(const std::string& text,
                                 const std::vector<std::u32string>& words);

// Up to k eligible spans drawn without replacement, returned sorted.
std::vector<Span> select_targets(const std::string& text, std::size_t k,
                                 std::uint64_t seed,
                                 const std::vector<std::u32string>& words = {});

}  // namespace sarc::augment
