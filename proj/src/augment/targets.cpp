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

#include "sarc/augment/targets.hpp"

#include <algorithm>
#include <string_view>

#include "sarc/common/error.hpp"
#include "sarc/common/rng.hpp"
#include "sarc/common/utf8.hpp"

namespace sarc::augment {

bool is_stop_character(char32_t c) {
  static const std::u32string kStop =
      U"的了是在我你他她它们这那就都也还和与或但而着过吗呢吧啊呀哦嘛么很太又被把让给对从向"
      U"个一不没有之其及以于为所得地";
  return kStop.find(c) != std::u32string::npos;
}

bool is_punctuation(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  return (c >= 0x2000 && c <= 0x206F) ||  // general punctuation
         (c >= 0x3000 && c <= 0x303F) ||  // CJK symbols and punctuation
         (c >= 0xFE30 && c <= 0xFE4F) ||  // CJK compatibility forms
         (c >= 0xFF01 && c <= 0xFF0F) || (c >= 0xFF1A && c <= 0xFF20) ||
         (c >= 0xFF3B && c <= 0xFF40) || (c >= 0xFF5B && c <= 0xFF65);
}

bool is_content_character(char32_t c) {
  if (is_punctuation(c) || is_stop_character(c)) return false;
  const bool ideograph = (c >= 0x4E00 && c <= 0x9FFF) || (c >= 0x3400 && c <= 0x4DBF) ||
                         (c >= 0x20000 && c <= 0x2A6DF);
  const bool latin = (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
  return ideograph || latin;
}

std::vector<Span> eligible_spans(const std::string& text,
                                 const std::vector<std::u32string>& words) {
  const std::u32string t = utf8::decode(text);
  std::size_t longest = 1;
  for (const auto& w : words) longest = std::max(longest, w.size());
  std::vector<Span> out;
  std::size_t i = 0;
  while (i < t.size()) {
    std::size_t matched = 0;
    for (std::size_t len = std::min(longest, t.size() - i); len >= 2; --len) {
      const std::u32string_view piece(t.data() + i, len);
      if (std::find(words.begin(), words.end(), piece) != words.end()) {
        matched = len;
        break;
      }
    }
    if (matched == 0 && is_content_character(t[i])) matched = 1;
    if (matched > 0) {
      out.push_back({i, i + matched, utf8::encode(std::u32string_view(t.data() + i, matched))});
      i += matched;
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<Span> select_targets(const std::string& text, std::size_t k,
                                 std::uint64_t seed,
                                 const std::vector<std::u32string>& words) {
  if (k == 0) throw config_error("select_targets: k must be at least 1");
  std::vector<Span> spans = eligible_spans(text, words);
  if (spans.size() <= k) return spans;
  Rng rng = Rng::substream(seed, "augment.targets");
  rng.shuffle(spans);
  spans.resize(k);
  std::sort(spans.begin(), spans.end(),
            [](const Span& a, const Span& b) { return a.start < b.start; });
  return spans;
}

}  // namespace sarc::augment
