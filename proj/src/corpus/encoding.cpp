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

#include "sarc/corpus/encoding.hpp"

#include "sarc/common/utf8.hpp"

namespace sarc::corpus {

std::string TokenSequence::check(std::size_t vocab_size) const {
  if (ids.size() != mask.size()) return "ids/mask length mismatch";
  if (ids.empty() || ids[0] != Vocab::kSos) return "first token is not SOS";
  if (length == 0 || length > ids.size()) return "bad length";
  int eos = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= vocab_size) {
      return "token outside vocabulary";
    }
    const bool valid = i < length;
    if (mask[i] != valid) return "mask disagrees with length";
    if (!valid && ids[i] != Vocab::kPad) return "non-PAD after length";
    if (valid && ids[i] == Vocab::kPad) return "PAD inside valid span";
    if (ids[i] == Vocab::kEos) ++eos;
  }
  if (eos > 1) return "more than one EOS";
  return {};
}

TokenSequence encode_ids(const std::vector<int>& content, std::size_t t_max) {
  if (t_max < 3) throw config_error("t_max must be >= 3");
  TokenSequence seq;
  seq.ids.assign(t_max, Vocab::kPad);
  seq.mask.assign(t_max, false);
  const std::size_t keep = std::min(content.size(), t_max - 2);
  seq.ids[0] = Vocab::kSos;
  for (std::size_t i = 0; i < keep; ++i) seq.ids[i + 1] = content[i];
  seq.ids[keep + 1] = Vocab::kEos;
  seq.length = keep + 2;
  for (std::size_t i = 0; i < seq.length; ++i) seq.mask[i] = true;
  return seq;
}

TokenSequence encode_text(const std::string& text, const Vocab& vocab,
                          std::size_t t_max) {
  std::vector<int> content;
  for (char32_t ch : utf8::decode(text)) content.push_back(vocab.index_of(ch));
  return encode_ids(content, t_max);
}

std::string decode_ids(const std::vector<int>& ids, const Vocab& vocab) {
  std::u32string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const int id = ids[i];
    if (i == 0 && id == Vocab::kSos) continue;
    if (id == Vocab::kEos || id == Vocab::kPad) break;
    if (id == Vocab::kUnk || id == Vocab::kSos) {
      out.push_back(U'�');
    } else {
      out.push_back(vocab.character(id));
    }
  }
  return utf8::encode(out);
}

std::string decode(const TokenSequence& seq, const Vocab& vocab) {
  return decode_ids(seq.ids, vocab);
}

ConditionalFeature encode_condition(Label label, Topic topic, Hierarchy hierarchy) {
  if (!is_binary(label)) throw data_error("condition requires binary label");
  ConditionalFeature f;
  f.values[static_cast<int>(label)] = 1.0;
  f.values[2 + static_cast<int>(topic)] = 1.0;
  f.values[7 + static_cast<int>(hierarchy)] = 1.0;
  return f;
}

}  // namespace sarc::corpus
