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

#include "sarc/corpus/vocab.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>

#include "sarc/common/utf8.hpp"

namespace sarc::corpus {

namespace {
constexpr std::array<const char*, Vocab::kReserved> kReservedNames = {
    "<pad>", "<sos>", "<eos>", "<unk>"};

// Line-structured characters cannot live in the one-token-per-line file.
bool storable(char32_t ch) { return ch != U'\n' && ch != U'\r' && ch != 0; }
}  // namespace

Vocab::Vocab() : tokens_(kReserved, 0) {}

int Vocab::index_of(char32_t ch) const {
  auto it = index_.find(ch);
  return it == index_.end() ? kUnk : it->second;
}

std::string Vocab::token(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= tokens_.size()) {
    throw data_error("token index out of range: " + std::to_string(index));
  }
  if (index < kReserved) return kReservedNames[index];
  return utf8::encode(tokens_[index]);
}

char32_t Vocab::character(int index) const {
  if (index < kReserved || static_cast<std::size_t>(index) >= tokens_.size()) {
    return 0;
  }
  return tokens_[index];
}

void Vocab::add(char32_t ch) {
  if (!storable(ch) || index_.count(ch)) return;
  index_[ch] = static_cast<int>(tokens_.size());
  tokens_.push_back(ch);
}

void Vocab::save(const std::filesystem::path& path) const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    out += token(static_cast<int>(i));
    out += '\n';
  }
  write_text_atomic(path, out);
}

Vocab Vocab::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open vocabulary " + path.string());
  Vocab v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    if (lineno < kReserved) {
      if (line != kReservedNames[lineno]) {
        throw data_error(path.string() + ":" + std::to_string(lineno + 1) +
                         ": expected reserved token " + kReservedNames[lineno]);
      }
    } else {
      const auto cps = utf8::decode(line);
      if (cps.size() != 1) {
        throw data_error(path.string() + ":" + std::to_string(lineno + 1) +
                         ": expected exactly one character");
      }
      if (v.contains(cps[0])) {
        throw data_error(path.string() + ":" + std::to_string(lineno + 1) +
                         ": duplicate token");
      }
      v.add(cps[0]);
    }
    ++lineno;
  }
  if (lineno < kReserved) throw data_error("vocabulary file too short: " + path.string());
  return v;
}

Vocab build_vocab(const std::vector<CommentRecord>& records, int min_freq) {
  if (records.empty()) throw data_error("empty corpus");
  if (min_freq < 1) throw config_error("min_freq must be >= 1");
  std::map<char32_t, long> counts;
  for (const auto& r : records) {
    for (char32_t ch : utf8::decode(r.text)) ++counts[ch];
    if (r.context) {
      for (char32_t ch : utf8::decode(*r.context)) ++counts[ch];
    }
  }
  std::vector<std::pair<char32_t, long>> kept;
  for (const auto& [ch, n] : counts) {
    if (n >= min_freq && storable(ch)) kept.emplace_back(ch, n);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  Vocab v;
  for (const auto& [ch, n] : kept) v.add(ch);
  return v;
}

}  // namespace sarc::corpus
