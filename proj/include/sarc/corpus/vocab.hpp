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
#include <string>
#include <unordered_map>
#include <vector>

#include "sarc/corpus/record.hpp"

namespace sarc::corpus {

// Character-level vocabulary. Indices 0..3 are PAD, SOS, EOS, UNK; corpus
// characters follow in descending frequency, ties by code point.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kSos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;
  static constexpr int kReserved = 4;

  Vocab();

  std::size_t size() const { return tokens_.size(); }
  int index_of(char32_t ch) const;  // kUnk when absent
  bool contains(char32_t ch) const { return index_.count(ch) != 0; }
  // Reserved indices render as <pad>, <sos>, <eos>, <unk>.
  std::string token(int index) const;
  char32_t character(int index) const;  // 0 for reserved indices

  void add(char32_t ch);

  // One token per line, line number = index.
  void save(const std::filesystem::path& path) const;
  static Vocab load(const std::filesystem::path& path);

 private:
  std::vector<char32_t> tokens_;  // reserved slots hold 0
  std::unordered_map<char32_t, int> index_;
};

Vocab build_vocab(const std::vector<CommentRecord>& records, int min_freq);

}  // namespace sarc::corpus
