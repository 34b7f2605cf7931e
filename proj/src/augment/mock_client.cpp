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

#include "sarc/augment/client.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "sarc/augment/targets.hpp"
#include "sarc/common/jsonl.hpp"
#include "sarc/common/rng.hpp"
#include "sarc/common/utf8.hpp"

namespace sarc::augment {

std::vector<Candidate> propose(const ReplacementClient& client, const std::string& text,
                               const Span& target, corpus::Topic topic,
                               std::uint64_t seed) {
  const std::u32string t = utf8::decode(text);
  if (target.start >= target.end || target.end > t.size() ||
      utf8::encode(t.substr(target.start, target.end - target.start)) != target.surface) {
    throw data_error("propose: target span does not match the text");
  }
  const Capability cap = client.capability();
  if (t.size() > cap.max_text_length) throw data_error("propose: text exceeds client limit");
  const std::size_t limit = std::min<std::size_t>(5, cap.candidates_per_call);
  std::vector<Candidate> out;
  std::set<std::string> seen;
  for (auto& c : client.raw_candidates(text, target, topic, seed)) {
    if (out.size() == limit) break;
    const std::string w = utf8::trim(c.text);
    if (w.empty() || w == target.surface || !seen.insert(w).second) continue;
    out.push_back({w, c.score});
  }
  if (out.empty()) throw NoProposal(target.surface);
  return out;
}

Lexicon Lexicon::parse(const std::string& tsv, const std::string& origin) {
  Lexicon lex;
  std::istringstream in(tsv);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (utf8::is_blank(line) || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw data_error(origin + ":" + std::to_string(lineno) + ": expected word<TAB>candidates");
    }
    const std::string key = utf8::trim(line.substr(0, tab));
    std::vector<std::string> cands;
    std::istringstream list(line.substr(tab + 1));
    std::string c;
    while (std::getline(list, c, ',')) {
      c = utf8::trim(c);
      if (!c.empty()) cands.push_back(c);
    }
    utf8::decode(key);  // validates encoding
    if (key.empty() || cands.empty()) {
      throw data_error(origin + ":" + std::to_string(lineno) + ": empty entry");
    }
    auto& slot = lex.entries_[key];
    slot.insert(slot.end(), cands.begin(), cands.end());
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  return parse(read_text(path), path.string());
}

const std::vector<std::string>* Lexicon::find(const std::string& word,
                                              std::optional<corpus::Topic> topic) const {
  if (topic) {
    auto it = entries_.find(word + "@" + std::string(corpus::topic_name(*topic)));
    if (it != entries_.end()) return &it->second;
  }
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::u32string> Lexicon::words() const {
  std::set<std::u32string> out;
  for (const auto& [key, _] : entries_) {
    out.insert(utf8::decode(key.substr(0, key.find('@'))));
  }
  return {out.begin(), out.end()};
}

std::vector<Candidate> MockClient::raw_candidates(const std::string& text,
                                                  const Span& target, corpus::Topic topic,
                                                  std::uint64_t seed) const {
  const auto* entry = lexicon_.find(target.surface, topic);
  if (entry == nullptr) return {};
  std::vector<std::string> order = *entry;
  Rng rng = Rng::substream(seed, "augment.mock|" + text + "|" + target.surface + "|" +
                                     std::to_string(target.start));
  rng.shuffle(order);
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.push_back({order[i], 1.0 / static_cast<double>(i + 1)});
  }
  return out;
}

}  // namespace sarc::augment
