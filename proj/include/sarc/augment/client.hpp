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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sarc/augment/plan.hpp"
#include "sarc/common/error.hpp"
#include "sarc/corpus/record.hpp"

namespace sarc::augment {

struct Capability {
  std::size_t max_text_length = 512;  // code points
  std::size_t candidates_per_call = 5;
};

// A remote call failed after `attempts` tries. `retryable` is false for
// errors that will not go away by waiting (bad credentials, bad request).
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int status, int attempts, bool retryable,
                 std::chrono::milliseconds retry_after)
      : Error(ErrorKind::kTransport, what),
        status_(status),
        attempts_(attempts),
        retryable_(retryable),
        retry_after_(retry_after) {}
  int status() const { return status_; }
  int attempts() const { return attempts_; }
  bool retryable() const { return retryable_; }
  std::chrono::milliseconds retry_after() const { return retry_after_; }

 private:
  int status_;
  int attempts_;
  bool retryable_;
  std::chrono::milliseconds retry_after_;
};

// No usable candidate for a target.
class NoProposal : public Error {
 public:
  explicit NoProposal(const std::string& word)
      : Error(ErrorKind::kData, "no proposal"), word_(word) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

// Proposes context-fitting substitutes W' for a word W inside text T.
// Implementations must be safe to call from several threads.
class ReplacementClient {
 public:
  virtual ~ReplacementClient() = default;
  virtual Capability capability() const = 0;
  virtual bool deterministic() const = 0;
  // Words the client knows as units; used to group characters into targets.
  virtual std::vector<std::u32string> known_words() const { return {}; }
  virtual std::vector<Candidate> raw_candidates(const std::string& text, const Span& target,
                                                corpus::Topic topic,
                                                std::uint64_t seed) const = 0;
};

// Validated proposals: non-empty, distinct, never equal to W, at most
// capability().candidates_per_call (and never more than 5). Throws
// NoProposal when nothing survives.
std::vector<Candidate> propose(const ReplacementClient& client, const std::string& text,
                               const Span& target,
                               corpus::Topic topic = corpus::Topic::kLifestyle,
                               std::uint64_t seed = 0);

// word -> candidates, optionally per topic ("word@topic" keys in the file).
class Lexicon {
 public:
  static Lexicon load(const std::filesystem::path& path);
  static Lexicon parse(const std::string& tsv, const std::string& origin = "lexicon");
  const std::vector<std::string>* find(const std::string& word,
                                       std::optional<corpus::Topic> topic) const;
  std::vector<std::u32string> words() const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

// Offline client backed by a lexicon. Candidate order is a seeded
// permutation of the lexicon entry, so identical (text, target, seed) give
// identical lists.
class MockClient : public ReplacementClient {
 public:
  explicit MockClient(Lexicon lexicon) : lexicon_(std::move(lexicon)) {}
  Capability capability() const override { return {}; }
  bool deterministic() const override { return true; }
  std::vector<std::u32string> known_words() const override { return lexicon_.words(); }
  std::vector<Candidate> raw_candidates(const std::string& text, const Span& target,
                                        corpus::Topic topic,
                                        std::uint64_t seed) const override;

 private:
  Lexicon lexicon_;
};

struct RemoteClientConfig {
  std::string base_url;  // AUG_API_BASE
  std::string api_key;   // AUG_API_KEY
  std::string model = "gpt-3.5-turbo";
  std::filesystem::path prompt_template;
  std::filesystem::path audit_log;
  int max_attempts = 3;
  std::chrono::milliseconds backoff{500};
  std::chrono::seconds timeout{30};

  // Reads AUG_API_BASE and AUG_API_KEY; config_error when either is unset.
  static RemoteClientConfig from_env();
};

// Chat-completion backed client. Non-deterministic by nature; every
// request/response pair is appended to the audit log as one JSON line.
class RemoteClient : public ReplacementClient {
 public:
  explicit RemoteClient(RemoteClientConfig config);
  Capability capability() const override { return {}; }
  bool deterministic() const override { return false; }
  std::vector<Candidate> raw_candidates(const std::string& text, const Span& target,
                                        corpus::Topic topic,
                                        std::uint64_t seed) const override;

  // Renders the prompt for (text, word, topic); exposed for inspection.
  std::string render_prompt(const std::string& text, const std::string& word,
                            corpus::Topic topic) const;
  // Splits a model reply into single-word candidates, dropping anything
  // with punctuation or whitespace inside.
  static std::vector<std::string> parse_reply(const std::string& reply);

 private:
  void audit(const std::string& request, int status, const std::string& response) const;

  RemoteClientConfig config_;
  std::string template_;
  std::string template_version_;
  mutable std::mutex audit_mutex_;
};

}  // namespace sarc::augment
