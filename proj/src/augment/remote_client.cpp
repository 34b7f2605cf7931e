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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "sarc/augment/client.hpp"
#include "sarc/augment/targets.hpp"
#include "sarc/common/jsonl.hpp"
#include "sarc/common/utf8.hpp"

namespace sarc::augment {

namespace {

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

// "https://host:port/v1" -> ("https://host:port", "/v1")
std::pair<std::string, std::string> split_base(const std::string& base) {
  const auto scheme = base.find("://");
  const auto path = base.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path == std::string::npos) return {base, ""};
  std::string prefix = base.substr(path);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {base.substr(0, path), prefix};
}

bool retryable_status(int status) { return status == 408 || status == 429 || status >= 500; }

}  // namespace

RemoteClientConfig RemoteClientConfig::from_env() {
  RemoteClientConfig c;
  const char* base = std::getenv("AUG_API_BASE");
  const char* key = std::getenv("AUG_API_KEY");
  if (base == nullptr || *base == '\0') throw config_error("AUG_API_BASE is not set");
  if (key == nullptr || *key == '\0') throw config_error("AUG_API_KEY is not set");
  c.base_url = base;
  c.api_key = key;
  return c;
}

RemoteClient::RemoteClient(RemoteClientConfig config) : config_(std::move(config)) {
  if (config_.base_url.empty()) throw config_error("remote client needs a base URL");
  if (config_.max_attempts < 1) throw config_error("remote client needs max_attempts >= 1");
  template_ = read_text(config_.prompt_template);
  std::istringstream in(template_);
  std::string first;
  std::getline(in, first);
  const std::string tag = "# prompt-version:";
  if (first.rfind(tag, 0) != 0) {
    throw config_error(config_.prompt_template.string() + ": missing prompt-version header");
  }
  template_version_ = utf8::trim(first.substr(tag.size()));
  template_ = template_.substr(first.size() + 1);
}

std::string RemoteClient::render_prompt(const std::string& text, const std::string& word,
                                        corpus::Topic topic) const {
  std::string p = replace_all(template_, "{{text}}", text);
  p = replace_all(p, "{{word}}", word);
  p = replace_all(p, "{{topic}}", std::string(corpus::topic_name(topic)));
  return replace_all(p, "{{n}}", std::to_string(capability().candidates_per_call));
}

std::vector<std::string> RemoteClient::parse_reply(const std::string& reply) {
  std::string normalized = replace_all(reply, "，", ",");
  normalized = replace_all(normalized, "、", ",");
  std::replace(normalized.begin(), normalized.end(), '\n', ',');
  std::vector<std::string> out;
  std::istringstream in(normalized);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = utf8::trim(item);
    if (item.empty()) continue;
    std::u32string cps;
    try {
      cps = utf8::decode(item);
    } catch (const Error&) {
      continue;
    }
    const bool single_word = std::all_of(cps.begin(), cps.end(), [](char32_t c) {
      return !is_punctuation(c) && c != U' ' && c != U'\t' && c != 0x3000;
    });
    if (single_word) out.push_back(item);
  }
  return out;
}

void RemoteClient::audit(const std::string& request, int status,
                         const std::string& response) const {
  if (config_.audit_log.empty()) return;
  const Json line{{"time", std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::system_clock::now().time_since_epoch())
                               .count()},
                  {"prompt_version", template_version_},
                  {"request", Json::parse(request, nullptr, false)},
                  {"status", status},
                  {"response", response}};
  std::lock_guard<std::mutex> lock(audit_mutex_);
  std::ofstream out(config_.audit_log, std::ios::app);
  out << line.dump() << "\n";
}

std::vector<Candidate> RemoteClient::raw_candidates(const std::string& text,
                                                    const Span& target,
                                                    corpus::Topic topic,
                                                    std::uint64_t seed) const {
  const auto [host, prefix] = split_base(config_.base_url);
  const Json body{{"model", config_.model},
                  {"temperature", 0.7},
                  {"seed", seed},
                  {"messages", Json::array({Json{{"role", "user"},
                                                 {"content", render_prompt(text, target.surface,
                                                                           topic)}}})}};
  const std::string request = body.dump();
  httplib::Client cli(host);
  cli.set_connection_timeout(config_.timeout);
  cli.set_read_timeout(config_.timeout);
  cli.set_bearer_token_auth(config_.api_key);

  int status = 0;
  std::string last_error;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    auto res = cli.Post(prefix + "/chat/completions", request, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      audit(request, 0, last_error);
    } else {
      status = res->status;
      audit(request, status, res->body);
      if (status == 200) {
        const Json reply = Json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty()) {
          throw TransportError("malformed completion response", status, attempt, false,
                               std::chrono::milliseconds(0));
        }
        const std::string content =
            reply["choices"][0].value("message", Json::object()).value("content", "");
        std::vector<Candidate> out;
        const auto words = parse_reply(content);
        for (std::size_t i = 0; i < words.size(); ++i) {
          out.push_back({words[i], 1.0 / static_cast<double>(i + 1)});
        }
        return out;
      }
      last_error = "HTTP " + std::to_string(status);
      if (!retryable_status(status)) {
        throw TransportError("completion request rejected: " + last_error, status, attempt,
                             false, std::chrono::milliseconds(0));
      }
    }
    if (attempt < config_.max_attempts) {
      std::this_thread::sleep_for(config_.backoff * (1 << (attempt - 1)));
    }
  }
  throw TransportError("completion request failed: " + last_error, status,
                       config_.max_attempts, true, config_.backoff);
}

}  // namespace sarc::augment
