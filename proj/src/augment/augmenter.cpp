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

#include "sarc/augment/augmenter.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "sarc/augment/targets.hpp"
#include "sarc/common/rng.hpp"

namespace sarc::augment {

namespace {

struct RecordOutcome {
  std::vector<AugmentedChild> children;
  std::optional<SkipEntry> skip;
};

std::vector<std::size_t> child_quotas(std::size_t n, const AugmentConfig& cfg) {
  std::vector<std::size_t> quota(n, cfg.factor);
  if (cfg.target_total == 0) return quota;
  if (cfg.target_total < n) {
    throw config_error("augment.target_total is smaller than the input size");
  }
  const std::size_t extra = cfg.target_total - n;
  const std::size_t base = extra / n;
  const std::size_t rem = extra % n;
  if (base + (rem > 0 ? 1 : 0) > cfg.factor) {
    throw config_error("augment.factor too small to reach augment.target_total");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = Rng::substream(cfg.seed, "augment.quota");
  rng.shuffle(order);
  for (std::size_t i = 0; i < n; ++i) quota[order[i]] = base + (i < rem ? 1 : 0);
  return quota;
}

RecordOutcome augment_one(const corpus::CommentRecord& parent, std::size_t quota,
                          const ReplacementClient& client,
                          const std::vector<std::u32string>& words,
                          const AugmentConfig& cfg) {
  RecordOutcome out;
  std::set<std::string> texts{parent.text};
  std::string failure = "no replaceable words with proposals";
  for (std::size_t child = 1; child <= quota; ++child) {
    bool done = false;
    for (std::size_t attempt = 0; attempt < cfg.attempts_per_child && !done; ++attempt) {
      const std::uint64_t seed =
          mix_seed(cfg.seed, parent.id + "#" + std::to_string(child) + "#" +
                                 std::to_string(attempt));
      Rng rng(seed);
      ReplacementPlan plan;
      plan.original = parent.text;
      for (const Span& span : select_targets(parent.text, cfg.replacements, seed, words)) {
        std::vector<Candidate> props;
        try {
          props = propose(client, parent.text, span, parent.topic, rng.next_u64());
        } catch (const NoProposal&) {
          continue;
        } catch (const TransportError& e) {
          // Keep what this record already produced and report the rest.
          out.skip = SkipEntry{parent.id, quota, out.children.size(),
                               std::string("transport: ") + e.what()};
          return out;
        }
        plan.targets.push_back(span);
        plan.chosen.push_back(props[rng.below(props.size())].text);
        plan.proposals.push_back(std::move(props));
      }
      if (plan.targets.empty()) continue;
      std::string text = apply_plan(plan);
      if (!texts.insert(text).second) {
        failure = "replacements only reproduced existing texts";
        continue;
      }
      AugmentedChild c;
      c.parent_id = parent.id;
      c.record = parent;
      c.record.id = parent.id + ".aug" + std::to_string(child);
      c.record.text = std::move(text);
      c.record.provenance = "augmented";
      c.plan = std::move(plan);
      out.children.push_back(std::move(c));
      done = true;
    }
    if (!done) break;
  }
  if (out.children.size() < quota) {
    out.skip = SkipEntry{parent.id, quota, out.children.size(), failure};
  }
  return out;
}

}  // namespace

AugmentResult augment_dataset(const std::vector<corpus::CommentRecord>& records,
                              const ReplacementClient& client, const AugmentConfig& cfg) {
  if (cfg.factor < 1) throw config_error("augment.factor must be at least 1");
  if (cfg.replacements < 1) throw config_error("augment.replacements must be at least 1");
  if (cfg.attempts_per_child < 1) throw config_error("augment.attempts must be at least 1");
  const std::size_t n = records.size();
  AugmentResult result;
  if (n == 0) return result;
  const auto quota = child_quotas(n, cfg);
  const auto words = client.known_words();

  std::vector<RecordOutcome> outcomes(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        outcomes[i] = augment_one(records[i], quota[i], client, words, cfg);
      } catch (...) {
        std::lock_guard<std::mutex> lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(cfg.max_in_flight, 1, n);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  for (std::size_t i = 0; i < n; ++i) {
    result.records.push_back(records[i]);
    for (auto& c : outcomes[i].children) {
      result.records.push_back(c.record);
      result.children.push_back(std::move(c));
    }
    if (outcomes[i].skip) result.skips.push_back(std::move(*outcomes[i].skip));
  }
  return result;
}

}  // namespace sarc::augment
