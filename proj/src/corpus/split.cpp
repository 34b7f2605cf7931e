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

#include "sarc/corpus/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sarc/common/rng.hpp"

namespace sarc::corpus {

namespace {

std::size_t floor_count(std::size_t n, double ratio) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio + 1e-9));
}

// Rounds per-class targets to integers summing to `total`. Entries may only
// round to floor or ceil; `prefer_up` breaks the choice.
std::vector<std::size_t> apportion(const std::vector<double>& targets,
                                   std::size_t total,
                                   const std::vector<double>& prefer_up) {
  std::vector<std::size_t> out(targets.size());
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < targets.size(); ++c) {
    out[c] = static_cast<std::size_t>(std::floor(targets[c] + 1e-9));
    assigned += out[c];
  }
  std::vector<std::size_t> order(targets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return prefer_up[a] > prefer_up[b];
  });
  for (std::size_t i = 0; assigned < total && i < order.size(); ++i) {
    const std::size_t c = order[i];
    if (static_cast<double>(out[c]) < targets[c] - 1e-9) {
      ++out[c];
      ++assigned;
    }
  }
  return out;
}

}  // namespace

DatasetSplit split_dataset(const std::vector<CommentRecord>& records,
                           SplitRatios ratios, std::uint64_t seed) {
  if (records.empty()) throw data_error("cannot split an empty dataset");
  if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0) {
    throw config_error("split ratios must be non-negative");
  }
  if (std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
    throw config_error("split ratios must sum to 1");
  }
  const std::size_t n = records.size();
  const std::size_t n_val = floor_count(n, ratios.val);
  const std::size_t n_test = floor_count(n, ratios.test);

  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < n; ++i) {
    by_label[static_cast<int>(records[i].label)].push_back(i);
  }
  Rng rng = Rng::substream(seed, "corpus.split");
  std::vector<std::vector<std::size_t>*> classes;
  for (auto& [label, idx] : by_label) {
    rng.shuffle(idx);
    classes.push_back(&idx);
  }

  // Round the cumulative boundaries (val | val+test) per class. The second
  // rounding leans toward the first one's direction so the middle split also
  // stays within one record of proportional.
  const std::size_t k = classes.size();
  std::vector<double> cum1(k), cum2(k), frac1(k);
  for (std::size_t c = 0; c < k; ++c) {
    const double nc = static_cast<double>(classes[c]->size());
    cum1[c] = nc * static_cast<double>(n_val) / static_cast<double>(n);
    cum2[c] = nc * static_cast<double>(n_val + n_test) / static_cast<double>(n);
    frac1[c] = cum1[c] - std::floor(cum1[c]);
  }
  const auto b1 = apportion(cum1, n_val, frac1);
  std::vector<double> pref2(k);
  for (std::size_t c = 0; c < k; ++c) {
    const double frac2 = cum2[c] - std::floor(cum2[c]);
    const double dev1 = static_cast<double>(b1[c]) - cum1[c];
    pref2[c] = std::abs(-frac2 - dev1) - std::abs(1.0 - frac2 - dev1);
  }
  auto b2 = apportion(cum2, n_val + n_test, pref2);
  // A class cannot hand back val records to test; move the surplus unit.
  for (std::size_t c = 0; c < k; ++c) {
    while (b2[c] < b1[c]) {
      for (std::size_t o = 0; o < k; ++o) {
        if (o != c && b2[o] > b1[o] && static_cast<double>(b2[o]) > cum2[o] - 1e-9) {
          --b2[o];
          ++b2[c];
          break;
        }
      }
      if (b2[c] < b1[c]) b2[c] = b1[c];
    }
  }

  DatasetSplit out;
  for (std::size_t c = 0; c < k; ++c) {
    const auto& idx = *classes[c];
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const CommentRecord& r = records[idx[j]];
      if (j < b1[c]) out.val.push_back(r);
      else if (j < b2[c]) out.test.push_back(r);
      else out.train.push_back(r);
    }
  }
  rng.shuffle(out.train);
  rng.shuffle(out.val);
  rng.shuffle(out.test);
  return out;
}

}  // namespace sarc::corpus
