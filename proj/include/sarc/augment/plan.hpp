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

#include <cstddef>
#include <string>
#include <vector>

namespace sarc::augment {

// Code-point span [start, end) of a replaceable word W in the text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  bool operator==(const Span&) const = default;
};

struct Candidate {
  std::string text;
  double score = 0.0;
  bool operator==(const Candidate&) const = default;
};

// T' = T - W + W' for every target.
struct ReplacementPlan {
  std::string original;
  std::vector<Span> targets;
  std::vector<std::vector<Candidate>> proposals;  // per target
  std::vector<std::string> chosen;                // per target
};

// Throws data_error naming the first broken invariant; overlapping targets
// raise "overlapping replacement".
void check_plan(const ReplacementPlan& plan);

// Splices the chosen words right to left so earlier offsets stay valid.
std::string apply_plan(const ReplacementPlan& plan);

}  // namespace sarc::augment
