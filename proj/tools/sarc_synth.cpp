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

// Writes a template-based synthetic seed corpus for desk-scale runs.

#include <CLI11.hpp>

#include <iostream>

#include "sarc/common/error.hpp"
#include "sarc/corpus/dataset_io.hpp"
#include "sarc/corpus/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic seed corpus writer"};
  sarc::corpus::SyntheticOptions o;
  std::string out;
  bool no_behavior = false;
  app.add_option("--out", out, "output JSONL")->required();
  app.add_option("-n,--count", o.count, "records")->default_val(1000);
  app.add_option("--seed", o.seed, "seed")->default_val(1);
  app.add_option("--sarcastic-share", o.sarcastic_share, "share of sarcastic records")->default_val(0.5);
  app.add_flag("--separable", o.separable, "label determined by sarcasm_rate with a margin");
  app.add_option("--margin", o.margin, "separable-fixture margin")->default_val(0.3);
  app.add_flag("--no-behavior", no_behavior, "omit user behavior blocks");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  o.with_behavior = !no_behavior;
  try {
    sarc::corpus::write_dataset(out, sarc::corpus::make_synthetic_corpus(o));
  } catch (const sarc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  }
  return 0;
}
