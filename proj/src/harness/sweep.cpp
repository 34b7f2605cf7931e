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

#include "sarc/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "sarc/common/error.hpp"
#include "sarc/common/log.hpp"
#include "sarc/common/rng.hpp"
#include "sarc/detector/trainer.hpp"
#include "sarc/harness/ablation.hpp"
#include "sarc/harness/noise.hpp"
#include "sarc/harness/svg.hpp"

namespace sarc::harness {

using corpus::CommentRecord;

namespace {

double parse_point(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw config_error(std::string("sweep point '") + s + "' is not a valid " + what);
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string sweep_kind_name(SweepKind k) {
  switch (k) {
    case SweepKind::kNoise:
      return "noise";
    case SweepKind::kRobustness:
      return "robustness";
    case SweepKind::kSize:
      return "size";
    case SweepKind::kAblation:
      return "ablation";
  }
  return "?";
}

SweepKind parse_sweep_kind(const std::string& s) {
  for (auto k : {SweepKind::kNoise, SweepKind::kRobustness, SweepKind::kSize, SweepKind::kAblation}) {
    if (sweep_kind_name(k) == s) return k;
  }
  throw config_error("sweep kind must be noise, robustness, size or ablation, got '" + s + "'");
}

std::vector<std::string> default_grid(SweepKind kind) {
  std::vector<std::string> g;
  switch (kind) {
    case SweepKind::kNoise:
      for (int i = 1; i <= 9; ++i) g.push_back(fmt(0.05 * i));
      break;
    case SweepKind::kRobustness:
      for (int i = 1; i <= 9; ++i) g.push_back(fmt(0.1 * i));
      break;
    case SweepKind::kSize:
      for (int s : {5000, 10000, 15000, 20000}) g.push_back(std::to_string(s));
      break;
    case SweepKind::kAblation:
      g.push_back("none");
      for (auto f : detector::kAllBehaviorFeatures) g.push_back(detector::feature_name(f));
      break;
  }
  return g;
}

void SweepSpec::validate() const {
  if (grid.empty()) throw config_error("sweep grid is empty");
  if (seeds.empty()) throw config_error("sweep needs at least one seed");
  if (jobs == 0) throw config_error("sweep jobs must be positive");
  std::set<std::string> seen;
  for (const auto& p : grid) {
    if (!seen.insert(p).second) throw config_error("sweep point '" + p + "' listed twice");
    switch (kind) {
      case SweepKind::kNoise: {
        const double v = parse_point(p, "noise probability");
        if (v < 0.05 - 1e-12 || v > 0.45 + 1e-12) {
          throw config_error("noise sweep points must lie in [0.05, 0.45], got " + p);
        }
        break;
      }
      case SweepKind::kRobustness: {
        const double v = parse_point(p, "proportion");
        const double tenths = v * 10.0;
        if (std::abs(tenths - std::round(tenths)) > 1e-9 || tenths < 1 - 1e-9 || tenths > 9 + 1e-9) {
          throw config_error("robustness sweep points must be one of 0.1, 0.2, ..., 0.9, got " + p);
        }
        break;
      }
      case SweepKind::kSize: {
        const double v = parse_point(p, "size");
        if (v < 1 || v != std::floor(v)) throw config_error("size sweep points must be positive integers");
        break;
      }
      case SweepKind::kAblation:
        parse_feature_set(p);
        break;
    }
  }
  base.validate();
}

std::string sweep_csv_header() { return "sweep,point,seed,acc,pre_ns,rec_ns,f1_ns,pre_s,rec_s,f1_s"; }

std::string SweepRow::csv() const {
  const auto& m = metrics;
  return sweep + "," + point + "," + std::to_string(seed) + "," + fmt(m.accuracy) + "," +
         fmt(m.non_sarcastic.precision) + "," + fmt(m.non_sarcastic.recall) + "," +
         fmt(m.non_sarcastic.f1) + "," + fmt(m.sarcastic.precision) + "," +
         fmt(m.sarcastic.recall) + "," + fmt(m.sarcastic.f1);
}

std::vector<CommentRecord> resample_to_proportion(const std::vector<CommentRecord>& records,
                                                  double proportion, std::size_t total,
                                                  std::uint64_t seed, bool allow_replacement) {
  if (!(proportion >= 0.0 && proportion <= 1.0)) throw config_error("proportion must be in [0,1]");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < records.size(); ++i) {
    (records[i].label == corpus::Label::kSarcastic ? pos : neg).push_back(i);
  }
  const auto want_pos = static_cast<std::size_t>(std::llround(proportion * static_cast<double>(total)));
  const std::size_t want_neg = total - want_pos;
  Rng rng = Rng::substream(seed, "harness.resample");
  std::vector<CommentRecord> out;
  out.reserve(total);
  auto draw = [&](std::vector<std::size_t>& pool, std::size_t want, const char* name) {
    if (want == 0) return;
    if (pool.empty()) {
      throw data_error(std::string("cannot resample: no ") + name + " records available, " +
                       std::to_string(want) + " needed");
    }
    if (want > pool.size() && !allow_replacement) {
      throw data_error(std::string("cannot resample: ") + std::to_string(want) + " " + name +
                       " records needed, only " + std::to_string(pool.size()) +
                       " available (shortfall " + std::to_string(want - pool.size()) + ")");
    }
    rng.shuffle(pool);
    const std::size_t direct = std::min(want, pool.size());
    for (std::size_t i = 0; i < direct; ++i) out.push_back(records[pool[i]]);
    if (want > direct) {
      log_warn(std::string("resampling ") + std::to_string(want - direct) + " " + name +
               " records with replacement (only " + std::to_string(pool.size()) + " available)");
      for (std::size_t i = direct; i < want; ++i) {
        CommentRecord r = records[pool[rng.below(pool.size())]];
        r.id += ".dup" + std::to_string(i - direct);
        out.push_back(std::move(r));
      }
    }
  };
  draw(pos, want_pos, "sarcastic");
  draw(neg, want_neg, "non-sarcastic");
  rng.shuffle(out);
  return out;
}

std::vector<CommentRecord> subsample(const std::vector<CommentRecord>& records, std::size_t size,
                                     std::uint64_t seed) {
  if (size > records.size()) {
    throw data_error("cannot subsample " + std::to_string(size) + " records from " +
                     std::to_string(records.size()) + " (shortfall " +
                     std::to_string(size - records.size()) + ")");
  }
  std::vector<std::size_t> idx(records.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng = Rng::substream(seed, "harness.subsample");
  rng.shuffle(idx);
  idx.resize(size);
  std::sort(idx.begin(), idx.end());
  std::vector<CommentRecord> out;
  out.reserve(size);
  for (auto i : idx) out.push_back(records[i]);
  return out;
}

std::vector<CommentRecord> sweep_training_set(const SweepSpec& spec, const std::string& point,
                                              const std::vector<CommentRecord>& train,
                                              std::uint64_t seed) {
  const std::uint64_t s = mix_seed(seed, sweep_kind_name(spec.kind) + ":" + point);
  switch (spec.kind) {
    case SweepKind::kNoise:
      return with_label_noise(train, parse_point(point, "noise probability"), s);
    case SweepKind::kRobustness: {
      const std::size_t total = spec.robustness_total ? spec.robustness_total : train.size();
      return resample_to_proportion(train, parse_point(point, "proportion"), total, s,
                                    spec.allow_replacement);
    }
    case SweepKind::kSize:
      return subsample(train, static_cast<std::size_t>(parse_point(point, "size")), s);
    case SweepKind::kAblation:
      return train;
  }
  return train;
}

std::vector<SweepRow> read_sweep_table(const std::filesystem::path& path) {
  std::vector<SweepRow> rows;
  std::ifstream in(path);
  if (!in) return rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != sweep_csv_header()) throw data_error(path.string() + ": unexpected header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> c;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) c.push_back(cell);
    if (c.size() != 10) {
      throw data_error(path.string() + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(c.size()) + " fields");
    }
    try {
      SweepRow r;
      r.sweep = c[0];
      r.point = c[1];
      r.seed = std::stoull(c[2]);
      r.metrics.accuracy = std::stod(c[3]);
      r.metrics.non_sarcastic = {std::stod(c[4]), std::stod(c[5]), std::stod(c[6])};
      r.metrics.sarcastic = {std::stod(c[7]), std::stod(c[8]), std::stod(c[9])};
      rows.push_back(std::move(r));
    } catch (const std::exception&) {
      throw data_error(path.string() + ": line " + std::to_string(line_no) + " is malformed");
    }
  }
  return rows;
}

std::vector<std::pair<std::string, double>> mean_f1_by_point(const std::vector<SweepRow>& rows,
                                                             const std::string& sweep) {
  std::vector<std::pair<std::string, double>> out;
  std::vector<std::size_t> counts;
  for (const auto& r : rows) {
    if (r.sweep != sweep) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == r.point; });
    if (it == out.end()) {
      out.emplace_back(r.point, 0.0);
      counts.push_back(0);
      it = out.end() - 1;
    }
    it->second += r.metrics.sarcastic.f1;
    ++counts[static_cast<std::size_t>(it - out.begin())];
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].second /= static_cast<double>(counts[i]);
  return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const corpus::DatasetSplit& data,
                                const std::filesystem::path& out_dir,
                                const SweepProgress& progress) {
  spec.validate();
  std::filesystem::create_directories(out_dir);
  const auto table = out_dir / "results.csv";
  const std::string kind = sweep_kind_name(spec.kind);
  const auto existing = read_sweep_table(table);
  if (!std::filesystem::exists(table)) write_text_atomic(table, sweep_csv_header() + "\n");

  struct Job {
    std::string point;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  std::vector<SweepRow> done;
  for (const auto& p : spec.grid) {
    for (auto s : spec.seeds) {
      auto it = std::find_if(existing.begin(), existing.end(), [&](const SweepRow& r) {
        return r.sweep == kind && r.point == p && r.seed == s;
      });
      if (it != existing.end()) {
        done.push_back(*it);
      } else {
        jobs.push_back({p, s});
      }
    }
  }

  std::mutex append_mutex;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const Job& job = jobs[i];
        detector::DetectorConfig cfg = spec.base;
        cfg.seed = job.seed;
        if (spec.kind == SweepKind::kAblation) {
          cfg.feature_mask = ablate_features(all_features(), parse_feature_set(job.point)).mask;
        }
        const auto train = sweep_training_set(spec, job.point, data.train, job.seed);
        auto det = detector::make_detector(cfg, train);
        detector::train_detector(*det, train, data.val);
        SweepRow row{kind, job.point, job.seed, detector::evaluate(*det, data.test)};
        std::lock_guard<std::mutex> lock(append_mutex);
        std::ofstream out(table, std::ios::app);
        out << row.csv() << '\n';
        if (!out) throw io_error("cannot append to " + table.string());
        done.push_back(row);
        if (progress) progress(row);
      } catch (...) {
        std::lock_guard<std::mutex> lock(append_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };
  const std::size_t n_threads = std::min(spec.jobs, std::max<std::size_t>(1, jobs.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Grid order, then seed order.
  std::vector<SweepRow> ordered;
  for (const auto& p : spec.grid) {
    for (auto s : spec.seeds) {
      for (const auto& r : done) {
        if (r.point == p && r.seed == s) ordered.push_back(r);
      }
    }
  }

  const auto all_rows = read_sweep_table(table);
  const auto means = mean_f1_by_point(all_rows, kind);
  Series f1{"sarcastic F1", {}, {}};
  Series acc{"accuracy", {}, {}};
  std::vector<std::string> names;
  const bool numeric = spec.kind != SweepKind::kAblation;
  for (std::size_t i = 0; i < means.size(); ++i) {
    const double x = numeric ? parse_point(means[i].first, "point") : static_cast<double>(i);
    double acc_sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : all_rows) {
      if (r.sweep == kind && r.point == means[i].first) acc_sum += r.metrics.accuracy, ++n;
    }
    f1.x.push_back(x);
    f1.y.push_back(means[i].second);
    acc.x.push_back(x);
    acc.y.push_back(acc_sum / static_cast<double>(n));
    names.push_back(means[i].first);
  }
  if (numeric) {
    std::vector<std::size_t> order(f1.x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return f1.x[a] < f1.x[b]; });
    Series f1s{f1.name, {}, {}}, accs{acc.name, {}, {}};
    for (auto i : order) {
      f1s.x.push_back(f1.x[i]);
      f1s.y.push_back(f1.y[i]);
      accs.x.push_back(acc.x[i]);
      accs.y.push_back(acc.y[i]);
    }
    f1 = f1s;
    acc = accs;
    names.clear();
  } else {
    for (auto& n : names) n = n == "none" ? "F" : "F\\" + n;
  }
  const char* x_label = spec.kind == SweepKind::kNoise        ? "label noise p"
                        : spec.kind == SweepKind::kRobustness ? "sarcastic proportion"
                        : spec.kind == SweepKind::kSize       ? "training records"
                                                              : "feature set";
  write_text_atomic(out_dir / (kind + ".svg"),
                    line_plot_svg(kind + " sweep (mean over seeds)", x_label, "score", {f1, acc},
                                  names));
  return ordered;
}

}  // namespace sarc::harness
