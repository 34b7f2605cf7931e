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

#include "sarc/harness/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "sarc/common/error.hpp"
#include "sarc/common/jsonl.hpp"
#include "sarc/common/rng.hpp"
#include "sarc/harness/svg.hpp"

namespace sarc::harness {

using nn::Matrix;

namespace {

std::vector<std::string> split_csv(const std::string& line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw data_error("line " + std::to_string(line_no) + ": unterminated quote");
  out.push_back(std::move(cur));
  return out;
}

double parse_number(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw data_error("line " + std::to_string(line_no) + ": '" + s + "' is not a number");
  }
}

// Row-conditional affinities with per-row bandwidth matched to perplexity.
std::vector<double> affinities(const std::vector<double>& d2, std::size_t n, double perplexity) {
  std::vector<double> p(n * n, 0.0);
  const double target = std::log(perplexity);
  for (std::size_t i = 0; i < n; ++i) {
    double beta = 1.0, lo = 0.0, hi = INFINITY;
    const double* row = &d2[i * n];
    for (int it = 0; it < 100; ++it) {
      double sum = 0.0, hsum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double w = std::exp(-beta * row[j]);
        sum += w;
        hsum += w * row[j];
      }
      if (sum <= 0.0) {
        hi = beta;
        beta = (lo + hi) / 2.0;
        continue;
      }
      const double h = std::log(sum) + beta * hsum / sum;
      if (std::abs(h - target) < 1e-5) break;
      if (h > target) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : (lo + hi) / 2.0;
      } else {
        hi = beta;
        beta = (lo + hi) / 2.0;
      }
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      p[i * n + j] = std::exp(-beta * row[j]);
      sum += p[i * n + j];
    }
    for (std::size_t j = 0; j < n; ++j) p[i * n + j] = sum > 0.0 ? p[i * n + j] / sum : 0.0;
  }
  return p;
}

}  // namespace

EmbeddingTable read_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  EmbeddingTable t;
  std::string line;
  std::size_t line_no = 0, width = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      const auto h = split_csv(line, line_no);
      if (h.size() < 4 || h[0] != "id" || h[1] != "label" || h[2] != "prob") {
        throw data_error("line 1: expected header id,label,prob,e0,...");
      }
      width = h.size() - 3;
      continue;
    }
    if (line.empty()) continue;
    const auto cells = split_csv(line, line_no);
    if (cells.size() != width + 3) {
      throw data_error("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(width + 3) + " fields, found " +
                       std::to_string(cells.size()));
    }
    t.ids.push_back(cells[0]);
    const double label = parse_number(cells[1], line_no);
    if (label != 0.0 && label != 1.0) {
      throw data_error("line " + std::to_string(line_no) + ": label must be 0 or 1");
    }
    t.labels.push_back(static_cast<int>(label));
    t.probs.push_back(parse_number(cells[2], line_no));
    for (std::size_t j = 0; j < width; ++j) values.push_back(parse_number(cells[3 + j], line_no));
  }
  if (line_no == 0) throw data_error("line 1: empty embedding file");
  t.vectors = Matrix(t.ids.size(), width, std::move(values));
  return t;
}

Matrix tsne_2d(const Matrix& x, const TsneConfig& config) {
  if (x.rows() < 10) throw data_error("projection needs at least 10 rows");
  // Collapse duplicates so identical inputs map to one point.
  std::map<std::vector<double>, std::size_t> unique_index;
  std::vector<std::size_t> owner(x.rows());
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    std::vector<double> key(x.row(i).begin(), x.row(i).end());
    auto [it, inserted] = unique_index.emplace(std::move(key), reps.size());
    if (inserted) reps.push_back(i);
    owner[i] = it->second;
  }
  const std::size_t n = reps.size();
  Matrix y(n, 2);
  Rng rng = Rng::substream(config.seed, "harness.tsne");
  for (auto& v : y.values()) v = 1e-4 * rng.normal();

  if (n > 1) {
    std::vector<double> d2(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < x.cols(); ++k) {
          const double d = x(reps[i], k) - x(reps[j], k);
          s += d * d;
        }
        d2[i * n + j] = d2[j * n + i] = s;
      }
    }
    const double perplexity =
        std::max(1.0, std::min(config.perplexity, static_cast<double>(n - 1) / 3.0));
    const auto cond = affinities(d2, n, perplexity);
    std::vector<double> p(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        p[i * n + j] = std::max((cond[i * n + j] + cond[j * n + i]) / (2.0 * n), 1e-12);
      }
    }
    std::vector<double> q(n * n), grad(n * 2), vel(n * 2, 0.0), gains(n * 2, 1.0);
    const std::size_t exaggeration_end = std::min<std::size_t>(250, config.iterations / 4);
    for (std::size_t it = 0; it < config.iterations; ++it) {
      const double ex = it < exaggeration_end ? 12.0 : 1.0;
      const double momentum = it < exaggeration_end ? 0.5 : 0.8;
      double qsum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const double dx = y(i, 0) - y(j, 0), dy = y(i, 1) - y(j, 1);
          const double w = 1.0 / (1.0 + dx * dx + dy * dy);
          q[i * n + j] = q[j * n + i] = w;
          qsum += 2.0 * w;
        }
      }
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) continue;
          const double w = q[i * n + j];
          const double m = 4.0 * (ex * p[i * n + j] - w / qsum) * w;
          grad[2 * i] += m * (y(i, 0) - y(j, 0));
          grad[2 * i + 1] += m * (y(i, 1) - y(j, 1));
        }
      }
      for (std::size_t k = 0; k < n * 2; ++k) {
        const bool same = (grad[k] > 0.0) == (vel[k] > 0.0);
        gains[k] = std::max(0.01, same ? gains[k] * 0.8 : gains[k] + 0.2);
        vel[k] = momentum * vel[k] - config.learning_rate * gains[k] * grad[k];
        y.values()[k] += vel[k];
      }
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < n; ++i) mx += y(i, 0), my += y(i, 1);
      for (std::size_t i = 0; i < n; ++i) {
        y(i, 0) -= mx / static_cast<double>(n);
        y(i, 1) -= my / static_cast<double>(n);
      }
    }
  }
  Matrix out(x.rows(), 2);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    out(i, 0) = y(owner[i], 0);
    out(i, 1) = y(owner[i], 1);
  }
  return out;
}

void project_2d(const std::filesystem::path& embeddings, const std::filesystem::path& out,
                const TsneConfig& config, const std::filesystem::path& svg_path) {
  const auto table = read_embeddings(embeddings);
  const Matrix y = tsne_2d(table.vectors, config);
  std::string text = "id,label,x,y\n";
  char buf[64];
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    std::snprintf(buf, sizeof buf, ",%d,%.9g,%.9g\n", table.labels[i], y(i, 0), y(i, 1));
    const std::string& id = table.ids[i];
    text += (id.find_first_of(",\"") == std::string::npos ? id : "\"" + id + "\"") + buf;
  }
  write_text_atomic(out, text);
  if (!svg_path.empty()) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < y.rows(); ++i) xs.push_back(y(i, 0)), ys.push_back(y(i, 1));
    write_text_atomic(svg_path, scatter_svg("t-SNE of fused embeddings", xs, ys, table.labels));
  }
}

double silhouette(const Matrix& points, const std::vector<int>& labels) {
  const std::size_t n = points.rows();
  if (labels.size() != n || n < 2) throw data_error("silhouette needs labelled points");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::map<int, std::pair<double, std::size_t>> by;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double s = 0.0;
      for (std::size_t k = 0; k < points.cols(); ++k) {
        const double d = points(i, k) - points(j, k);
        s += d * d;
      }
      auto& e = by[labels[j]];
      e.first += std::sqrt(s);
      ++e.second;
    }
    const auto own = by.find(labels[i]);
    if (own == by.end() || own->second.second == 0) continue;  // singleton cluster scores 0
    const double a = own->second.first / static_cast<double>(own->second.second);
    double b = INFINITY;
    for (const auto& [l, e] : by) {
      if (l != labels[i]) b = std::min(b, e.first / static_cast<double>(e.second));
    }
    if (std::isinf(b)) continue;
    const double m = std::max(a, b);
    total += m > 0.0 ? (b - a) / m : 0.0;
  }
  return total / static_cast<double>(n);
}

}  // namespace sarc::harness
