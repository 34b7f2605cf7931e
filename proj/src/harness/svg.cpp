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

#include "sarc/harness/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace sarc::harness {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 60;
const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string f(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::round(v * 1000.0) / 1000.0);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const {
    return kLeft + (x1 > x0 ? (x - x0) / (x1 - x0) : 0.5) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom - (y1 > y0 ? (y - y0) / (y1 - y0) : 0.5) * (kHeight - kTop - kBottom);
  }
};

std::string open_svg(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f(kWidth) + "\" height=\"" +
         f(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n" +
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + "<text x=\"" +
         f(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + escape(title) +
         "</text>\n";
}

std::string axes(const Frame& fr, const std::string& xl, const std::string& yl,
                 const std::vector<double>& xticks, const std::vector<std::string>& xnames) {
  std::string s;
  const double bx = kHeight - kBottom;
  s += "<line x1=\"" + f(kLeft) + "\" y1=\"" + f(bx) + "\" x2=\"" + f(kWidth - kRight) +
       "\" y2=\"" + f(bx) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + f(kLeft) + "\" y1=\"" + f(kTop) + "\" x2=\"" + f(kLeft) + "\" y2=\"" +
       f(bx) + "\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < xticks.size(); ++i) {
    const double x = fr.px(xticks[i]);
    s += "<line x1=\"" + f(x) + "\" y1=\"" + f(bx) + "\" x2=\"" + f(x) + "\" y2=\"" + f(bx + 5) +
         "\" stroke=\"black\"/>\n";
    const std::string name = i < xnames.size() ? xnames[i] : tick(xticks[i]);
    s += "<text x=\"" + f(x) + "\" y=\"" + f(bx + 18) + "\" text-anchor=\"middle\">" +
         escape(name) + "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double v = fr.y0 + (fr.y1 - fr.y0) * i / 5.0;
    const double y = fr.py(v);
    s += "<line x1=\"" + f(kLeft - 5) + "\" y1=\"" + f(y) + "\" x2=\"" + f(kWidth - kRight) +
         "\" y2=\"" + f(y) + "\" stroke=\"#dddddd\"/>\n";
    s += "<text x=\"" + f(kLeft - 8) + "\" y=\"" + f(y + 4) + "\" text-anchor=\"end\">" + tick(v) +
         "</text>\n";
  }
  s += "<text x=\"" + f((kLeft + kWidth - kRight) / 2) + "\" y=\"" + f(kHeight - 18) +
       "\" text-anchor=\"middle\">" + escape(xl) + "</text>\n";
  s += "<text x=\"18\" y=\"" + f((kTop + bx) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
       f((kTop + bx) / 2) + ")\">" + escape(yl) + "</text>\n";
  return s;
}

}  // namespace

std::string line_plot_svg(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<Series>& series,
                          const std::vector<std::string>& x_labels) {
  Frame fr{INFINITY, -INFINITY, 0.0, 1.0};
  std::vector<double> xticks;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      fr.x0 = std::min(fr.x0, s.x[i]);
      fr.x1 = std::max(fr.x1, s.x[i]);
      fr.y0 = std::min(fr.y0, s.y[i]);
      fr.y1 = std::max(fr.y1, s.y[i]);
      if (std::find(xticks.begin(), xticks.end(), s.x[i]) == xticks.end()) xticks.push_back(s.x[i]);
    }
  }
  if (xticks.empty()) fr.x0 = 0.0, fr.x1 = 1.0;
  std::sort(xticks.begin(), xticks.end());
  std::string svg = open_svg(title) + axes(fr, x_label, y_label, xticks, x_labels);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kColours[k % 6];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      pts += f(fr.px(s.x[i])) + "," + f(fr.py(s.y[i])) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(colour) +
           "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      svg += "<circle cx=\"" + f(fr.px(s.x[i])) + "\" cy=\"" + f(fr.py(s.y[i])) +
             "\" r=\"3\" fill=\"" + colour + "\"/>\n";
    }
    const double ly = kTop + 20.0 * static_cast<double>(k);
    svg += "<line x1=\"" + f(kWidth - kRight + 15) + "\" y1=\"" + f(ly) + "\" x2=\"" +
           f(kWidth - kRight + 35) + "\" y2=\"" + f(ly) + "\" stroke=\"" + colour +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + f(kWidth - kRight + 40) + "\" y=\"" + f(ly + 4) + "\">" +
           escape(s.name) + "</text>\n";
  }
  return svg + "</svg>\n";
}

std::string scatter_svg(const std::string& title, const std::vector<double>& x,
                        const std::vector<double>& y, const std::vector<int>& label) {
  Frame fr{INFINITY, -INFINITY, INFINITY, -INFINITY};
  for (std::size_t i = 0; i < x.size(); ++i) {
    fr.x0 = std::min(fr.x0, x[i]);
    fr.x1 = std::max(fr.x1, x[i]);
    fr.y0 = std::min(fr.y0, y[i]);
    fr.y1 = std::max(fr.y1, y[i]);
  }
  if (x.empty()) fr = Frame{0, 1, 0, 1};
  std::string svg = open_svg(title);
  for (std::size_t i = 0; i < x.size(); ++i) {
    svg += "<circle cx=\"" + f(fr.px(x[i])) + "\" cy=\"" + f(fr.py(y[i])) + "\" r=\"2.5\" fill=\"" +
           kColours[label[i] == 0 ? 1 : 0] + "\" fill-opacity=\"0.7\"/>\n";
  }
  const char* names[] = {"sarcastic", "non-sarcastic"};
  for (int k = 0; k < 2; ++k) {
    const double ly = kTop + 20.0 * k;
    svg += "<circle cx=\"" + f(kWidth - kRight + 25) + "\" cy=\"" + f(ly) + "\" r=\"4\" fill=\"" +
           kColours[k == 0 ? 1 : 0] + "\"/>\n";
    svg += "<text x=\"" + f(kWidth - kRight + 35) + "\" y=\"" + f(ly + 4) + "\">" + names[k] +
           "</text>\n";
  }
  return svg + "</svg>\n";
}

}  // namespace sarc::harness
