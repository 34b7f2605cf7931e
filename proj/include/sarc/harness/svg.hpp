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

#include <string>
#include <vector>

namespace sarc::harness {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Static line plot with axes, ticks and a legend. Categorical x values are
// passed as indices with `x_labels` naming them.
std::string line_plot_svg(const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<Series>& series,
                          const std::vector<std::string>& x_labels = {});

// Scatter plot of labelled 2-D points (two colours).
std::string scatter_svg(const std::string& title, const std::vector<double>& x,
                        const std::vector<double>& y, const std::vector<int>& label);

}  // namespace sarc::harness
