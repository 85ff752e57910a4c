// Copyright 2026 The stochmatch Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Output helpers: number formatting, SVG line charts, run manifests.

#ifndef STOCHMATCH_REPORT_H_
#define STOCHMATCH_REPORT_H_

#include <string>
#include <utility>
#include <vector>

namespace stochmatch {

inline constexpr const char* kVersion = "0.1.0";

// printf %.{digits}g.
std::string FormatG(double x, int digits = 12);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Axes, tick labels, a legend and one <polyline> per series.
std::string SvgLineChart(const std::string& title, const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<Series>& series);
void WriteTextFile(const std::string& path, const std::string& text);

// JSON manifest: command, config key/values, seed, version, artifacts.
struct Manifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  unsigned long long seed = 0;
  std::vector<std::string> artifacts;
  int exit_code = 0;
};
std::string ManifestJson(const Manifest& m);

}  // namespace stochmatch

#endif  // STOCHMATCH_REPORT_H_
