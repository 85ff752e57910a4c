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

#include "stochmatch/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace stochmatch {

std::string FormatG(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

namespace {

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b"};

}  // namespace

std::string SvgLineChart(const std::string& title, const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<Series>& series) {
  constexpr double kW = 640, kH = 420, kL = 70, kR = 20, kT = 40, kB = 60;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const Series& s : series) {
    for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  if (!(x1 > x0)) x0 = 0, x1 = 1;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); };
  auto py = [&](double y) { return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
     << "\" height=\"" << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        "font-size=\"14\">" << Escape(title) << "</text>\n";
  os << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR
     << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL
     << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    os << "<text x=\"" << px(xv) << "\" y=\"" << kH - kB + 18
       << "\" text-anchor=\"middle\">" << FormatG(xv, 3) << "</text>\n";
    os << "<text x=\"" << kL - 6 << "\" y=\"" << py(yv) + 4
       << "\" text-anchor=\"end\">" << FormatG(yv, 3) << "</text>\n";
  }
  os << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 18
     << "\" text-anchor=\"middle\">" << Escape(x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << (kT + kH - kB) / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << (kT + kH - kB) / 2 << ")\">" << Escape(y_label) << "</text>\n";
  for (size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (i) os << ' ';
      os << FormatG(px(s.x[i]), 6) << ',' << FormatG(py(s.y[i]), 6);
    }
    os << "\"/>\n";
    os << "<text x=\"" << kW - kR - 150 << "\" y=\"" << kT + 16 * (k + 1)
       << "\" fill=\"" << color << "\">" << Escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string ManifestJson(const Manifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["version"] = kVersion;
  j["seed"] = m.seed;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.config) config[k] = v;
  j["config"] = config;
  j["artifacts"] = m.artifacts;
  j["exit_code"] = m.exit_code;
  return j.dump(2) + "\n";
}

}  // namespace stochmatch
