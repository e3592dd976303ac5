/*
   Copyright 2026 The irf Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace irf::svg {

struct Series {
  std::vector<double> x, y;
  std::string color = "#1f77b4";
  std::string label;
  bool markers = false;  // points instead of a polyline
  bool dashed = false;
};

struct Plot {
  std::string title, x_label, y_label;
  bool log_x = false, log_y = false;
  std::vector<Series> series;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double map(double v) const { return log ? std::log10(v) : v; }
  double frac(double v) const { return (map(v) - lo) / (hi - lo); }

  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      for (double e = std::ceil(lo); e <= hi + 1e-9; e += std::max(1.0, std::floor((hi - lo) / 6.0)))
        t.push_back(std::pow(10.0, e));
      return t;
    }
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double step = raw / mag < 2 ? 2 * mag : raw / mag < 5 ? 5 * mag : 10 * mag;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(std::fabs(v) < 1e-12 * step ? 0.0 : v);
    return t;
  }
};

inline Axis fit_axis(const std::vector<const std::vector<double>*>& data, bool log) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto* d : data)
    for (double v : *d) {
      if (!std::isfinite(v) || (log && v <= 0.0)) continue;
      const double m = log ? std::log10(v) : v;
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  const double pad = 0.04 * (hi - lo);
  return {lo - pad, hi + pad, log};
}

}  // namespace detail

// Self-contained SVG document.
inline std::string render(const Plot& p) {
  using detail::num;
  const double W = 640, H = 440, L = 70, R = 20, T = 36, B = 56;
  std::vector<const std::vector<double>*> xs, ys;
  for (const auto& s : p.series) xs.push_back(&s.x), ys.push_back(&s.y);
  const auto ax = detail::fit_axis(xs, p.log_x);
  const auto ay = detail::fit_axis(ys, p.log_y);
  auto px = [&](double v) { return L + ax.frac(v) * (W - L - R); };
  auto py = [&](double v) { return H - B - ay.frac(v) * (H - T - B); };

  std::string o = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" + num(H) +
                  "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + num(W / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" + detail::escape(p.title) + "</text>\n";
  o += "<rect x=\"" + num(L) + "\" y=\"" + num(T) + "\" width=\"" + num(W - L - R) + "\" height=\"" + num(H - T - B) +
       "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (double t : ax.ticks()) {
    const double x = px(t);
    o += "<line x1=\"" + num(x) + "\" y1=\"" + num(H - B) + "\" x2=\"" + num(x) + "\" y2=\"" + num(H - B + 4) + "\" stroke=\"#333\"/>";
    o += "<text x=\"" + num(x) + "\" y=\"" + num(H - B + 16) + "\" text-anchor=\"middle\">" + num(t) + "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    o += "<line x1=\"" + num(L - 4) + "\" y1=\"" + num(y) + "\" x2=\"" + num(L) + "\" y2=\"" + num(y) + "\" stroke=\"#333\"/>";
    o += "<text x=\"" + num(L - 6) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" + num(t) + "</text>\n";
  }
  o += "<text x=\"" + num((L + W - R) / 2) + "\" y=\"" + num(H - 14) + "\" text-anchor=\"middle\">" + detail::escape(p.x_label) + "</text>\n";
  o += "<text transform=\"translate(16," + num((T + H - B) / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
       detail::escape(p.y_label) + "</text>\n";

  double legend_y = T + 14;
  for (const auto& s : p.series) {
    std::string pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if ((p.log_x && s.x[i] <= 0.0) || (p.log_y && s.y[i] <= 0.0)) continue;
      if (s.markers) {
        o += "<circle cx=\"" + num(px(s.x[i])) + "\" cy=\"" + num(py(s.y[i])) + "\" r=\"1.6\" fill=\"" + s.color + "\"/>";
      } else {
        pts += num(px(s.x[i])) + "," + num(py(s.y[i])) + " ";
      }
    }
    if (!s.markers && !pts.empty())
      o += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"" +
           (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" + pts + "\"/>";
    o += "\n";
    if (!s.label.empty()) {
      o += "<rect x=\"" + num(W - R - 150) + "\" y=\"" + num(legend_y - 8) + "\" width=\"10\" height=\"10\" fill=\"" + s.color + "\"/>";
      o += "<text x=\"" + num(W - R - 135) + "\" y=\"" + num(legend_y + 1) + "\">" + detail::escape(s.label) + "</text>\n";
      legend_y += 16;
    }
  }
  o += "</svg>\n";
  return o;
}

}  // namespace irf::svg
