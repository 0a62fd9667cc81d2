// Copyright 2026 The sparsepref Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sparsepref/plot.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "sparsepref/dataset_io.h"
#include "sparsepref/error.h"

namespace sparsepref {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 6> kSeriesColors = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string Px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;

  // Data value to the [0, 1] fraction of the axis.
  double Frac(double v) const {
    const double t = log ? std::log10(v) : v;
    return (t - lo) / (hi - lo);
  }
};

Axis MakeAxis(const std::vector<double>& values, bool log) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values) {
    const double t = log ? std::log10(v) : v;
    if (!std::isfinite(t)) continue;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  const double pad = hi > lo ? 0.05 * (hi - lo) : (lo != 0 ? 0.1 * std::abs(lo) : 0.5);
  a.lo = lo - pad;
  a.hi = hi + pad;
  return a;
}

std::vector<double> Ticks(const Axis& a) {
  std::vector<double> ticks;
  if (a.log) {
    for (double e = std::ceil(a.lo); e <= a.hi; e += 1.0) ticks.push_back(e);
    if (ticks.size() < 2) {
      ticks = {a.lo + 0.05 * (a.hi - a.lo), a.hi - 0.05 * (a.hi - a.lo)};
    }
  } else {
    for (int i = 0; i <= 4; ++i) {
      ticks.push_back(a.lo + (a.hi - a.lo) * (0.05 + 0.225 * i));
    }
  }
  return ticks;
}

std::string TickLabel(const Axis& a, double t) {
  return a.log ? Short(std::pow(10.0, t)) : Short(t);
}

void Frame(std::ostringstream& svg, const std::string& title,
           const std::string& x_label, const std::string& y_label,
           const Axis& x, const Axis& y) {
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  svg << "<rect x=\"" << Px(kLeft) << "\" y=\"" << Px(kTop) << "\" width=\""
      << Px(pw) << "\" height=\"" << Px(ph)
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  svg << "<text x=\"" << Px(kLeft + pw / 2) << "\" y=\"24\" "
      << "text-anchor=\"middle\" font-size=\"16\">" << Escape(title)
      << "</text>\n";
  svg << "<text x=\"" << Px(kLeft + pw / 2) << "\" y=\"" << Px(kHeight - 15)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << Escape(x_label)
      << "</text>\n";
  svg << "<text transform=\"translate(20," << Px(kTop + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">"
      << Escape(y_label) << "</text>\n";
  for (double t : Ticks(x)) {
    const double px = kLeft + pw * (t - x.lo) / (x.hi - x.lo);
    svg << "<line x1=\"" << Px(px) << "\" y1=\"" << Px(kTop + ph) << "\" x2=\""
        << Px(px) << "\" y2=\"" << Px(kTop + ph + 5) << "\" stroke=\"#333\"/>"
        << "<text x=\"" << Px(px) << "\" y=\"" << Px(kTop + ph + 20)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << TickLabel(x, t)
        << "</text>\n";
  }
  for (double t : Ticks(y)) {
    const double py = kTop + ph * (1.0 - (t - y.lo) / (y.hi - y.lo));
    svg << "<line x1=\"" << Px(kLeft - 5) << "\" y1=\"" << Px(py) << "\" x2=\""
        << Px(kLeft) << "\" y2=\"" << Px(py) << "\" stroke=\"#333\"/>"
        << "<text x=\"" << Px(kLeft - 8) << "\" y=\"" << Px(py + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << TickLabel(y, t)
        << "</text>\n";
  }
}

std::string Header() {
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
    << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
    << kHeight << "\" font-family=\"sans-serif\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return s.str();
}

struct Series {
  std::string label;
  // x -> (sum, count), in first-seen order of accumulation.
  std::map<double, std::pair<double, int>> points;
};

std::string LinePlot(const std::string& title, const std::string& x_label,
                     const std::vector<Series>& series, bool log) {
  std::vector<double> xs, ys;
  for (const auto& s : series) {
    for (const auto& [x, acc] : s.points) {
      xs.push_back(x);
      ys.push_back(acc.first / acc.second);
    }
  }
  const Axis xa = MakeAxis(xs, log);
  const Axis ya = MakeAxis(ys, log);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;

  std::ostringstream svg;
  svg << Header();
  Frame(svg, title, x_label, "mean squared error in the data semi-norm", xa, ya);
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kSeriesColors[si % kSeriesColors.size()];
    std::ostringstream path;
    std::ostringstream marks;
    bool first = true;
    for (const auto& [x, acc] : s.points) {
      const double mean = acc.first / acc.second;
      if (log && !(mean > 0 && x > 0)) continue;
      const double px = kLeft + pw * xa.Frac(x);
      const double py = kTop + ph * (1.0 - ya.Frac(mean));
      path << (first ? "M" : " L") << Px(px) << ' ' << Px(py);
      first = false;
      marks << "<circle class=\"point\" cx=\"" << Px(px) << "\" cy=\""
            << Px(py) << "\" r=\"3.5\" fill=\"" << color
            << "\" data-series=\"" << Escape(s.label) << "\" data-x=\""
            << FormatDouble(x) << "\" data-mean-error=\"" << FormatDouble(mean)
            << "\" data-count=\"" << acc.second << "\"><title>"
            << Escape(s.label) << ": " << Short(x) << " -> " << Short(mean)
            << "</title></circle>\n";
    }
    if (!first) {
      svg << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\""
          << color << "\" stroke-width=\"1.5\"/>\n";
    }
    svg << marks.str();
    const double ly = kTop + 14 + 18 * si;
    svg << "<rect x=\"" << Px(kWidth - kRight + 12) << "\" y=\"" << Px(ly - 9)
        << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>"
        << "<text x=\"" << Px(kWidth - kRight + 28) << "\" y=\"" << Px(ly)
        << "\" font-size=\"12\">" << Escape(s.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

// Viridis anchors; luminance increases monotonically along the list.
constexpr std::array<std::array<double, 3>, 5> kViridis = {{
    {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};

std::string ColorAt(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const double pos = t * (kViridis.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(pos),
                                              kViridis.size() - 2);
  const double f = pos - i;
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(kViridis[i][0] * (1 - f) + kViridis[i + 1][0] * f)),
                static_cast<int>(std::lround(kViridis[i][1] * (1 - f) + kViridis[i + 1][1] * f)),
                static_cast<int>(std::lround(kViridis[i][2] * (1 - f) + kViridis[i + 1][2] * f)));
  return buf;
}

std::string ContourPlot(const std::vector<ResultRow>& rows) {
  // (n, beta) -> (sum, count)
  std::map<std::pair<long, double>, std::pair<double, int>> cells;
  for (const auto& r : rows) {
    if (!r.error_sigma_norm || !r.beta) continue;
    auto& acc = cells[{r.n, *r.beta}];
    acc.first += *r.error_sigma_norm;
    acc.second += 1;
  }
  std::vector<long> ns;
  std::vector<double> betas;
  for (const auto& [key, acc] : cells) {
    ns.push_back(key.first);
    betas.push_back(key.second);
  }
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  std::sort(betas.begin(), betas.end());
  betas.erase(std::unique(betas.begin(), betas.end()), betas.end());

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& [key, acc] : cells) {
    const double mean = acc.first / acc.second;
    if (mean > 0) {
      lo = std::min(lo, mean);
      hi = std::max(hi, mean);
    }
  }
  const bool have_scale = std::isfinite(lo);
  const double llo = have_scale ? std::log10(lo) : 0.0;
  const double lhi = have_scale ? std::log10(hi) : 1.0;
  auto scale = [&](double mean) {
    if (!(mean > 0) || lhi <= llo) return 0.0;
    return (std::log10(mean) - llo) / (lhi - llo);
  };

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const double cw = pw / std::max<std::size_t>(ns.size(), 1);
  const double ch = ph / std::max<std::size_t>(betas.size(), 1);

  std::ostringstream svg;
  svg << Header();
  svg << "<text x=\"" << Px(kLeft + pw / 2) << "\" y=\"24\" "
      << "text-anchor=\"middle\" font-size=\"16\">l1 error over n and beta"
      << "</text>\n";
  for (const auto& [key, acc] : cells) {
    const auto xi = std::lower_bound(ns.begin(), ns.end(), key.first) - ns.begin();
    const auto yi =
        std::lower_bound(betas.begin(), betas.end(), key.second) - betas.begin();
    const double mean = acc.first / acc.second;
    svg << "<rect class=\"cell\" x=\"" << Px(kLeft + cw * xi) << "\" y=\""
        << Px(kTop + ph - ch * (yi + 1)) << "\" width=\"" << Px(cw)
        << "\" height=\"" << Px(ch) << "\" fill=\"" << ColorAt(scale(mean))
        << "\" data-n=\"" << key.first << "\" data-beta=\""
        << FormatDouble(key.second) << "\" data-mean-error=\""
        << FormatDouble(mean) << "\" data-count=\"" << acc.second
        << "\"><title>n=" << key.first << ", beta=" << Short(key.second)
        << ": " << Short(mean) << "</title></rect>\n";
  }
  svg << "<rect x=\"" << Px(kLeft) << "\" y=\"" << Px(kTop) << "\" width=\""
      << Px(pw) << "\" height=\"" << Px(ph)
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  // Label about eight columns and rows.
  for (std::size_t i = 0; i < ns.size(); i += std::max<std::size_t>(1, ns.size() / 8)) {
    svg << "<text x=\"" << Px(kLeft + cw * (i + 0.5)) << "\" y=\""
        << Px(kTop + ph + 18) << "\" text-anchor=\"middle\" font-size=\"11\">"
        << ns[i] << "</text>\n";
  }
  for (std::size_t j = 0; j < betas.size();
       j += std::max<std::size_t>(1, betas.size() / 8)) {
    svg << "<text x=\"" << Px(kLeft - 8) << "\" y=\""
        << Px(kTop + ph - ch * (j + 0.5) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << Short(betas[j])
        << "</text>\n";
  }
  svg << "<text x=\"" << Px(kLeft + pw / 2) << "\" y=\"" << Px(kHeight - 15)
      << "\" text-anchor=\"middle\" font-size=\"13\">n (log scale)</text>\n"
      << "<text transform=\"translate(20," << Px(kTop + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">"
      << "beta (log scale)</text>\n";

  // Color bar, low error at the bottom.
  constexpr int kSteps = 32;
  const double bx = kWidth - kRight + 30;
  for (int s = 0; s < kSteps; ++s) {
    const double t = (s + 0.5) / kSteps;
    svg << "<rect class=\"colorbar\" x=\"" << Px(bx) << "\" y=\""
        << Px(kTop + ph * (1.0 - static_cast<double>(s + 1) / kSteps))
        << "\" width=\"18\" height=\"" << Px(ph / kSteps + 0.5) << "\" fill=\""
        << ColorAt(t) << "\" data-t=\"" << FormatDouble(t) << "\"/>\n";
  }
  svg << "<text x=\"" << Px(bx + 24) << "\" y=\"" << Px(kTop + ph)
      << "\" font-size=\"11\" data-value=\""
      << FormatDouble(have_scale ? lo : 0.0) << "\">"
      << Short(have_scale ? lo : 0.0) << "</text>\n"
      << "<text x=\"" << Px(bx + 24) << "\" y=\"" << Px(kTop + 10)
      << "\" font-size=\"11\" data-value=\""
      << FormatDouble(have_scale ? hi : 0.0) << "\">"
      << Short(have_scale ? hi : 0.0) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string SeriesLabel(const ResultRow& r, bool with_beta) {
  std::string label(EstimatorName(r.estimator));
  if (with_beta && r.estimator == EstimatorKind::kL1 && r.beta) {
    label += " beta=" + Short(*r.beta);
  }
  return label;
}

std::vector<Series> CollectSeries(const std::vector<ResultRow>& rows,
                                  ExperimentKind kind) {
  const bool sparsity = kind == ExperimentKind::kSparsityCurve;
  std::vector<Series> series;
  for (const auto& r : rows) {
    if (r.kind != kind || !r.error_sigma_norm) continue;
    const std::string label = SeriesLabel(r, sparsity);
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& s) { return s.label == label; });
    if (it == series.end()) {
      series.push_back({label, {}});
      it = series.end() - 1;
    }
    const double x = sparsity ? static_cast<double>(r.k.value_or(0)) / r.d
                              : static_cast<double>(r.n);
    auto& acc = it->points[x];
    acc.first += *r.error_sigma_norm;
    acc.second += 1;
  }
  return series;
}

}  // namespace

std::vector<std::string> EmitPlots(const std::vector<ResultRow>& rows,
                                   const std::string& out_dir) {
  if (rows.empty()) throw EmptyInputError("cannot plot an empty result table");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());

  auto has = [&](ExperimentKind k) {
    return std::any_of(rows.begin(), rows.end(),
                       [&](const ResultRow& r) { return r.kind == k; });
  };
  const std::filesystem::path dir(out_dir);
  std::vector<std::string> written;
  if (has(ExperimentKind::kSparsityCurve)) {
    const std::string path = (dir / "sparsity_curve.svg").string();
    WriteFile(path, LinePlot("error against sparsity", "k / d",
                             CollectSeries(rows, ExperimentKind::kSparsityCurve),
                             /*log=*/false));
    written.push_back(path);
  }
  if (has(ExperimentKind::kRateCurve)) {
    const std::string path = (dir / "rate_curve.svg").string();
    WriteFile(path, LinePlot("error against sample size", "n (log scale)",
                             CollectSeries(rows, ExperimentKind::kRateCurve),
                             /*log=*/true));
    written.push_back(path);
  }
  if (has(ExperimentKind::kBetaContour)) {
    std::vector<ResultRow> contour;
    for (const auto& r : rows) {
      if (r.kind == ExperimentKind::kBetaContour) contour.push_back(r);
    }
    const std::string path = (dir / "beta_contour.svg").string();
    WriteFile(path, ContourPlot(contour));
    written.push_back(path);
  }
  return written;
}

}  // namespace sparsepref
