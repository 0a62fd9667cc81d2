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

#include "sparsepref/dataset_io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sparsepref/error.h"

namespace sparsepref {
namespace {

std::string LinePrefix(long line) {
  return "line " + std::to_string(line) + ": ";
}

std::vector<std::string_view> SplitCsv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double ParseDouble(std::string_view field, long line) {
  field = Trim(field);
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ParseError(LinePrefix(line) + "cannot parse '" + std::string(field) +
                     "' as a finite decimal number");
  }
  return v;
}

int ParseLabel(double v, long line) {
  if (v == 0.0) return 0;
  if (v == 1.0) return 1;
  throw ParseError(LinePrefix(line) + "label must be 0 or 1");
}

bool IsBlank(std::string_view s) { return Trim(s).empty(); }

}  // namespace

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

DatasetFormat FormatForPath(const std::string& path) {
  for (std::string_view ext : {".jsonl", ".json", ".ndjson"}) {
    if (path.size() >= ext.size() &&
        path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
      return DatasetFormat::kJsonLines;
    }
  }
  return DatasetFormat::kCsv;
}

PreferenceDataset ReadDatasetCsv(std::istream& in) {
  std::string text;
  long line_no = 0;
  // Header.
  while (std::getline(in, text)) {
    ++line_no;
    if (!IsBlank(text)) break;
  }
  if (IsBlank(text)) throw ParseError("line 1: missing CSV header");
  const auto header = SplitCsv(text);
  if (header.size() % 2 == 0 || Trim(header[0]) != "y") {
    throw ParseError(LinePrefix(line_no) +
                     "header must be y,x0_1..x0_d,x1_1..x1_d");
  }
  const int d = static_cast<int>((header.size() - 1) / 2);
  for (int j = 0; j < d; ++j) {
    const std::string want0 = "x0_" + std::to_string(j + 1);
    const std::string want1 = "x1_" + std::to_string(j + 1);
    if (Trim(header[1 + j]) != want0 || Trim(header[1 + d + j]) != want1) {
      throw ParseError(LinePrefix(line_no) + "expected columns " + want0 +
                       " and " + want1 + " in the header");
    }
  }

  std::vector<double> x0, x1;
  std::vector<int> y;
  const std::size_t cols = 1 + 2 * static_cast<std::size_t>(d);
  while (std::getline(in, text)) {
    ++line_no;
    if (IsBlank(text)) continue;
    const auto fields = SplitCsv(text);
    if (fields.size() != cols) {
      throw ParseError(LinePrefix(line_no) + "expected " + std::to_string(cols) +
                       " columns, got " + std::to_string(fields.size()));
    }
    y.push_back(ParseLabel(ParseDouble(fields[0], line_no), line_no));
    for (int j = 0; j < d; ++j) x0.push_back(ParseDouble(fields[1 + j], line_no));
    for (int j = 0; j < d; ++j) {
      x1.push_back(ParseDouble(fields[1 + d + j], line_no));
    }
  }

  const auto n = static_cast<Eigen::Index>(y.size());
  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::MatrixXd m0 = Eigen::Map<RowMajor>(x0.data(), n, d);
  Eigen::MatrixXd m1 = Eigen::Map<RowMajor>(x1.data(), n, d);
  return PreferenceDataset(std::move(m0), std::move(m1), std::move(y));
}

PreferenceDataset ReadDatasetJsonLines(std::istream& in) {
  std::string text;
  long line_no = 0;
  int d = -1;
  std::vector<double> x0, x1;
  std::vector<int> y;
  while (std::getline(in, text)) {
    ++line_no;
    if (IsBlank(text)) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(LinePrefix(line_no) + "invalid JSON: " + e.what());
    }
    if (!obj.is_object() || !obj.contains("y") || !obj.contains("x0") ||
        !obj.contains("x1")) {
      throw ParseError(LinePrefix(line_no) +
                       "expected an object with fields y, x0, x1");
    }
    const auto& jy = obj["y"];
    const auto& j0 = obj["x0"];
    const auto& j1 = obj["x1"];
    if (!jy.is_number() || !j0.is_array() || !j1.is_array()) {
      throw ParseError(LinePrefix(line_no) +
                       "y must be a number and x0, x1 arrays");
    }
    if (d < 0) d = static_cast<int>(j0.size());
    if (static_cast<int>(j0.size()) != d || static_cast<int>(j1.size()) != d) {
      throw ParseError(LinePrefix(line_no) + "expected x0 and x1 of length " +
                       std::to_string(d) + ", got " + std::to_string(j0.size()) +
                       " and " + std::to_string(j1.size()));
    }
    y.push_back(ParseLabel(jy.get<double>(), line_no));
    for (const auto* arr : {&j0, &j1}) {
      auto& dst = arr == &j0 ? x0 : x1;
      for (const auto& v : *arr) {
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
          throw ParseError(LinePrefix(line_no) +
                           "feature entries must be finite numbers");
        }
        dst.push_back(v.get<double>());
      }
    }
  }
  if (d < 0) d = 0;
  const auto n = static_cast<Eigen::Index>(y.size());
  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::MatrixXd m0 = Eigen::Map<RowMajor>(x0.data(), n, d);
  Eigen::MatrixXd m1 = Eigen::Map<RowMajor>(x1.data(), n, d);
  return PreferenceDataset(std::move(m0), std::move(m1), std::move(y));
}

PreferenceDataset ReadDataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file '" + path + "'");
  try {
    return FormatForPath(path) == DatasetFormat::kJsonLines
               ? ReadDatasetJsonLines(in)
               : ReadDatasetCsv(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void WriteDatasetCsv(const PreferenceDataset& dataset, std::ostream& out) {
  const int d = dataset.d();
  out << 'y';
  for (int j = 1; j <= d; ++j) out << ",x0_" << j;
  for (int j = 1; j <= d; ++j) out << ",x1_" << j;
  out << '\n';
  for (int i = 0; i < dataset.n(); ++i) {
    out << dataset.labels()[i];
    for (int j = 0; j < d; ++j) out << ',' << FormatDouble(dataset.x0()(i, j));
    for (int j = 0; j < d; ++j) out << ',' << FormatDouble(dataset.x1()(i, j));
    out << '\n';
  }
}

void WriteDatasetJsonLines(const PreferenceDataset& dataset, std::ostream& out) {
  const int d = dataset.d();
  for (int i = 0; i < dataset.n(); ++i) {
    out << "{\"y\":" << dataset.labels()[i] << ",\"x0\":[";
    for (int j = 0; j < d; ++j) {
      out << (j ? "," : "") << FormatDouble(dataset.x0()(i, j));
    }
    out << "],\"x1\":[";
    for (int j = 0; j < d; ++j) {
      out << (j ? "," : "") << FormatDouble(dataset.x1()(i, j));
    }
    out << "]}\n";
  }
}

void WriteDataset(const PreferenceDataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  if (FormatForPath(path) == DatasetFormat::kJsonLines) {
    WriteDatasetJsonLines(dataset, out);
  } else {
    WriteDatasetCsv(dataset, out);
  }
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace sparsepref
