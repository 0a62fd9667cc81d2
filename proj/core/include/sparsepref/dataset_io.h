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

#ifndef SPARSEPREF_DATASET_IO_H_
#define SPARSEPREF_DATASET_IO_H_

#include <iosfwd>
#include <string>

#include "sparsepref/data.h"

namespace sparsepref {

// On-disk dataset formats.
//
// CSV: header `y,x0_1,...,x0_d,x1_1,...,x1_d`, one sample per row.
// JSON lines: one object per line, {"y": 0, "x0": [...], "x1": [...]}.
//
// Readers throw ParseError naming the 1-based line number for malformed
// content and IoError when a path cannot be opened.
enum class DatasetFormat { kCsv, kJsonLines };

// .jsonl / .json / .ndjson select JSON lines; anything else is CSV.
DatasetFormat FormatForPath(const std::string& path);

PreferenceDataset ReadDatasetCsv(std::istream& in);
PreferenceDataset ReadDatasetJsonLines(std::istream& in);
PreferenceDataset ReadDataset(const std::string& path);

// Floats are written with 17 significant digits so a round trip is exact.
void WriteDatasetCsv(const PreferenceDataset& dataset, std::ostream& out);
void WriteDatasetJsonLines(const PreferenceDataset& dataset, std::ostream& out);
void WriteDataset(const PreferenceDataset& dataset, const std::string& path);

// Shortest-exact decimal rendering used by every CSV writer in the library.
std::string FormatDouble(double v);

}  // namespace sparsepref

#endif  // SPARSEPREF_DATASET_IO_H_
