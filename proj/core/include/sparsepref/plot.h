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

#ifndef SPARSEPREF_PLOT_H_
#define SPARSEPREF_PLOT_H_

#include <string>
#include <vector>

#include "sparsepref/experiment.h"

namespace sparsepref {

// Writes one standalone SVG per experiment kind present in `rows` into
// `out_dir` and returns the file paths:
//   sparsity_curve.svg  mean error against k/d, one line per estimator
//   rate_curve.svg      mean error against n on log-log axes
//   beta_contour.svg    heat map of mean error over (log10 n, log10 beta)
// Every plotted mean carries its exact value (17 significant digits) in a
// data-* attribute, computed from the rows in table order. Throws
// EmptyInputError for an empty table and IoError when a file cannot be
// written. Frozen-feature and diagnose rows are not plotted.
std::vector<std::string> EmitPlots(const std::vector<ResultRow>& rows,
                                   const std::string& out_dir);

}  // namespace sparsepref

#endif  // SPARSEPREF_PLOT_H_
