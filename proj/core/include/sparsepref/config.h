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

#ifndef SPARSEPREF_CONFIG_H_
#define SPARSEPREF_CONFIG_H_

#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sparsepref/experiment.h"

namespace sparsepref {

// Flat view of a configuration: dotted key -> textual value. Lists are
// comma-separated ("100,200,400").
using ConfigMap = std::map<std::string, std::string>;

struct ConfigKey {
  std::string_view name;
  std::string_view help;
};

// Every key understood by ApplyConfig, e.g. "grid.n", "solver.tol".
const std::vector<ConfigKey>& ConfigKeys();

// Parses a JSON object with nested sections into dotted keys:
//   {"grid": {"n": [100, 200]}, "seed": 3}  ->  grid.n=100,200  seed=3
// Throws ParseError on malformed input.
ConfigMap ParseConfig(std::istream& in);
// As above, reading `path`. IoError when it cannot be opened; parse errors
// carry the path.
ConfigMap LoadConfigFile(const std::string& path);

// Overwrites the spec fields named in `config`. Unknown keys and malformed
// values throw ParseError naming the key.
void ApplyConfig(const ConfigMap& config, ExperimentSpec& spec);

}  // namespace sparsepref

#endif  // SPARSEPREF_CONFIG_H_
