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

#include "sparsepref/config.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>

#include "json.hpp"

#include "sparsepref/error.h"

namespace sparsepref {
namespace {

using nlohmann::json;

std::string Scalar(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned() || v.is_number_float()) {
    return v.dump();
  }
  throw ParseError("config key '" + key + "': unsupported value " + v.dump());
}

void Flatten(const json& node, const std::string& prefix, ConfigMap& out) {
  for (const auto& [name, value] : node.items()) {
    const std::string key = prefix.empty() ? name : prefix + "." + name;
    if (value.is_object()) {
      Flatten(value, key, out);
    } else if (value.is_array()) {
      std::string joined;
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) joined += ',';
        joined += Scalar(value[i], key);
      }
      out[key] = joined;
    } else {
      out[key] = Scalar(value, key);
    }
  }
}

[[noreturn]] void Bad(const std::string& key, const std::string& value,
                      const std::string& what) {
  throw ParseError("config key '" + key + "': cannot parse '" + value +
                   "' as " + what);
}

std::vector<std::string> Split(const std::string& s) {
  std::vector<std::string> parts;
  if (s.empty()) return parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    std::string part = s.substr(start, comma - start);
    const auto b = part.find_first_not_of(" \t");
    const auto e = part.find_last_not_of(" \t");
    parts.push_back(b == std::string::npos ? "" : part.substr(b, e - b + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return parts;
}

double ToDouble(const std::string& key, const std::string& s) {
  if (s.empty()) Bad(key, s, "a number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) Bad(key, s, "a number");
  return v;
}

template <typename Int>
Int ToInt(const std::string& key, const std::string& s) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) Bad(key, s, "an integer");
  return v;
}

bool ToBool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  Bad(key, s, "true or false");
}

template <typename T, typename Fn>
std::vector<T> ToList(const std::string& key, const std::string& s, Fn parse) {
  std::vector<T> out;
  for (const auto& part : Split(s)) out.push_back(parse(key, part));
  return out;
}

Range ToRange(const std::string& key, const std::string& s) {
  const auto v = ToList<double>(key, s, ToDouble);
  if (v.size() != 3) Bad(key, s, "lo,hi,step");
  return {v[0], v[1], v[2]};
}

using Setter = std::function<void(const std::string&, const std::string&,
                                  ExperimentSpec&)>;

struct Entry {
  ConfigKey key;
  Setter set;
};

const std::vector<Entry>& Entries() {
  static const std::vector<Entry> entries = {
      {{"kind", "experiment kind"},
       [](auto&, auto& v, auto& s) { s.kind = ParseKind(v); }},
      {{"d", "parameter dimension"},
       [](auto& k, auto& v, auto& s) { s.d = ToInt<int>(k, v); }},
      {{"link", "btl or tm"},
       [](auto&, auto& v, auto& s) { s.link = ParseLinkKind(v); }},
      {{"B", "radius of the parameter ball"},
       [](auto& k, auto& v, auto& s) { s.B = ToDouble(k, v); }},
      {{"repetitions", "trials per grid point"},
       [](auto& k, auto& v, auto& s) { s.repetitions = ToInt<int>(k, v); }},
      {{"seed", "base seed"},
       [](auto& k, auto& v, auto& s) { s.base_seed = ToInt<std::uint64_t>(k, v); }},
      {{"out", "output CSV path"},
       [](auto&, auto& v, auto& s) { s.output_path = v; }},
      {{"threads", "worker threads"},
       [](auto& k, auto& v, auto& s) { s.threads = ToInt<int>(k, v); }},
      {{"estimators", "subset of ml,l1,l0"},
       [](auto&, auto& v, auto& s) {
         s.estimators.clear();
         for (const auto& part : Split(v)) s.estimators.push_back(ParseEstimator(part));
       }},
      {{"record_time", "fill wall_time_s (breaks byte-reproducibility)"},
       [](auto& k, auto& v, auto& s) { s.record_time = ToBool(k, v); }},
      {{"grid.n", "sample sizes"},
       [](auto& k, auto& v, auto& s) { s.grid.n = ToList<long>(k, v, ToInt<long>); }},
      {{"grid.k", "sparsity levels"},
       [](auto& k, auto& v, auto& s) { s.grid.k = ToList<int>(k, v, ToInt<int>); }},
      {{"grid.sigma", "noise scales"},
       [](auto& k, auto& v, auto& s) { s.grid.sigma = ToList<double>(k, v, ToDouble); }},
      {{"grid.beta", "l1 weights (empty: c / sqrt(n))"},
       [](auto& k, auto& v, auto& s) { s.grid.beta = ToList<double>(k, v, ToDouble); }},
      {{"grid.c", "constant in beta = c / sqrt(n)"},
       [](auto& k, auto& v, auto& s) { s.grid.c = ToDouble(k, v); }},
      {{"contour.log10_n", "lo,hi,step of log10 n"},
       [](auto& k, auto& v, auto& s) { s.log10_n = ToRange(k, v); }},
      {{"contour.log10_beta", "lo,hi,step of log10 beta"},
       [](auto& k, auto& v, auto& s) { s.log10_beta = ToRange(k, v); }},
      {{"solver.max_iter", "iteration cap"},
       [](auto& k, auto& v, auto& s) { s.max_iter = ToInt<int>(k, v); }},
      {{"solver.tol", "relative objective tolerance"},
       [](auto& k, auto& v, auto& s) { s.tol = ToDouble(k, v); }},
      {{"frozen.train", "training embedding file"},
       [](auto&, auto& v, auto& s) { s.train_path = v; }},
      {{"frozen.test", "test embedding file"},
       [](auto&, auto& v, auto& s) { s.test_path = v; }},
      {{"frozen.sigma", "noise scale used when fitting"},
       [](auto& k, auto& v, auto& s) { s.fit_sigma = ToDouble(k, v); }},
      {{"diagnose.data", "dataset file (empty: synthetic)"},
       [](auto&, auto& v, auto& s) { s.data_path = v; }},
      {{"diagnose.pairs", "random pairs in the KL sweep"},
       [](auto& k, auto& v, auto& s) { s.kl_pairs = ToInt<int>(k, v); }},
      {{"diagnose.trials", "restricted-eigenvalue search trials"},
       [](auto& k, auto& v, auto& s) { s.re_trials = ToInt<int>(k, v); }},
      {{"diagnose.B", "B of the constants table"},
       [](auto& k, auto& v, auto& s) { s.constants_B = ToDouble(k, v); }},
      {{"diagnose.L", "L of the constants table"},
       [](auto& k, auto& v, auto& s) { s.constants_L = ToDouble(k, v); }},
      {{"diagnose.sigma", "sigma of the constants table"},
       [](auto& k, auto& v, auto& s) { s.constants_sigma = ToDouble(k, v); }},
  };
  return entries;
}

}  // namespace

const std::vector<ConfigKey>& ConfigKeys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& e : Entries()) out.push_back(e.key);
    return out;
  }();
  return keys;
}

ConfigMap ParseConfig(std::istream& in) {
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("config: top level must be an object");
  ConfigMap out;
  Flatten(root, "", out);
  return out;
}

ConfigMap LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  try {
    return ParseConfig(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void ApplyConfig(const ConfigMap& config, ExperimentSpec& spec) {
  for (const auto& [key, value] : config) {
    const auto& entries = Entries();
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const Entry& e) { return e.key.name == key; });
    if (it == entries.end()) throw ParseError("unknown config key '" + key + "'");
    try {
      it->set(key, value, spec);
    } catch (const Error& e) {
      const std::string what = e.what();
      if (what.rfind("config key", 0) == 0) throw;
      throw ParseError("config key '" + key + "': " + what);
    }
  }
}

}  // namespace sparsepref
