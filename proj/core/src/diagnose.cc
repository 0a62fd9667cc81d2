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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sparsepref/dataset_io.h"
#include "sparsepref/diagnostics.h"
#include "sparsepref/error.h"
#include "sparsepref/experiment.h"
#include "sparsepref/synthetic.h"

namespace sparsepref {
namespace {

class Report {
 public:
  void Add(const std::string& check, const std::string& detail, double value,
           std::optional<bool> pass) {
    csv_ << check << ',' << detail << ',' << FormatDouble(value) << ','
         << (pass ? (*pass ? "true" : "false") : "") << '\n';
    if (pass && !*pass) all_pass_ = false;
  }
  std::string Csv() const { return "check,detail,value,pass\n" + csv_.str(); }
  bool all_pass() const { return all_pass_; }

 private:
  std::ostringstream csv_;
  bool all_pass_ = true;
};

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

Eigen::VectorXd RandomInBall(int d, double radius, Rng& rng) {
  Eigen::VectorXd v(d);
  for (int j = 0; j < d; ++j) v[j] = rng.Normal();
  const double norm = v.norm();
  if (norm == 0.0) return Eigen::VectorXd::Zero(d);
  return v * (radius * std::pow(rng.Uniform(), 1.0 / d) / norm);
}

}  // namespace

DiagnoseResult RunDiagnose(const ExperimentSpec& spec,
                           const std::optional<PreferenceDataset>& dataset) {
  if (!(spec.constants_B > 0) || !(spec.constants_L > 0) ||
      !(spec.constants_sigma > 0)) {
    throw DomainError("diagnose constants B, L and sigma must be positive");
  }
  if (spec.kl_pairs < 0 || spec.re_trials < 0) {
    throw DomainError("diagnose pair and trial counts must be nonnegative");
  }
  const int k = spec.grid.k.empty() ? 1 : spec.grid.k.front();
  if (k < 1) throw DomainError("diagnose sparsity k must be at least 1");

  PreferenceDataset data;
  if (dataset) {
    data = *dataset;
  } else {
    SyntheticSpec syn;
    syn.d = spec.d;
    syn.k = k;
    syn.n = spec.grid.n.empty() ? 200 : static_cast<int>(spec.grid.n.front());
    syn.sigma = spec.grid.sigma.empty() ? 1.0 : spec.grid.sigma.front();
    syn.link = spec.link;
    syn.seed = spec.base_seed;
    data = GenDataset(syn).dataset;
  }
  if (data.empty()) throw EmptyInputError("diagnose needs a nonempty dataset");

  Report report;
  std::ostringstream text;

  text << "Model constants at B=" << spec.constants_B
       << ", L=" << spec.constants_L << ", sigma=" << spec.constants_sigma
       << "\n  link   zeta      gamma     omega\n";
  for (LinkKind kind : {LinkKind::kBtl, LinkKind::kTm}) {
    const ModelConstants c = ModelConstants::Compute(
        Link(kind), spec.constants_B, spec.constants_L, spec.constants_sigma);
    const std::string name(LinkName(kind));
    text << "  " << name << std::string(7 - name.size(), ' ')
         << Fmt("%-10.4f", c.zeta) << Fmt("%-10.4f", c.gamma)
         << Fmt("%.4f", c.omega) << '\n';
    report.Add("constants", name + ".zeta", c.zeta, std::nullopt);
    report.Add("constants", name + ".gamma", c.gamma, std::nullopt);
    report.Add("constants", name + ".omega", c.omega, std::nullopt);
  }

  text << "\nDataset: n=" << data.n() << ", d=" << data.d() << ", k=" << k
       << '\n';
  const Eigen::MatrixXd& sigma = data.gram();

  const SubmatrixReport sub = CheckSubmatrixNonsingularity(data, k);
  text << "  submatrix nonsingularity: " << (sub.pass ? "pass" : "FAIL")
       << " (" << sub.subsets_checked << " subsets, smallest singular value "
       << Fmt("%.3g", sub.worst_sigma_min) << " on "
       << sub.worst_set.ToString() << ")\n";
  report.Add("submatrix_nonsingularity", sub.worst_set.ToString(),
             sub.worst_sigma_min, sub.pass);

  const bool incoherent = CheckIncoherence(sigma, k);
  const double max_dev =
      (sigma - Eigen::MatrixXd::Identity(data.d(), data.d())).cwiseAbs().maxCoeff();
  text << "  incoherence: " << (incoherent ? "pass" : "FAIL")
       << " (max |Sigma - I| = " << Fmt("%.3g", max_dev) << ", limit "
       << Fmt("%.3g", 1.0 / (32.0 * k)) << ")\n";
  report.Add("incoherence", "max_abs_deviation", max_dev, incoherent);

  Rng rng(HashSeed({spec.base_seed, 0x6469616730ULL}));
  Rng re_rng = rng.Substream({1});
  const RestrictedEigenvalueReport re =
      RefuteRestrictedEigenvalue(sigma, k, spec.re_trials, re_rng);
  text << "  restricted eigenvalue: "
       << (re.refuted ? "REFUTED on " + re.witness_set.ToString()
                      : std::string("not refuted"))
       << " (min ratio found " << Fmt("%.3g", re.min_ratio_found) << ", "
       << spec.re_trials << " trials)\n";
  report.Add("restricted_eigenvalue",
             re.refuted ? re.witness_set.ToString() : "min_ratio",
             re.min_ratio_found, !re.refuted);

  // KL sweep with L taken from the data so the bound's premise holds.
  double L = 0.0;
  for (int i = 0; i < data.n(); ++i) {
    L = std::max(L, data.differences().row(i).norm());
  }
  if (L == 0.0) L = spec.constants_L;
  const Link link(spec.link);
  const ModelConstants kl_constants =
      ModelConstants::Compute(link, spec.constants_B, L, spec.constants_sigma);
  Rng kl_rng = rng.Substream({2});
  int violations = 0;
  double worst_ratio = 0.0;
  for (int p = 0; p < spec.kl_pairs; ++p) {
    const Eigen::VectorXd a = RandomInBall(data.d(), spec.constants_B, kl_rng);
    const Eigen::VectorXd b = RandomInBall(data.d(), spec.constants_B, kl_rng);
    const KlReport kl = VerifyKlBound(a, b, data, link, kl_constants);
    if (!kl.holds) ++violations;
    if (kl.bound > 0) worst_ratio = std::max(worst_ratio, kl.kl / kl.bound);
  }
  text << "  KL bound (" << LinkName(spec.link) << ", L=" << Fmt("%.4g", L)
       << "): " << (violations == 0 ? "pass" : "FAIL") << " on "
       << spec.kl_pairs << " pairs, " << violations
       << " violations, max KL/bound " << Fmt("%.3g", worst_ratio) << '\n';
  report.Add("kl_bound", std::string(LinkName(spec.link)) + ".max_ratio",
             worst_ratio, violations == 0);

  DiagnoseResult result;
  result.summary = text.str();
  result.csv = report.Csv();
  result.all_pass = report.all_pass();
  return result;
}

}  // namespace sparsepref
