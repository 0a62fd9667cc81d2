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

#include "sparsepref/synthetic.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "sparsepref/error.h"

namespace sparsepref {

void SyntheticSpec::Validate() const {
  if (d < 1) throw DomainError("dimension d must be at least 1");
  if (k < 1 || k > d) throw DomainError("sparsity must satisfy 1 <= k <= d");
  if (n < 1) throw DomainError("sample count n must be at least 1");
  if (!(sigma > 0) || !std::isfinite(sigma)) {
    throw DomainError("sigma must be positive and finite");
  }
}

RewardParam GenThetaStar(int d, int k, Rng& rng) {
  if (d < 1 || k < 1 || k > d) {
    throw DomainError("GenThetaStar needs 1 <= k <= d");
  }
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  for (int j = 0; j < k; ++j) {
    std::swap(perm[j], perm[j + rng.Index(d - j)]);
  }
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
  for (int j = 0; j < k; ++j) {
    double v = 0.0;
    while (v == 0.0) v = rng.Normal();
    theta[perm[j]] = v;
  }
  theta /= theta.norm();
  return RewardParam(std::move(theta));
}

FeaturePairs GenFeatures(int n, int d, Rng& rng) {
  if (n < 1) throw DomainError("GenFeatures needs n >= 1");
  if (d < 1) throw DomainError("GenFeatures needs d >= 1");
  FeaturePairs f{Eigen::MatrixXd(n, d), Eigen::MatrixXd(n, d)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) f.x0(i, j) = rng.Uniform();
    for (int j = 0; j < d; ++j) f.x1(i, j) = rng.Uniform();
  }
  return f;
}

SyntheticData GenDataset(const SyntheticSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  RewardParam theta = GenThetaStar(spec.d, spec.k, rng);
  FeaturePairs f = GenFeatures(spec.n, spec.d, rng);
  const Link link(spec.link);
  const Eigen::VectorXd inner = (f.x0 - f.x1) * theta.values();
  std::vector<int> labels(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    labels[i] = rng.Uniform() < link.Eval(inner[i] / spec.sigma) ? 0 : 1;
  }
  return {std::move(theta),
          PreferenceDataset(std::move(f.x0), std::move(f.x1), std::move(labels))};
}

}  // namespace sparsepref
