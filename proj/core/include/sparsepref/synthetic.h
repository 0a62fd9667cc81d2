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

#ifndef SPARSEPREF_SYNTHETIC_H_
#define SPARSEPREF_SYNTHETIC_H_

#include <cstdint>

#include <Eigen/Core>

#include "sparsepref/data.h"
#include "sparsepref/model.h"
#include "sparsepref/rng.h"

namespace sparsepref {

struct SyntheticSpec {
  int d = 100;
  int k = 5;
  int n = 100;
  double sigma = 0.1;
  LinkKind link = LinkKind::kBtl;
  std::uint64_t seed = 0;

  // Throws DomainError unless 1 <= k <= d, n >= 1 and sigma > 0.
  void Validate() const;
};

// k coordinates chosen uniformly without replacement, filled with standard
// Gaussian draws (exact zeros are redrawn), then scaled to unit l2 norm.
RewardParam GenThetaStar(int d, int k, Rng& rng);

struct FeaturePairs {
  Eigen::MatrixXd x0;  // n x d, entries U[0, 1]
  Eigen::MatrixXd x1;
};

// 2n independent U([0,1]^d) vectors, drawn row by row (x0_i then x1_i).
FeaturePairs GenFeatures(int n, int d, Rng& rng);

struct SyntheticData {
  RewardParam theta_star;
  PreferenceDataset dataset;
};

// theta*, then features, then labels from the RUM, all from one generator
// seeded with spec.seed.
SyntheticData GenDataset(const SyntheticSpec& spec);

}  // namespace sparsepref

#endif  // SPARSEPREF_SYNTHETIC_H_
