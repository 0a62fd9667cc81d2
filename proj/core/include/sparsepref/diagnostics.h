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

#ifndef SPARSEPREF_DIAGNOSTICS_H_
#define SPARSEPREF_DIAGNOSTICS_H_

#include <Eigen/Core>

#include "sparsepref/data.h"
#include "sparsepref/model.h"

namespace sparsepref {

struct KlReport {
  double kl = 0.0;
  double bound = 0.0;
  bool holds = true;
};

// KL divergence between the n-fold product Bernoulli label laws under theta1
// and theta2 (fixed design):
//   sum_i p_i log(p_i / q_i) + (1 - p_i) log((1 - p_i) / (1 - q_i)),
// p_i, q_i the label-0 probabilities. Probabilities are clamped to
// [1e-15, 1 - 1e-15]. Both parameters must lie in the B-ball
// (PreconditionError otherwise).
double PairwiseKl(const Eigen::Ref<const Eigen::VectorXd>& theta1,
                  const Eigen::Ref<const Eigen::VectorXd>& theta2,
                  const PreferenceDataset& dataset, const Link& link,
                  double sigma, double B);

// Checks KL <= (n zeta / sigma^2) ||theta1 - theta2||_Sigma^2 (+1e-10) with
// sigma, B and zeta taken from `constants`.
KlReport VerifyKlBound(const Eigen::Ref<const Eigen::VectorXd>& theta1,
                       const Eigen::Ref<const Eigen::VectorXd>& theta2,
                       const PreferenceDataset& dataset, const Link& link,
                       const ModelConstants& constants);

}  // namespace sparsepref

#endif  // SPARSEPREF_DIAGNOSTICS_H_
