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

#include "sparsepref/diagnostics.h"

#include <algorithm>
#include <cmath>

#include "sparsepref/error.h"

namespace sparsepref {
namespace {

constexpr double kProbClamp = 1e-15;

double Clamp(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

}  // namespace

double PairwiseKl(const Eigen::Ref<const Eigen::VectorXd>& theta1,
                  const Eigen::Ref<const Eigen::VectorXd>& theta2,
                  const PreferenceDataset& dataset, const Link& link,
                  double sigma, double B) {
  if (theta1.size() != dataset.d() || theta2.size() != dataset.d()) {
    throw ShapeError("parameter dimension does not match the dataset");
  }
  if (!(sigma > 0)) throw DomainError("sigma must be positive");
  if (theta1.norm() > B * (1 + 1e-12) || theta2.norm() > B * (1 + 1e-12)) {
    throw PreconditionError("KL divergence requires both parameters in the B-ball");
  }
  const Eigen::VectorXd t1 = dataset.differences() * theta1 / sigma;
  const Eigen::VectorXd t2 = dataset.differences() * theta2 / sigma;
  double kl = 0.0;
  for (int i = 0; i < dataset.n(); ++i) {
    const double p = Clamp(link.Eval(t1[i]));
    const double q = Clamp(link.Eval(t2[i]));
    kl += p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  }
  return std::max(kl, 0.0);
}

KlReport VerifyKlBound(const Eigen::Ref<const Eigen::VectorXd>& theta1,
                       const Eigen::Ref<const Eigen::VectorXd>& theta2,
                       const PreferenceDataset& dataset, const Link& link,
                       const ModelConstants& constants) {
  KlReport r;
  r.kl = PairwiseKl(theta1, theta2, dataset, link, constants.sigma, constants.B);
  const double s2 = constants.sigma * constants.sigma;
  r.bound = dataset.n() * constants.zeta / s2 *
            SeminormSq(dataset.gram(), theta1 - theta2);
  r.holds = r.kl <= r.bound + 1e-10;
  return r;
}

}  // namespace sparsepref
