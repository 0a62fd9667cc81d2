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

#ifndef SPARSEPREF_LOSS_H_
#define SPARSEPREF_LOSS_H_

#include <Eigen/Core>

#include "sparsepref/data.h"
#include "sparsepref/model.h"

namespace sparsepref {

struct LossEval {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

// Negative log-likelihood
//   L(theta) = -(1/n) sum_i log F((-1)^{y_i} <theta, x0_i - x1_i> / sigma).
// Throws DomainError for non-finite theta or sigma <= 0, ShapeError on a
// dimension mismatch and EmptyInputError for an empty dataset.
double Nll(const Eigen::Ref<const Eigen::VectorXd>& theta,
           const PreferenceDataset& dataset, const Link& link, double sigma);

// Analytic gradient
//   -(1/(n sigma)) sum_i (-1)^{y_i} h(s_i) (x0_i - x1_i),  h = F'/F.
Eigen::VectorXd NllGradient(const Eigen::Ref<const Eigen::VectorXd>& theta,
                            const PreferenceDataset& dataset, const Link& link,
                            double sigma);

// Value and gradient from a single pass over the data.
LossEval EvaluateNll(const Eigen::Ref<const Eigen::VectorXd>& theta,
                     const PreferenceDataset& dataset, const Link& link,
                     double sigma);

// The support-restricted dataset: columns S of x0 and x1, labels unchanged.
// For theta supported on S, Nll(theta_S, Restrict(D, S)) = Nll(theta, D).
PreferenceDataset Restrict(const PreferenceDataset& dataset, const IndexSet& S);

struct StrongConvexityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// Bregman divergence of the NLL against its quadratic lower bound:
//   lhs = L(theta* + delta) - L(theta*) - <grad L(theta*), delta>
//   rhs = (gamma / sigma^2) ||delta||_Sigma^2
// holds iff lhs >= rhs - 1e-10. Requires ||theta* + delta||_2 <= B (and
// ||theta*||_2 <= B); throws PreconditionError otherwise.
StrongConvexityReport StrongConvexityCertificate(
    const Eigen::Ref<const Eigen::VectorXd>& theta_star,
    const Eigen::Ref<const Eigen::VectorXd>& delta,
    const PreferenceDataset& dataset, const Link& link, double sigma,
    double gamma, double B);

struct ScoreBoundReport {
  double max_abs_score = 0.0;
  bool holds = true;
  int samples_checked = 0;  // samples with |t_i| <= BL/sigma
};

// Per-sample score magnitude at theta for the realized label,
// F'(t)/F(t) for y = 0 and F'(t)/(1 - F(t)) for y = 1, with
// t = <theta, x0 - x1> / sigma. Only samples with |t| <= BL/sigma are
// compared against omega (+1e-9); max_abs_score is taken over those samples.
ScoreBoundReport ScoreBoundCheck(const Eigen::Ref<const Eigen::VectorXd>& theta,
                                 const PreferenceDataset& dataset,
                                 const Link& link,
                                 const ModelConstants& constants);

namespace internal {

// Validates (theta, dataset, sigma) for the NLL family.
void CheckNllArgs(const Eigen::Ref<const Eigen::VectorXd>& theta,
                  const PreferenceDataset& dataset, double sigma);

// NLL given the raw inner products X theta.
double NllFromInner(const Eigen::VectorXd& inner, const Eigen::VectorXd& signs,
                    const Link& link, double sigma);

// Per-sample gradient weights w with grad = X^T w, from X theta.
void GradientWeights(const Eigen::VectorXd& inner, const Eigen::VectorXd& signs,
                     const Link& link, double sigma, Eigen::VectorXd& weights);

}  // namespace internal
}  // namespace sparsepref

#endif  // SPARSEPREF_LOSS_H_
