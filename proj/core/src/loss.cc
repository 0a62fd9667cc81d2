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

#include "sparsepref/loss.h"

#include <cmath>
#include <string>

#include "sparsepref/error.h"

namespace sparsepref {
namespace internal {

void CheckNllArgs(const Eigen::Ref<const Eigen::VectorXd>& theta,
                  const PreferenceDataset& dataset, double sigma) {
  if (!(sigma > 0) || !std::isfinite(sigma)) {
    throw DomainError("sigma must be positive and finite");
  }
  if (theta.size() != dataset.d()) {
    throw ShapeError("theta has " + std::to_string(theta.size()) +
                     " entries, dataset dimension is " +
                     std::to_string(dataset.d()));
  }
  if (!theta.allFinite()) throw DomainError("theta has non-finite entries");
  if (dataset.empty()) throw EmptyInputError("dataset has no samples");
}

double NllFromInner(const Eigen::VectorXd& inner, const Eigen::VectorXd& signs,
                    const Link& link, double sigma) {
  const Eigen::Index n = inner.size();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    sum -= link.LogEval(signs[i] * inner[i] / sigma);
  }
  return sum / static_cast<double>(n);
}

void GradientWeights(const Eigen::VectorXd& inner, const Eigen::VectorXd& signs,
                     const Link& link, double sigma, Eigen::VectorXd& weights) {
  const Eigen::Index n = inner.size();
  weights.resize(n);
  const double scale = -1.0 / (static_cast<double>(n) * sigma);
  for (Eigen::Index i = 0; i < n; ++i) {
    weights[i] = scale * signs[i] * link.Hazard(signs[i] * inner[i] / sigma);
  }
}

}  // namespace internal

double Nll(const Eigen::Ref<const Eigen::VectorXd>& theta,
           const PreferenceDataset& dataset, const Link& link, double sigma) {
  internal::CheckNllArgs(theta, dataset, sigma);
  const Eigen::VectorXd inner = dataset.differences() * theta;
  return internal::NllFromInner(inner, dataset.label_signs(), link, sigma);
}

Eigen::VectorXd NllGradient(const Eigen::Ref<const Eigen::VectorXd>& theta,
                            const PreferenceDataset& dataset, const Link& link,
                            double sigma) {
  return EvaluateNll(theta, dataset, link, sigma).gradient;
}

LossEval EvaluateNll(const Eigen::Ref<const Eigen::VectorXd>& theta,
                     const PreferenceDataset& dataset, const Link& link,
                     double sigma) {
  internal::CheckNllArgs(theta, dataset, sigma);
  const Eigen::VectorXd inner = dataset.differences() * theta;
  LossEval out;
  out.value = internal::NllFromInner(inner, dataset.label_signs(), link, sigma);
  Eigen::VectorXd w;
  internal::GradientWeights(inner, dataset.label_signs(), link, sigma, w);
  out.gradient = dataset.differences().transpose() * w;
  return out;
}

PreferenceDataset Restrict(const PreferenceDataset& dataset, const IndexSet& S) {
  return dataset.Restrict(S);
}

StrongConvexityReport StrongConvexityCertificate(
    const Eigen::Ref<const Eigen::VectorXd>& theta_star,
    const Eigen::Ref<const Eigen::VectorXd>& delta,
    const PreferenceDataset& dataset, const Link& link, double sigma,
    double gamma, double B) {
  if (theta_star.size() != delta.size()) {
    throw ShapeError("theta* and delta must have equal length");
  }
  constexpr double kBallSlack = 1e-12;
  const Eigen::VectorXd moved = theta_star + delta;
  if (theta_star.norm() > B + kBallSlack || moved.norm() > B + kBallSlack) {
    throw PreconditionError(
        "strong convexity certificate requires theta* and theta* + delta in "
        "the B-ball");
  }
  const LossEval base = EvaluateNll(theta_star, dataset, link, sigma);
  StrongConvexityReport r;
  r.lhs = Nll(moved, dataset, link, sigma) - base.value - base.gradient.dot(delta);
  r.rhs = gamma / (sigma * sigma) * SeminormSq(dataset.gram(), delta);
  r.holds = r.lhs >= r.rhs - 1e-10;
  return r;
}

ScoreBoundReport ScoreBoundCheck(const Eigen::Ref<const Eigen::VectorXd>& theta,
                                 const PreferenceDataset& dataset,
                                 const Link& link,
                                 const ModelConstants& constants) {
  internal::CheckNllArgs(theta, dataset, constants.sigma);
  const Eigen::VectorXd inner = dataset.differences() * theta;
  const double t_max = constants.MaxMargin();
  ScoreBoundReport r;
  for (int i = 0; i < dataset.n(); ++i) {
    const double t = inner[i] / constants.sigma;
    if (std::abs(t) > t_max * (1.0 + 1e-12)) continue;
    // F'(t)/(1 - F(t)) = F'(-t)/F(-t) by symmetry of F.
    const double score =
        dataset.labels()[i] == 0 ? link.Hazard(t) : link.Hazard(-t);
    ++r.samples_checked;
    r.max_abs_score = std::max(r.max_abs_score, std::abs(score));
  }
  r.holds = r.max_abs_score <= constants.omega + 1e-9;
  return r;
}

}  // namespace sparsepref
