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

#ifndef SPARSEPREF_ESTIMATORS_H_
#define SPARSEPREF_ESTIMATORS_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "sparsepref/data.h"
#include "sparsepref/index_set.h"
#include "sparsepref/model.h"

namespace sparsepref {

enum class StepRuleKind { kFixed, kBacktracking };

struct StepRule {
  StepRuleKind kind = StepRuleKind::kBacktracking;
  // Fixed step size, or the first trial step of the backtracking search.
  double initial_step = 1.0;
  // Backtracking shrink factor rho in (0, 1).
  double shrink = 0.5;

  static StepRule Fixed(double step) {
    return {StepRuleKind::kFixed, step, 0.5};
  }
  static StepRule Backtracking(double shrink = 0.5, double initial_step = 1.0) {
    return {StepRuleKind::kBacktracking, initial_step, shrink};
  }
};

struct EstimatorConfig {
  double B = 2.0;          // radius of the l2 parameter ball
  double beta = 0.0;       // l1 penalty weight
  int max_iter = 10000;
  double tol = 1e-10;      // relative objective change that ends the run
  StepRule step;

  // Throws DomainError unless B > 0, beta >= 0, max_iter >= 1, tol > 0 and
  // the step rule is well formed.
  void Validate() const;
};

struct EstimateReport {
  RewardParam theta_hat;
  // Penalized objective at the start point and after every accepted step.
  std::vector<double> objective_trace;
  bool converged = false;
  int iterations = 0;
  IndexSet support;
  double wall_time = 0.0;  // seconds

  double objective() const { return objective_trace.back(); }
};

// argmin_{||z||_2 <= B} (1/2)||z - v||^2 + threshold * ||z||_1:
// soft-threshold at `threshold`, then scale radially into the ball.
Eigen::VectorXd ProxL1Ball(const Eigen::Ref<const Eigen::VectorXd>& v,
                           double threshold, double B);

// Nll(theta) + beta * ||theta||_1.
double PenalizedObjective(const Eigen::Ref<const Eigen::VectorXd>& theta,
                          const PreferenceDataset& dataset, const Link& link,
                          double sigma, double beta);

// Maximum likelihood over the B-ball by projected gradient with
// backtracking. Requires config.beta == 0. Non-convergence is reported
// through converged = false, not by throwing.
EstimateReport FitMl(const PreferenceDataset& dataset, const Link& link,
                     double sigma, const EstimatorConfig& config);

// l1-regularized maximum likelihood over the B-ball by proximal gradient:
// gradient step on the NLL, soft-threshold at step * beta, radial
// projection. With backtracking the objective trace is non-increasing.
EstimateReport FitL1(const PreferenceDataset& dataset, const Link& link,
                     double sigma, const EstimatorConfig& config);

inline constexpr std::uint64_t kL0EnumerationCap = 100'000;

// l0-constrained maximum likelihood: solves the restricted ML problem on
// every support of size <= k and keeps the best (lowest objective, then
// lexicographically smallest support). Throws CapacityError when the number
// of supports exceeds `cap`.
EstimateReport FitL0(const PreferenceDataset& dataset, const Link& link,
                     double sigma, const EstimatorConfig& config, int k,
                     std::uint64_t cap = kL0EnumerationCap);

enum class BetaRule { kSlow, kFast, kPractical };

// slow:      sqrt(2) omega H / sigma * sqrt((log 2d + log 1/delta) / n)
// fast:      4 omega / sigma * sqrt((log 2d + log 1/delta) / n)
// practical: c / sqrt(n)
double BetaSchedule(BetaRule rule, long n, int d, double delta,
                    const ModelConstants& constants, double H, double c);

// ||theta_hat - theta*||_Sigma^2.
double EmpiricalError(const Eigen::Ref<const Eigen::VectorXd>& theta_hat,
                      const Eigen::Ref<const Eigen::VectorXd>& theta_star,
                      const Eigen::Ref<const Eigen::MatrixXd>& sigma);

// 0 iff <theta, x0> > <theta, x1>; exact ties give 1.
int Predict(const Eigen::Ref<const Eigen::VectorXd>& theta,
            const Eigen::Ref<const Eigen::VectorXd>& x0,
            const Eigen::Ref<const Eigen::VectorXd>& x1);

// Fraction of samples whose label Predict reproduces. EmptyInputError for
// an empty dataset.
double Accuracy(const Eigen::Ref<const Eigen::VectorXd>& theta,
                const PreferenceDataset& dataset);

}  // namespace sparsepref

#endif  // SPARSEPREF_ESTIMATORS_H_
