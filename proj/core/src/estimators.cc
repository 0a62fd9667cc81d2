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

#include "sparsepref/estimators.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "sparsepref/error.h"
#include "sparsepref/loss.h"

namespace sparsepref {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// Shared proximal-gradient loop; beta = 0 gives projected gradient.
EstimateReport ProximalGradient(const PreferenceDataset& dataset,
                                const Link& link, double sigma,
                                const EstimatorConfig& config) {
  const auto start = Clock::now();
  config.Validate();
  const int d = dataset.d();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d);
  internal::CheckNllArgs(zero, dataset, sigma);

  const Eigen::MatrixXd& X = dataset.differences();
  const Eigen::VectorXd& signs = dataset.label_signs();
  const double beta = config.beta;
  const bool backtrack = config.step.kind == StepRuleKind::kBacktracking;

  Eigen::VectorXd theta = zero;
  Eigen::VectorXd inner = Eigen::VectorXd::Zero(dataset.n());
  double smooth = internal::NllFromInner(inner, signs, link, sigma);
  double objective = smooth;

  EstimateReport report;
  report.objective_trace.push_back(objective);

  Eigen::VectorXd weights, grad, candidate, inner_candidate, step_dir;
  double step = config.step.initial_step;
  for (int it = 1; it <= config.max_iter; ++it) {
    internal::GradientWeights(inner, signs, link, sigma, weights);
    grad.noalias() = X.transpose() * weights;

    double smooth_candidate = 0.0;
    while (true) {
      candidate = ProxL1Ball(theta - step * grad, step * beta, config.B);
      inner_candidate.noalias() = X * candidate;
      smooth_candidate =
          internal::NllFromInner(inner_candidate, signs, link, sigma);
      if (!backtrack) break;
      step_dir = candidate - theta;
      const double model = smooth + grad.dot(step_dir) +
                           step_dir.squaredNorm() / (2.0 * step);
      if (smooth_candidate <= model + 1e-15 * std::abs(smooth)) break;
      step *= config.step.shrink;
      if (step < 1e-300) break;
    }

    const double next = smooth_candidate + beta * candidate.lpNorm<1>();
    if (backtrack && next > objective) {
      // Sufficient decrease makes this unreachable up to rounding: the
      // iterate is already a fixed point at working precision.
      report.converged = true;
      break;
    }
    const double change = std::abs(objective - next) /
                          std::max(std::abs(objective),
                                   std::numeric_limits<double>::min());
    theta.swap(candidate);
    inner.swap(inner_candidate);
    smooth = smooth_candidate;
    objective = next;
    report.objective_trace.push_back(objective);
    report.iterations = it;
    if (change < config.tol) {
      report.converged = true;
      break;
    }
  }

  report.theta_hat = RewardParam(std::move(theta));
  report.support = report.theta_hat.Support();
  report.wall_time = Seconds(start);
  return report;
}

}  // namespace

void EstimatorConfig::Validate() const {
  if (!(B > 0) || !std::isfinite(B)) throw DomainError("B must be positive");
  if (!(beta >= 0) || !std::isfinite(beta)) {
    throw DomainError("beta must be nonnegative");
  }
  if (max_iter < 1) throw DomainError("max_iter must be at least 1");
  if (!(tol > 0)) throw DomainError("tol must be positive");
  if (!(step.initial_step > 0) || !std::isfinite(step.initial_step)) {
    throw DomainError("step size must be positive");
  }
  if (step.kind == StepRuleKind::kBacktracking &&
      !(step.shrink > 0 && step.shrink < 1)) {
    throw DomainError("backtracking shrink factor must lie in (0, 1)");
  }
}

Eigen::VectorXd ProxL1Ball(const Eigen::Ref<const Eigen::VectorXd>& v,
                           double threshold, double B) {
  Eigen::VectorXd z =
      (v.array().abs() - threshold).max(0.0) * v.array().sign();
  const double norm = z.norm();
  if (norm > B) z *= B / norm;
  return z;
}

double PenalizedObjective(const Eigen::Ref<const Eigen::VectorXd>& theta,
                          const PreferenceDataset& dataset, const Link& link,
                          double sigma, double beta) {
  return Nll(theta, dataset, link, sigma) + beta * theta.lpNorm<1>();
}

EstimateReport FitMl(const PreferenceDataset& dataset, const Link& link,
                     double sigma, const EstimatorConfig& config) {
  if (config.beta != 0.0) {
    throw DomainError("FitMl requires beta = 0; use FitL1 for a penalty");
  }
  return ProximalGradient(dataset, link, sigma, config);
}

EstimateReport FitL1(const PreferenceDataset& dataset, const Link& link,
                     double sigma, const EstimatorConfig& config) {
  return ProximalGradient(dataset, link, sigma, config);
}

EstimateReport FitL0(const PreferenceDataset& dataset, const Link& link,
                     double sigma, const EstimatorConfig& config, int k,
                     std::uint64_t cap) {
  const auto start = Clock::now();
  config.Validate();
  if (k < 0) throw DomainError("sparsity k must be nonnegative");
  const int d = dataset.d();
  const int kk = std::min(k, d);
  const std::uint64_t supports = CountSubsets(d, 0, kk);
  if (supports > cap) {
    throw CapacityError("l0 estimator needs " + std::to_string(supports) +
                        " supports, above the cap of " + std::to_string(cap));
  }

  EstimatorConfig ml = config;
  ml.beta = 0.0;

  // Empty support: theta = 0.
  EstimateReport best;
  best.theta_hat = RewardParam::Zero(d);
  best.objective_trace = {Nll(Eigen::VectorXd::Zero(d), dataset, link, sigma)};
  best.converged = true;
  IndexSet best_set;

  for (int size = 1; size <= kk; ++size) {
    ForEachSubset(d, size, [&](const IndexSet& S) {
      EstimateReport r = FitMl(dataset.Restrict(S), link, sigma, ml);
      const double obj = r.objective();
      if (obj < best.objective() || (obj == best.objective() && S < best_set)) {
        Eigen::VectorXd full = Eigen::VectorXd::Zero(d);
        full(S.indices()) = r.theta_hat.values();
        best.theta_hat = RewardParam(std::move(full));
        best.objective_trace = std::move(r.objective_trace);
        best.converged = r.converged;
        best.iterations = r.iterations;
        best_set = S;
      }
      return true;
    });
  }
  best.support = best.theta_hat.Support();
  best.wall_time = Seconds(start);
  return best;
}

double BetaSchedule(BetaRule rule, long n, int d, double delta,
                    const ModelConstants& constants, double H, double c) {
  if (n < 1) throw DomainError("n must be at least 1");
  if (d < 1) throw DomainError("d must be at least 1");
  const double nn = static_cast<double>(n);
  if (rule == BetaRule::kPractical) {
    if (!(c > 0)) throw DomainError("practical beta constant c must be positive");
    return c / std::sqrt(nn);
  }
  if (!(delta > 0 && delta < 1)) {
    throw DomainError("failure probability delta must lie in (0, 1)");
  }
  const double rate =
      std::sqrt((std::log(2.0 * d) + std::log(1.0 / delta)) / nn);
  if (rule == BetaRule::kSlow) {
    return std::sqrt(2.0) * constants.omega * H / constants.sigma * rate;
  }
  return 4.0 * constants.omega / constants.sigma * rate;
}

double EmpiricalError(const Eigen::Ref<const Eigen::VectorXd>& theta_hat,
                      const Eigen::Ref<const Eigen::VectorXd>& theta_star,
                      const Eigen::Ref<const Eigen::MatrixXd>& sigma) {
  if (theta_hat.size() != theta_star.size()) {
    throw ShapeError("theta_hat and theta* must have equal length");
  }
  return SeminormSq(sigma, theta_hat - theta_star);
}

int Predict(const Eigen::Ref<const Eigen::VectorXd>& theta,
            const Eigen::Ref<const Eigen::VectorXd>& x0,
            const Eigen::Ref<const Eigen::VectorXd>& x1) {
  if (theta.size() != x0.size() || x0.size() != x1.size()) {
    throw ShapeError("Predict: theta, x0 and x1 must have equal length");
  }
  return theta.dot(x0) > theta.dot(x1) ? 0 : 1;
}

double Accuracy(const Eigen::Ref<const Eigen::VectorXd>& theta,
                const PreferenceDataset& dataset) {
  if (dataset.empty()) throw EmptyInputError("dataset has no samples");
  if (theta.size() != dataset.d()) {
    throw ShapeError("theta dimension does not match the dataset");
  }
  const Eigen::VectorXd r0 = dataset.x0() * theta;
  const Eigen::VectorXd r1 = dataset.x1() * theta;
  int correct = 0;
  for (int i = 0; i < dataset.n(); ++i) {
    const int pred = r0[i] > r1[i] ? 0 : 1;
    correct += pred == dataset.labels()[i];
  }
  return static_cast<double>(correct) / dataset.n();
}

}  // namespace sparsepref
