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

#include "sparsepref/data.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "sparsepref/error.h"

namespace sparsepref {

// IndexSet helpers -----------------------------------------------------------

std::uint64_t CountSubsets(int dim, int min_size, int max_size) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  for (int s = std::max(min_size, 0); s <= std::min(max_size, dim); ++s) {
    // C(dim, s) built incrementally. After dividing out gcd(c, i + 1) the
    // rest of (i + 1) divides (dim - i), so every step is exact.
    std::uint64_t c = 1;
    for (int i = 0; i < s; ++i) {
      const std::uint64_t den = static_cast<std::uint64_t>(i + 1);
      const std::uint64_t g = std::gcd(c, den);
      const std::uint64_t m = static_cast<std::uint64_t>(dim - i) / (den / g);
      c /= g;
      if (m != 0 && c > kMax / m) return kMax;
      c *= m;
    }
    if (total > kMax - c) return kMax;
    total += c;
  }
  return total;
}

void ForEachSubset(int dim, int size,
                   const std::function<bool(const IndexSet&)>& visit) {
  if (size < 0 || size > dim) return;
  std::vector<int> idx(size);
  for (int i = 0; i < size; ++i) idx[i] = i;
  while (true) {
    if (!visit(IndexSet::Make(idx, dim))) return;
    int i = size - 1;
    while (i >= 0 && idx[i] == dim - size + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// PreferenceDataset ----------------------------------------------------------

PreferenceDataset::PreferenceDataset(Eigen::MatrixXd x0, Eigen::MatrixXd x1,
                                     std::vector<int> labels)
    : x0_(std::move(x0)), x1_(std::move(x1)), labels_(std::move(labels)) {
  if (x0_.rows() != x1_.rows() || x0_.cols() != x1_.cols()) {
    throw ShapeError("x0 and x1 must have the same shape");
  }
  if (static_cast<Eigen::Index>(labels_.size()) != x0_.rows()) {
    throw ShapeError("label count " + std::to_string(labels_.size()) +
                     " does not match sample count " +
                     std::to_string(x0_.rows()));
  }
  if (!x0_.allFinite() || !x1_.allFinite()) {
    throw DomainError("feature vectors must be finite");
  }
  signs_.resize(n());
  for (int i = 0; i < n(); ++i) {
    if (labels_[i] != 0 && labels_[i] != 1) {
      throw DomainError("label of sample " + std::to_string(i) +
                        " must be 0 or 1");
    }
    signs_[i] = labels_[i] == 0 ? 1.0 : -1.0;
  }
  diff_ = x0_ - x1_;
  if (n() > 0) {
    gram_ = Eigen::MatrixXd::Zero(d(), d());
    gram_.selfadjointView<Eigen::Lower>().rankUpdate(diff_.transpose(),
                                                     1.0 / n());
    gram_.triangularView<Eigen::StrictlyUpper>() = gram_.transpose();
  }
}

PreferenceDataset PreferenceDataset::FromSamples(
    const std::vector<PreferenceSample>& samples, int dim) {
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd x0(n, dim);
  Eigen::MatrixXd x1(n, dim);
  std::vector<int> y(samples.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[i];
    if (s.x0.size() != dim || s.x1.size() != dim) {
      throw ShapeError("sample " + std::to_string(i) + " has dimension " +
                       std::to_string(s.x0.size()) + "/" +
                       std::to_string(s.x1.size()) + ", expected " +
                       std::to_string(dim));
    }
    x0.row(i) = s.x0.transpose();
    x1.row(i) = s.x1.transpose();
    y[i] = s.y;
  }
  return PreferenceDataset(std::move(x0), std::move(x1), std::move(y));
}

const Eigen::MatrixXd& PreferenceDataset::gram() const {
  if (empty()) throw EmptyInputError("dataset has no samples");
  return gram_;
}

PreferenceSample PreferenceDataset::sample(int i) const {
  return {x0_.row(i).transpose(), x1_.row(i).transpose(), labels_[i]};
}

PreferenceDataset PreferenceDataset::Restrict(const IndexSet& S) const {
  if (S.empty()) throw IndexError("restriction to an empty index set");
  if (S.indices().back() >= d()) {
    throw IndexError("index " + std::to_string(S.indices().back()) +
                     " outside [0, " + std::to_string(d()) + ")");
  }
  return PreferenceDataset(x0_(Eigen::all, S.indices()),
                           x1_(Eigen::all, S.indices()), labels_);
}

// Matrix functionals ---------------------------------------------------------

const Eigen::MatrixXd& Gram(const PreferenceDataset& dataset) {
  return dataset.gram();
}

double SeminormSq(const Eigen::Ref<const Eigen::MatrixXd>& sigma,
                  const Eigen::Ref<const Eigen::VectorXd>& theta) {
  if (sigma.rows() != sigma.cols() || sigma.cols() != theta.size()) {
    throw ShapeError("SeminormSq: Sigma is " + std::to_string(sigma.rows()) +
                     "x" + std::to_string(sigma.cols()) + ", theta has " +
                     std::to_string(theta.size()) + " entries");
  }
  return std::max(theta.dot(sigma * theta), 0.0);
}

double ColumnBoundH(const PreferenceDataset& dataset) {
  if (dataset.empty()) throw EmptyInputError("dataset has no samples");
  if (dataset.d() == 0) return 0.0;
  return dataset.differences().colwise().norm().maxCoeff() /
         std::sqrt(static_cast<double>(dataset.n()));
}

Eigen::MatrixXd PrincipalSubmatrix(const PreferenceDataset& dataset,
                                   const IndexSet& S) {
  if (dataset.empty()) throw EmptyInputError("dataset has no samples");
  if (S.empty()) throw IndexError("principal submatrix of an empty index set");
  if (S.indices().back() >= dataset.d()) {
    throw IndexError("index " + std::to_string(S.indices().back()) +
                     " outside [0, " + std::to_string(dataset.d()) + ")");
  }
  const Eigen::MatrixXd xs = dataset.differences()(Eigen::all, S.indices());
  return (xs.transpose() * xs) / dataset.n();
}

SubmatrixReport CheckSubmatrixNonsingularity(const PreferenceDataset& dataset,
                                             int k, std::uint64_t cap) {
  if (k < 1) throw DomainError("sparsity k must be at least 1");
  const Eigen::MatrixXd& sigma = dataset.gram();
  const int d = dataset.d();
  const int max_size = std::min(2 * k, d);
  const std::uint64_t total = CountSubsets(d, k, max_size);
  if (total > cap) {
    throw CapacityError("submatrix nonsingularity check needs " +
                        std::to_string(total) + " subsets, above the cap of " +
                        std::to_string(cap));
  }

  SubmatrixReport report;
  report.worst_sigma_min = std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  for (int size = k; size <= max_size; ++size) {
    ForEachSubset(d, size, [&](const IndexSet& S) {
      const Eigen::MatrixXd sub = sigma(S.indices(), S.indices());
      eig.compute(sub, Eigen::EigenvaluesOnly);
      // Singular values of a symmetric matrix are |eigenvalues|.
      const double smin = eig.eigenvalues().cwiseAbs().minCoeff();
      ++report.subsets_checked;
      if (smin < report.worst_sigma_min) {
        report.worst_sigma_min = smin;
        report.worst_set = S;
      }
      return true;
    });
  }
  report.pass = report.worst_sigma_min > kSingularValueFloor;
  return report;
}

bool CheckIncoherence(const Eigen::Ref<const Eigen::MatrixXd>& sigma, int k) {
  if (k < 1) throw DomainError("sparsity k must be at least 1");
  if (sigma.rows() != sigma.cols()) throw ShapeError("Sigma must be square");
  const Eigen::MatrixXd dev =
      sigma - Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols());
  const double max_dev = dev.size() ? dev.cwiseAbs().maxCoeff() : 0.0;
  return max_dev <= 1.0 / (32.0 * k);
}

namespace {

// Shrinks the off-support part so that ||v_{S^c}||_1 <= 3 ||v_S||_1.
void RestoreCone(Eigen::VectorXd& v, const std::vector<char>& in_support) {
  double on = 0.0, off = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    (in_support[j] ? on : off) += std::abs(v[j]);
  }
  if (off > 3.0 * on && off > 0.0) {
    const double scale = 3.0 * on / off;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (!in_support[j]) v[j] *= scale;
    }
  }
}

}  // namespace

RestrictedEigenvalueReport RefuteRestrictedEigenvalue(
    const Eigen::Ref<const Eigen::MatrixXd>& sigma, int k, int trials,
    Rng& rng) {
  const int d = static_cast<int>(sigma.rows());
  if (sigma.cols() != d) throw ShapeError("Sigma must be square");
  if (k < 1 || k > d) throw DomainError("need 1 <= k <= d");
  if (trials < 1) throw DomainError("need at least one trial");

  constexpr int kDescentSteps = 50;
  constexpr double kRatioFloor = 0.5;
  // Row-sum norm bounds the spectral radius; 1/(2 bound) keeps descent stable.
  const double spectral_bound = sigma.cwiseAbs().rowwise().sum().maxCoeff();
  const double step = 0.5 / (spectral_bound + 1e-12);

  RestrictedEigenvalueReport report;
  report.min_ratio_found = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best;
  IndexSet best_set;

  std::vector<int> perm(d);
  std::vector<char> in_support(d);
  for (int trial = 0; trial < trials; ++trial) {
    const int size = 1 + static_cast<int>(rng.Index(k));
    for (int j = 0; j < d; ++j) perm[j] = j;
    for (int j = 0; j < size; ++j) {
      std::swap(perm[j], perm[j + rng.Index(d - j)]);
    }
    std::fill(in_support.begin(), in_support.end(), 0);
    for (int j = 0; j < size; ++j) in_support[perm[j]] = 1;

    Eigen::VectorXd v(d);
    double on = 0.0, off = 0.0;
    for (int j = 0; j < d; ++j) {
      v[j] = rng.Normal();
      (in_support[j] ? on : off) += std::abs(v[j]);
    }
    const double u = rng.Uniform();
    if (off > 0.0) {
      const double scale = u * 3.0 * on / off;
      for (int j = 0; j < d; ++j) {
        if (!in_support[j]) v[j] *= scale;
      }
    }
    v.normalize();

    for (int it = 0; it <= kDescentSteps; ++it) {
      const Eigen::VectorXd sv = sigma * v;
      const double ratio = v.dot(sv);
      if (ratio < report.min_ratio_found) {
        report.min_ratio_found = ratio;
        best = v;
        best_set = IndexSet::Make(
            std::vector<int>(perm.begin(), perm.begin() + size), d);
      }
      if (it == kDescentSteps) break;
      v -= step * 2.0 * (sv - ratio * v);
      RestoreCone(v, in_support);
      const double norm = v.norm();
      if (!(norm > 0.0)) break;
      v /= norm;
    }
  }

  report.refuted = report.min_ratio_found < kRatioFloor;
  if (report.refuted) {
    report.witness = best;
    report.witness_set = best_set;
  }
  return report;
}

}  // namespace sparsepref
