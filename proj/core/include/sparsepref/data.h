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

#ifndef SPARSEPREF_DATA_H_
#define SPARSEPREF_DATA_H_

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "sparsepref/index_set.h"
#include "sparsepref/rng.h"

namespace sparsepref {

// One comparison: y = 0 means x0 was preferred, y = 1 means x1 was.
struct PreferenceSample {
  Eigen::VectorXd x0;
  Eigen::VectorXd x1;
  int y = 0;
};

// n comparisons over d-dimensional features. The difference matrix
// X (rows x0_i - x1_i) and the Gram matrix Sigma = X^T X / n are computed
// once at construction; the object is immutable afterwards and may be shared
// across threads.
//
// A dataset may be empty (n = 0) so that file readers can report the problem
// at the point of use; gram() and everything built on it then throw
// EmptyInputError.
class PreferenceDataset {
 public:
  PreferenceDataset() = default;
  // x0, x1: n x d. labels: n entries in {0, 1}. Throws ShapeError on
  // mismatched sizes and DomainError on labels outside {0, 1} or non-finite
  // features.
  PreferenceDataset(Eigen::MatrixXd x0, Eigen::MatrixXd x1,
                    std::vector<int> labels);
  static PreferenceDataset FromSamples(const std::vector<PreferenceSample>& samples,
                                       int dim);

  int n() const { return static_cast<int>(labels_.size()); }
  int d() const { return static_cast<int>(x0_.cols()); }
  bool empty() const { return labels_.empty(); }

  const Eigen::MatrixXd& x0() const { return x0_; }
  const Eigen::MatrixXd& x1() const { return x1_; }
  const std::vector<int>& labels() const { return labels_; }
  // +1 for y = 0, -1 for y = 1: the factor (-1)^y of the likelihood.
  const Eigen::VectorXd& label_signs() const { return signs_; }
  // X, n x d.
  const Eigen::MatrixXd& differences() const { return diff_; }
  // Sigma, d x d. Throws EmptyInputError when n = 0.
  const Eigen::MatrixXd& gram() const;

  PreferenceSample sample(int i) const;

  // Dataset over the columns in S (same labels).
  PreferenceDataset Restrict(const IndexSet& S) const;

 private:
  Eigen::MatrixXd x0_;
  Eigen::MatrixXd x1_;
  std::vector<int> labels_;
  Eigen::VectorXd signs_;
  Eigen::MatrixXd diff_;
  Eigen::MatrixXd gram_;
};

// Sigma = (1/n) X^T X.
const Eigen::MatrixXd& Gram(const PreferenceDataset& dataset);

// theta^T Sigma theta.
double SeminormSq(const Eigen::Ref<const Eigen::MatrixXd>& sigma,
                  const Eigen::Ref<const Eigen::VectorXd>& theta);

// H = max_j ||X_j||_2 / sqrt(n) over the columns of X.
double ColumnBoundH(const PreferenceDataset& dataset);

// Sigma_S = (1/n) sum_i (x0_i - x1_i)_S (x0_i - x1_i)_S^T. Throws IndexError
// for an empty or out-of-range S.
Eigen::MatrixXd PrincipalSubmatrix(const PreferenceDataset& dataset,
                                   const IndexSet& S);

inline constexpr std::uint64_t kSubmatrixEnumerationCap = 2'000'000;
inline constexpr double kSingularValueFloor = 1e-10;

struct SubmatrixReport {
  bool pass = true;
  IndexSet worst_set;
  double worst_sigma_min = 0.0;
  std::uint64_t subsets_checked = 0;
};

// Checks that every principal submatrix Sigma_S with k <= |S| <= 2k (|S| <= d)
// has smallest singular value above kSingularValueFloor. Enumerates all such
// S; throws CapacityError when their number exceeds `cap`.
SubmatrixReport CheckSubmatrixNonsingularity(
    const PreferenceDataset& dataset, int k,
    std::uint64_t cap = kSubmatrixEnumerationCap);

// ||Sigma - I||_max <= 1 / (32 k).
bool CheckIncoherence(const Eigen::Ref<const Eigen::MatrixXd>& sigma, int k);

struct RestrictedEigenvalueReport {
  bool refuted = false;
  std::optional<Eigen::VectorXd> witness;  // unit vector, set when refuted
  IndexSet witness_set;
  double min_ratio_found = 0.0;
};

// Searches for theta in a cone C_S = { ||theta_{S^c}||_1 <= 3 ||theta_S||_1 },
// |S| <= k, with ||theta||_Sigma^2 / ||theta||_2^2 < 1/2. Each trial draws a
// random S and a random cone member, then runs 50 projected descent steps on
// the Rayleigh quotient. A negative answer is not a certificate.
RestrictedEigenvalueReport RefuteRestrictedEigenvalue(
    const Eigen::Ref<const Eigen::MatrixXd>& sigma, int k, int trials, Rng& rng);

}  // namespace sparsepref

#endif  // SPARSEPREF_DATA_H_
