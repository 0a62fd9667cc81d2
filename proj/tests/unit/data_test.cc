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

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "sparsepref/error.h"
#include "sparsepref/index_set.h"
#include "test_util.h"

namespace sparsepref {
namespace {

using testing::FromDifferences;

Eigen::MatrixXd RandomMatrix(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = 2 * rng.Uniform() - 1;
  }
  return m;
}

TEST(IndexSetTest, SortsAndValidates) {
  const IndexSet s = IndexSet::Make({3, 0, 2}, 5);
  EXPECT_EQ(s.indices(), (std::vector<int>{0, 2, 3}));
  EXPECT_TRUE(s.Contains(2));
  EXPECT_FALSE(s.Contains(1));
  EXPECT_EQ(s.ToString(), "{0,2,3}");
  EXPECT_THROW(IndexSet::Make({1, 1}, 5), IndexError);
  EXPECT_THROW(IndexSet::Make({5}, 5), IndexError);
  EXPECT_THROW(IndexSet::Make({-1}, 5), IndexError);
  EXPECT_EQ(IndexSet::Full(3).size(), 3);
  EXPECT_LT(IndexSet::Make({0, 1}, 3), IndexSet::Make({0, 2}, 3));
}

TEST(IndexSetTest, CountSubsets) {
  EXPECT_EQ(CountSubsets(6, 2, 4), 15u + 20u + 15u);
  EXPECT_EQ(CountSubsets(100, 0, 2), 1u + 100u + 4950u);
  EXPECT_EQ(CountSubsets(3, 2, 10), 3u + 1u);
  EXPECT_EQ(CountSubsets(60, 30, 30), 118264581564861424ull);
  EXPECT_EQ(CountSubsets(200, 0, 100), std::numeric_limits<std::uint64_t>::max());
}

TEST(IndexSetTest, ForEachSubsetIsLexicographic) {
  std::vector<IndexSet> seen;
  ForEachSubset(4, 2, [&](const IndexSet& s) {
    seen.push_back(s);
    return true;
  });
  ASSERT_EQ(seen.size(), 6u);
  EXPECT_EQ(seen.front().indices(), (std::vector<int>{0, 1}));
  EXPECT_EQ(seen.back().indices(), (std::vector<int>{2, 3}));
  EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
  int visits = 0;
  ForEachSubset(4, 0, [&](const IndexSet& s) {
    EXPECT_TRUE(s.empty());
    ++visits;
    return true;
  });
  EXPECT_EQ(visits, 1);
}

TEST(DatasetTest, ValidatesInput) {
  EXPECT_THROW(PreferenceDataset(Eigen::MatrixXd::Zero(2, 3),
                                 Eigen::MatrixXd::Zero(2, 2), {0, 1}),
               ShapeError);
  EXPECT_THROW(PreferenceDataset(Eigen::MatrixXd::Zero(2, 3),
                                 Eigen::MatrixXd::Zero(2, 3), {0}),
               ShapeError);
  EXPECT_THROW(PreferenceDataset(Eigen::MatrixXd::Zero(2, 3),
                                 Eigen::MatrixXd::Zero(2, 3), {0, 2}),
               DomainError);
  PreferenceSample a{Eigen::VectorXd::Ones(3), Eigen::VectorXd::Zero(3), 1};
  PreferenceSample b{Eigen::VectorXd::Ones(2), Eigen::VectorXd::Zero(2), 0};
  EXPECT_THROW(PreferenceDataset::FromSamples({a, b}, 3), ShapeError);
  const auto ds = PreferenceDataset::FromSamples({a}, 3);
  EXPECT_EQ(ds.n(), 1);
  EXPECT_EQ(ds.d(), 3);
  EXPECT_EQ(ds.label_signs()[0], -1.0);
  EXPECT_EQ(ds.sample(0).y, 1);
}

TEST(GramTest, SingleSampleOuterProduct) {
  Eigen::MatrixXd diffs(1, 2);
  diffs << 1, 0;
  const Eigen::MatrixXd g = Gram(FromDifferences(diffs, {0}));
  EXPECT_EQ(g, (Eigen::Matrix2d() << 1, 0, 0, 0).finished());
}

TEST(GramTest, AveragesOverSamples) {
  const Eigen::MatrixXd g = Gram(FromDifferences(Eigen::MatrixXd::Identity(2, 2), {0, 1}));
  EXPECT_EQ(g, (Eigen::Matrix2d() << 0.5, 0, 0, 0.5).finished());
}

TEST(GramTest, MatchesOuterProductSum) {
  Rng rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 3 + rep, d = 2 + rep % 4;
    const auto ds = testing::RandomDataset(n, d, Link::Btl(),
                                           Eigen::VectorXd::Zero(d), 1.0, rng);
    Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          ref(a, b) += (ds.x0()(i, a) - ds.x1()(i, a)) *
                       (ds.x0()(i, b) - ds.x1()(i, b)) / n;
        }
      }
    }
    const Eigen::MatrixXd& g = ds.gram();
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        ASSERT_LE(std::abs(g(a, b) - ref(a, b)), 1e-12 * std::max(1.0, std::abs(ref(a, b))));
      }
    }
    EXPECT_EQ(g, g.transpose());
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().minCoeff(),
              -1e-10);
  }
}

TEST(GramTest, EmptyDatasetIsError) {
  const PreferenceDataset empty(Eigen::MatrixXd(0, 3), Eigen::MatrixXd(0, 3), {});
  EXPECT_THROW(empty.gram(), EmptyInputError);
  EXPECT_THROW(ColumnBoundH(empty), EmptyInputError);
}

TEST(SeminormTest, Examples) {
  EXPECT_EQ(SeminormSq(Eigen::Matrix3d::Random(), Eigen::Vector3d::Zero()), 0.0);
  EXPECT_DOUBLE_EQ(SeminormSq(Eigen::Matrix2d::Identity(), Eigen::Vector2d(3, 4)), 25.0);
  EXPECT_THROW(SeminormSq(Eigen::Matrix2d::Identity(), Eigen::Vector3d::Zero()),
               ShapeError);
}

TEST(SeminormTest, EqualsMeanSquaredInnerProduct) {
  Rng rng(2);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 5 + rep, d = 3;
    const auto ds = testing::RandomDataset(n, d, Link::Tm(),
                                           Eigen::VectorXd::Zero(d), 1.0, rng);
    const Eigen::VectorXd theta = testing::RandomInBall(d, 3.0, rng);
    double ref = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = theta.dot(ds.differences().row(i));
      ref += t * t / n;
    }
    ASSERT_LE(std::abs(SeminormSq(ds.gram(), theta) - ref), 1e-10 * ref);
  }
}

TEST(ColumnBoundTest, Examples) {
  EXPECT_DOUBLE_EQ(ColumnBoundH(FromDifferences(Eigen::MatrixXd::Ones(7, 3),
                                                std::vector<int>(7, 0))),
                   1.0);
  EXPECT_EQ(ColumnBoundH(FromDifferences(Eigen::MatrixXd::Zero(4, 2),
                                         std::vector<int>(4, 1))),
            0.0);
  Rng rng(3);
  const Eigen::MatrixXd x = RandomMatrix(4, 3, rng);
  double ref = 0.0;
  for (int j = 0; j < 3; ++j) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += x(i, j) * x(i, j);
    ref = std::max(ref, std::sqrt(s / 4));
  }
  EXPECT_NEAR(ColumnBoundH(FromDifferences(x, {0, 1, 0, 1})), ref, 1e-15);
}

TEST(ColumnBoundTest, BoundedByDiameter) {
  Rng rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 10 + rep, d = 1 + rep % 7;
    Eigen::MatrixXd x = RandomMatrix(n, d, rng);
    double L = 0.0;
    for (int i = 0; i < n; ++i) L = std::max(L, x.row(i).norm());
    ASSERT_LE(ColumnBoundH(FromDifferences(x, std::vector<int>(n, 0))), L + 1e-12);
  }
}

TEST(PrincipalSubmatrixTest, MatchesSelection) {
  Rng rng(5);
  const Eigen::MatrixXd x = RandomMatrix(9, 4, rng);
  const auto ds = FromDifferences(x, std::vector<int>(9, 0));
  const Eigen::MatrixXd& g = ds.gram();
  EXPECT_LE((PrincipalSubmatrix(ds, IndexSet::Full(4)) - g).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::MatrixXd single = PrincipalSubmatrix(ds, IndexSet::Make({2}, 4));
  ASSERT_EQ(single.rows(), 1);
  EXPECT_NEAR(single(0, 0), g(2, 2), 1e-12);
  const Eigen::MatrixXd sub = PrincipalSubmatrix(ds, IndexSet::Make({0, 2}, 4));
  Eigen::Matrix2d ref;
  ref << g(0, 0), g(0, 2), g(2, 0), g(2, 2);
  EXPECT_LE((sub - ref).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(PrincipalSubmatrix(ds, IndexSet::Make({5}, 6)), IndexError);
}

TEST(NonsingularityTest, ContinuousDataPasses) {
  Rng rng(6);
  const auto ds = FromDifferences(RandomMatrix(30, 6, rng), std::vector<int>(30, 0));
  const auto report = CheckSubmatrixNonsingularity(ds, 2);
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.subsets_checked, 15u + 20u + 15u);
  EXPECT_GT(report.worst_sigma_min, 1e-10);
}

TEST(NonsingularityTest, RankOneFails) {
  Eigen::MatrixXd x(5, 3);
  x.rowwise() = Eigen::RowVector3d(0.3, -1.0, 2.0);
  const auto report = CheckSubmatrixNonsingularity(FromDifferences(x, std::vector<int>(5, 0)), 1);
  EXPECT_FALSE(report.pass);
  EXPECT_EQ(report.worst_set.size(), 2);
  EXPECT_LE(report.worst_sigma_min, 1e-10);
}

TEST(NonsingularityTest, DiagonalPasses) {
  const auto report = CheckSubmatrixNonsingularity(
      FromDifferences(Eigen::MatrixXd::Identity(2, 2), {0, 1}), 1);
  EXPECT_TRUE(report.pass);
  EXPECT_NEAR(report.worst_sigma_min, 0.5, 1e-12);
}

TEST(NonsingularityTest, CapacityError) {
  const auto ds = FromDifferences(Eigen::MatrixXd::Identity(40, 40),
                                  std::vector<int>(40, 0));
  EXPECT_THROW(CheckSubmatrixNonsingularity(ds, 5), CapacityError);
  EXPECT_THROW(CheckSubmatrixNonsingularity(ds, 2, 10), CapacityError);
}

TEST(IncoherenceTest, Examples) {
  EXPECT_TRUE(CheckIncoherence(Eigen::MatrixXd::Identity(5, 5), 1));
  EXPECT_TRUE(CheckIncoherence(Eigen::MatrixXd::Identity(5, 5), 50));
  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(4, 4, 0.1);
  s.diagonal().setOnes();
  EXPECT_FALSE(CheckIncoherence(s, 1));
  Eigen::MatrixXd t = Eigen::MatrixXd::Constant(4, 4, 0.001);
  t.diagonal().setOnes();
  EXPECT_TRUE(CheckIncoherence(t, 10));
  EXPECT_FALSE(CheckIncoherence(t, 40));
}

TEST(RestrictedEigenvalueTest, IdentityNeverRefuted) {
  for (int k = 1; k <= 6; ++k) {
    Rng rng(k);
    const auto report = RefuteRestrictedEigenvalue(Eigen::MatrixXd::Identity(6, 6), k, 20, rng);
    EXPECT_FALSE(report.refuted);
    EXPECT_FALSE(report.witness.has_value());
    EXPECT_NEAR(report.min_ratio_found, 1.0, 1e-12);
  }
}

TEST(RestrictedEigenvalueTest, ZeroRefutedImmediately) {
  Rng rng(7);
  const auto report = RefuteRestrictedEigenvalue(Eigen::MatrixXd::Zero(4, 4), 2, 1, rng);
  EXPECT_TRUE(report.refuted);
  ASSERT_TRUE(report.witness.has_value());
  EXPECT_NEAR(report.witness->norm(), 1.0, 1e-12);
  EXPECT_EQ(report.min_ratio_found, 0.0);
}

TEST(RestrictedEigenvalueTest, FindsWeakCoordinate) {
  Rng rng(8);
  const Eigen::Matrix3d sigma = Eigen::Vector3d(0.1, 1, 1).asDiagonal();
  const auto report = RefuteRestrictedEigenvalue(sigma, 1, 50, rng);
  ASSERT_TRUE(report.refuted);
  EXPECT_EQ(report.witness_set, IndexSet::Make({0}, 3));
  const Eigen::VectorXd& w = *report.witness;
  EXPECT_LT(w.dot(sigma * w) / w.squaredNorm(), 0.5);
  // The witness lies in the cone of its support.
  EXPECT_LE(w.tail(2).lpNorm<1>(), 3 * std::abs(w[0]) + 1e-12);
}

TEST(RestrictedEigenvalueTest, InvalidArguments) {
  Rng rng(9);
  EXPECT_THROW(RefuteRestrictedEigenvalue(Eigen::MatrixXd::Identity(3, 3), 4, 1, rng),
               DomainError);
  EXPECT_THROW(RefuteRestrictedEigenvalue(Eigen::MatrixXd::Identity(3, 3), 1, 0, rng),
               DomainError);
}

}  // namespace
}  // namespace sparsepref
