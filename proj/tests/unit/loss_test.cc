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
#include <limits>

#include <gtest/gtest.h>

#include "sparsepref/error.h"
#include "test_util.h"

namespace sparsepref {
namespace {

using testing::FromDifferences;
using testing::RandomDataset;
using testing::RandomInBall;

// Per-sample reference: -(1/n) sum log F(s_i <theta, x_i> / sigma).
double NllOracle(const Eigen::VectorXd& theta, const PreferenceDataset& ds,
                 const Link& link, double sigma) {
  double sum = 0.0;
  for (int i = 0; i < ds.n(); ++i) {
    const auto s = ds.sample(i);
    const double t = theta.dot(s.x0 - s.x1) / sigma;
    sum += -std::log(link.Eval(s.y == 0 ? t : -t));
  }
  return sum / ds.n();
}

class LossLinkTest : public ::testing::TestWithParam<LinkKind> {};

TEST_P(LossLinkTest, ZeroParameterGivesLogTwo) {
  Rng rng(1);
  const auto ds = RandomDataset(17, 4, Link(GetParam()), Eigen::VectorXd::Zero(4), 1.0, rng);
  EXPECT_NEAR(Nll(Eigen::VectorXd::Zero(4), ds, Link(GetParam()), 0.3), std::log(2.0), 1e-15);
}

TEST_P(LossLinkTest, MatchesPerSampleSummation) {
  const Link link(GetParam());
  Rng rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    const auto ds = RandomDataset(5, 3, link, RandomInBall(3, 1.0, rng), 0.5, rng);
    const Eigen::VectorXd theta = RandomInBall(3, 2.0, rng);
    const double sigma = 0.2 + rng.Uniform();
    EXPECT_NEAR(Nll(theta, ds, link, sigma), NllOracle(theta, ds, link, sigma), 1e-12);
  }
}

TEST_P(LossLinkTest, GradientMatchesFiniteDifferences) {
  const Link link(GetParam());
  Rng rng(3);
  constexpr double h = 1e-6;
  for (int rep = 0; rep < 100; ++rep) {
    const int d = 1 + static_cast<int>(rng.Index(10));
    const int n = 1 + static_cast<int>(rng.Index(50));
    const auto ds = RandomDataset(n, d, link, RandomInBall(d, 2.0, rng), 1.0, rng);
    const Eigen::VectorXd theta = RandomInBall(d, 2.0, rng);
    const double sigma = 0.5 + rng.Uniform();
    const Eigen::VectorXd g = NllGradient(theta, ds, link, sigma);
    for (int j = 0; j < d; ++j) {
      Eigen::VectorXd tp = theta, tm = theta;
      tp[j] += h;
      tm[j] -= h;
      const double fd = (Nll(tp, ds, link, sigma) - Nll(tm, ds, link, sigma)) / (2 * h);
      ASSERT_LE(std::abs(fd - g[j]), 1e-5 * std::max(std::abs(g[j]), 1e-3))
          << "rep " << rep << " coordinate " << j;
    }
  }
}

TEST_P(LossLinkTest, ConvexAlongSegments) {
  const Link link(GetParam());
  Rng rng(4);
  for (int rep = 0; rep < 200; ++rep) {
    const auto ds = RandomDataset(20, 5, link, RandomInBall(5, 1.0, rng), 0.5, rng);
    const Eigen::VectorXd a = RandomInBall(5, 2.0, rng);
    const Eigen::VectorXd b = RandomInBall(5, 2.0, rng);
    const double mid = Nll(0.5 * (a + b), ds, link, 0.5);
    ASSERT_LE(mid, 0.5 * (Nll(a, ds, link, 0.5) + Nll(b, ds, link, 0.5)) + 1e-12);
  }
}

TEST_P(LossLinkTest, RestrictionIdentity) {
  const Link link(GetParam());
  Rng rng(5);
  const auto ds = RandomDataset(30, 4, link, RandomInBall(4, 1.0, rng), 0.5, rng);
  const IndexSet S = IndexSet::Make({1, 3}, 4);
  const auto sub = Restrict(ds, S);
  ASSERT_EQ(sub.d(), 2);
  EXPECT_EQ(sub.labels(), ds.labels());
  EXPECT_EQ(sub.x0().col(0), ds.x0().col(1));
  EXPECT_EQ(sub.x1().col(1), ds.x1().col(3));
  Eigen::VectorXd full = Eigen::VectorXd::Zero(4);
  full[1] = 0.7;
  full[3] = -1.1;
  const Eigen::Vector2d small(0.7, -1.1);
  EXPECT_NEAR(Nll(full, ds, link, 0.5), Nll(small, sub, link, 0.5), 1e-12);
  const Eigen::VectorXd g_full = NllGradient(full, ds, link, 0.5);
  const Eigen::VectorXd g_sub = NllGradient(small, sub, link, 0.5);
  EXPECT_NEAR(g_full[1], g_sub[0], 1e-12);
  EXPECT_NEAR(g_full[3], g_sub[1], 1e-12);
  const auto same = Restrict(ds, IndexSet::Full(4));
  EXPECT_EQ(same.x0(), ds.x0());
  EXPECT_THROW(Restrict(ds, IndexSet::Make({4}, 5)), IndexError);
}

TEST_P(LossLinkTest, StableForLargeMargins) {
  const Link link(GetParam());
  Eigen::MatrixXd diffs(2, 1);
  diffs << 1.0, -1.0;
  const auto ds = FromDifferences(diffs, {1, 1});
  const Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 50.0);
  const auto eval = EvaluateNll(theta, ds, link, 0.1);
  EXPECT_TRUE(std::isfinite(eval.value));
  EXPECT_TRUE(eval.gradient.allFinite());
  EXPECT_GT(eval.value, 100.0);
}

INSTANTIATE_TEST_SUITE_P(Links, LossLinkTest,
                         ::testing::Values(LinkKind::kBtl, LinkKind::kTm),
                         [](const auto& info) {
                           return std::string(LinkName(info.param));
                         });

TEST(NllTest, SingleSampleValue) {
  Eigen::MatrixXd diffs(1, 1);
  diffs << 2.0;
  const auto ds = FromDifferences(diffs, {0});
  // t = 0.5 * 2 / 1 = 1.
  EXPECT_NEAR(Nll(Eigen::VectorXd::Constant(1, 0.5), ds, Link::Btl(), 1.0),
              0.313261687518223, 1e-12);
}

TEST(NllTest, InvalidArguments) {
  const auto ds = FromDifferences(Eigen::MatrixXd::Ones(2, 2), {0, 1});
  Eigen::VectorXd bad(2);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Nll(bad, ds, Link::Btl(), 1.0), DomainError);
  EXPECT_THROW(Nll(Eigen::VectorXd::Zero(2), ds, Link::Btl(), 0.0), DomainError);
  EXPECT_THROW(Nll(Eigen::VectorXd::Zero(3), ds, Link::Btl(), 1.0), ShapeError);
  const PreferenceDataset empty(Eigen::MatrixXd(0, 2), Eigen::MatrixXd(0, 2), {});
  EXPECT_THROW(Nll(Eigen::VectorXd::Zero(2), empty, Link::Btl(), 1.0), EmptyInputError);
}

TEST(GradientTest, MirroredPairsCancelAtZero) {
  Rng rng(6);
  Eigen::MatrixXd diffs(6, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) diffs(i, j) = rng.Normal();
    diffs.row(i + 3) = -diffs.row(i);
  }
  const auto ds = FromDifferences(diffs, {0, 1, 0, 0, 1, 0});
  for (LinkKind kind : {LinkKind::kBtl, LinkKind::kTm}) {
    EXPECT_LE(NllGradient(Eigen::VectorXd::Zero(3), ds, Link(kind), 1.0).cwiseAbs().maxCoeff(),
              1e-15);
  }
}

TEST(GradientTest, SingleSampleClosedForm) {
  const auto ds = FromDifferences(Eigen::MatrixXd::Ones(1, 1), {0});
  EXPECT_NEAR(NllGradient(Eigen::VectorXd::Zero(1), ds, Link::Btl(), 1.0)[0], -0.5, 1e-15);
}

TEST(StrongConvexityTest, ZeroDeltaIsTight) {
  Rng rng(7);
  const auto ds = RandomDataset(20, 3, Link::Btl(), Eigen::VectorXd::Zero(3), 1.0, rng);
  const auto r = StrongConvexityCertificate(Eigen::Vector3d(0.1, 0.2, 0.3),
                                            Eigen::Vector3d::Zero(), ds, Link::Btl(),
                                            1.0, 0.0983, 1.0);
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(StrongConvexityTest, HoldsWithComputedGamma) {
  for (LinkKind kind : {LinkKind::kBtl, LinkKind::kTm}) {
    const Link link(kind);
    const int d = 5;
    const double gamma = ComputeGamma(link, 1, 1, 1);
    Rng rng(8);
    for (int rep = 0; rep < 200; ++rep) {
      // Features in [0, 1/sqrt(d)] keep ||x0 - x1|| <= 1 = L.
      const auto ds = RandomDataset(30, d, link, RandomInBall(d, 1.0, rng), 1.0, rng,
                                    1.0 / std::sqrt(d));
      const Eigen::VectorXd star = RandomInBall(d, 1.0, rng);
      const Eigen::VectorXd end = RandomInBall(d, 1.0, rng);
      const auto r = StrongConvexityCertificate(star, end - star, ds, link, 1.0, gamma, 1.0);
      ASSERT_TRUE(r.holds) << rep << ": " << r.lhs << " < " << r.rhs;
    }
  }
}

TEST(StrongConvexityTest, InflatedGammaFails) {
  const Link link = Link::Btl();
  const int d = 5;
  const double gamma = 10 * ComputeGamma(link, 1, 1, 1);
  Rng rng(9);
  int failures = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto ds = RandomDataset(30, d, link, RandomInBall(d, 1.0, rng), 1.0, rng,
                                  1.0 / std::sqrt(d));
    const Eigen::VectorXd star = RandomInBall(d, 1.0, rng);
    const Eigen::VectorXd end = RandomInBall(d, 1.0, rng);
    failures += !StrongConvexityCertificate(star, end - star, ds, link, 1.0, gamma, 1.0).holds;
  }
  EXPECT_GT(failures, 0);
}

TEST(StrongConvexityTest, OutsideBallIsPreconditionError) {
  const auto ds = FromDifferences(Eigen::MatrixXd::Identity(2, 2), {0, 1});
  EXPECT_THROW(StrongConvexityCertificate(Eigen::Vector2d(0.9, 0), Eigen::Vector2d(0.2, 0),
                                          ds, Link::Btl(), 1.0, 0.1, 1.0),
               PreconditionError);
}

TEST(ScoreBoundTest, HalfAtZero) {
  Rng rng(10);
  const auto ds = RandomDataset(40, 3, Link::Btl(), Eigen::VectorXd::Zero(3), 1.0, rng);
  const auto c = ModelConstants::Compute(Link::Btl(), 1, 1, 1);
  const auto r = ScoreBoundCheck(Eigen::VectorXd::Zero(3), ds, Link::Btl(), c);
  EXPECT_NEAR(r.max_abs_score, 0.5, 1e-15);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.samples_checked, 40);
}

TEST(ScoreBoundTest, BoundaryAttainsOmega) {
  // One sample with t = -1 and label 0: score F'(-1)/F(-1).
  const auto ds = FromDifferences(Eigen::MatrixXd::Constant(1, 1, -1.0), {0});
  const auto btl = ModelConstants::Compute(Link::Btl(), 1, 1, 1);
  const auto r = ScoreBoundCheck(Eigen::VectorXd::Ones(1), ds, Link::Btl(), btl);
  EXPECT_NEAR(r.max_abs_score, 0.731, 1e-3);
  EXPECT_NEAR(r.max_abs_score, btl.omega, 1e-6);
  EXPECT_TRUE(r.holds);
  const auto tm = ModelConstants::Compute(Link::Tm(), 1, 1, 1);
  const auto rt = ScoreBoundCheck(Eigen::VectorXd::Ones(1), ds, Link::Tm(), tm);
  EXPECT_NEAR(rt.max_abs_score, 1.525, 1e-3);
  EXPECT_NEAR(rt.max_abs_score, tm.omega, 1e-6);
  EXPECT_TRUE(rt.holds);
}

TEST(ScoreBoundTest, IgnoresSamplesOutsideMargin) {
  const auto ds = FromDifferences(Eigen::MatrixXd::Constant(1, 1, -3.0), {0});
  const auto c = ModelConstants::Compute(Link::Btl(), 1, 1, 1);
  const auto r = ScoreBoundCheck(Eigen::VectorXd::Ones(1), ds, Link::Btl(), c);
  EXPECT_EQ(r.samples_checked, 0);
  EXPECT_TRUE(r.holds);
}

}  // namespace
}  // namespace sparsepref
