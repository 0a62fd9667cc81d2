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

#ifndef SPARSEPREF_MODEL_H_
#define SPARSEPREF_MODEL_H_

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string_view>

#include <Eigen/Core>

#include "sparsepref/index_set.h"
#include "sparsepref/rng.h"

namespace sparsepref {

enum class LinkKind { kBtl, kTm };

// Parses "btl" / "tm" (case-insensitive); throws DomainError otherwise.
LinkKind ParseLinkKind(std::string_view name);
std::string_view LinkName(LinkKind kind);
inline std::ostream& operator<<(std::ostream& os, LinkKind kind) {
  return os << LinkName(kind);
}

// Response function F of the random utility model,
//   P(y = 0 | x0, x1) = F(<theta, x0 - x1> / sigma),
// with F(t) = 1 - F(-t). BTL uses the logistic sigmoid, TM the standard
// Gaussian CDF.
//
// Log-domain members (LogEval, Hazard) stay accurate deep in the lower tail,
// where Eval itself underflows.
class Link {
 public:
  explicit Link(LinkKind kind) : kind_(kind) {}
  static Link Btl() { return Link(LinkKind::kBtl); }
  static Link Tm() { return Link(LinkKind::kTm); }

  LinkKind kind() const { return kind_; }
  std::string_view name() const { return LinkName(kind_); }

  // F(t). Throws DomainError for non-finite t.
  double Eval(double t) const;
  // F'(t).
  double Deriv(double t) const;
  // (-log F)''(t).
  double NegLogSecondDeriv(double t) const;
  // log F(t).
  double LogEval(double t) const;
  // F'(t) / F(t), the derivative of log F.
  double Hazard(double t) const;

 private:
  LinkKind kind_;
};

// exp(x^2) * erfc(x) for x >= 0.
double ScaledErfc(double x);

// Constants of the sparse RUM at a given (B, L, sigma). All extrema are taken
// on a 10,001-point grid and refined by golden-section search around the best
// grid point.
struct ModelConstants {
  double B = 0.0;
  double L = 0.0;
  double sigma = 0.0;
  double zeta = 0.0;
  double gamma = 0.0;
  double omega = 0.0;

  // Requires B > 0, L > 0, sigma > 0.
  static ModelConstants Compute(const Link& link, double B, double L,
                                double sigma);
  // B * L / sigma, the largest |t| reachable inside the parameter ball.
  double MaxMargin() const { return B * L / sigma; }
};

// max_{t in [0, BL/sigma]} F'(t)^2 / (F(BL/sigma) (1 - F(BL/sigma))).
double ComputeZeta(const Link& link, double B, double L, double sigma);
// (1/2) min_{|t| <= BL/sigma} (-log F)''(t).
double ComputeGamma(const Link& link, double B, double L, double sigma);
// sup_{|t| <= BL/sigma} F'(t) / F(t).
double ComputeOmega(const Link& link, double B, double L, double sigma);

// Maximizes (or minimizes) f over [lo, hi]: uniform grid of `grid_points`
// followed by golden-section refinement on the bracketing grid cells.
// Returns the extreme value.
template <typename Fn>
double GridExtremum(Fn&& f, double lo, double hi, bool maximize,
                    int grid_points = 10001);

// Zero threshold shared by every sparsity report: a coordinate counts as
// nonzero when |theta_j| > max(1e-3 * max_j |theta_j|, 1e-10).
inline constexpr double kRelativeZeroThreshold = 1e-3;
inline constexpr double kAbsoluteZeroThreshold = 1e-10;

// Parameter theta of the linear reward r(x) = <theta, x>.
class RewardParam {
 public:
  RewardParam() = default;
  explicit RewardParam(Eigen::VectorXd values) : values_(std::move(values)) {}
  static RewardParam Zero(int dim) {
    return RewardParam(Eigen::VectorXd::Zero(dim));
  }

  int dim() const { return static_cast<int>(values_.size()); }
  const Eigen::VectorXd& values() const { return values_; }
  double operator[](int j) const { return values_[j]; }

  // Thresholded support; see kRelativeZeroThreshold.
  IndexSet Support() const;
  int L0() const { return Support().size(); }
  double L1() const { return values_.lpNorm<1>(); }
  double L2() const { return values_.norm(); }
  // L0() / dim(); 0 for an empty parameter.
  double SparsityRatio() const;

 private:
  Eigen::VectorXd values_;
};

// Draws a label under the RUM: 0 with probability F(<theta, x0 - x1> / sigma).
// Throws ShapeError on dimension mismatch, DomainError when sigma <= 0.
int SamplePreference(const Link& link, const Eigen::Ref<const Eigen::VectorXd>& theta,
                     const Eigen::Ref<const Eigen::VectorXd>& x0,
                     const Eigen::Ref<const Eigen::VectorXd>& x1, double sigma,
                     Rng& rng);

// ---------------------------------------------------------------------------

template <typename Fn>
double GridExtremum(Fn&& f, double lo, double hi, bool maximize,
                    int grid_points) {
  const double sign = maximize ? -1.0 : 1.0;  // minimize sign * f
  auto g = [&](double t) { return sign * f(t); };
  if (!(hi > lo)) return f(lo);

  const double h = (hi - lo) / (grid_points - 1);
  int best_i = 0;
  double best = g(lo);
  for (int i = 1; i < grid_points; ++i) {
    const double v = g(lo + h * i);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }

  double a = lo + h * std::max(best_i - 1, 0);
  double b = lo + h * std::min(best_i + 1, grid_points - 1);
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a)); ++it) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kInvPhi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kInvPhi * (b - a);
      gd = g(d);
    }
  }
  best = std::min({best, gc, gd, g(a), g(b)});
  return sign * best;
}

}  // namespace sparsepref

#endif  // SPARSEPREF_MODEL_H_
