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

#include "sparsepref/model.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "sparsepref/error.h"

namespace sparsepref {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
// sqrt(2 / pi)
constexpr double kSqrt2OverPi = 0.79788456080286535588;
// Below this t the TM log-CDF and hazard switch to the scaled erfc form.
constexpr double kTmTailCutoff = -5.0;

void RequireFinite(double t) {
  if (!std::isfinite(t)) throw DomainError("link argument must be finite");
}

double Sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double NormalPdf(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

double NormalCdf(double t) { return 0.5 * std::erfc(-t * kInvSqrt2); }

void CheckConstantArgs(double B, double L, double sigma) {
  if (!std::isfinite(B) || !std::isfinite(L) || !std::isfinite(sigma)) {
    throw DomainError("B, L and sigma must be finite");
  }
  if (B < 0 || L < 0) throw DomainError("B and L must be nonnegative");
  if (sigma <= 0) throw DomainError("sigma must be positive");
}

}  // namespace

LinkKind ParseLinkKind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "btl") return LinkKind::kBtl;
  if (lower == "tm") return LinkKind::kTm;
  throw DomainError("unknown link '" + std::string(name) +
                    "' (expected btl or tm)");
}

std::string_view LinkName(LinkKind kind) {
  return kind == LinkKind::kBtl ? "btl" : "tm";
}

double ScaledErfc(double x) {
  if (x < 4.0) return std::exp(x * x) * std::erfc(x);
  // Continued fraction
  //   erfcx(x) = (1/sqrt(pi)) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
  // evaluated backwards; 80 terms give full double precision for x >= 4.
  double tail = x;
  for (int k = 80; k >= 1; --k) tail = x + 0.5 * k / tail;
  return 1.0 / (std::sqrt(std::numbers::pi) * tail);
}

double Link::Eval(double t) const {
  RequireFinite(t);
  return kind_ == LinkKind::kBtl ? Sigmoid(t) : NormalCdf(t);
}

double Link::Deriv(double t) const {
  if (kind_ == LinkKind::kBtl) return Sigmoid(t) * Sigmoid(-t);
  return NormalPdf(t);
}

double Link::LogEval(double t) const {
  if (kind_ == LinkKind::kBtl) {
    if (t >= 0) return -std::log1p(std::exp(-t));
    return t - std::log1p(std::exp(t));
  }
  if (t > 0) return std::log1p(-0.5 * std::erfc(t * kInvSqrt2));
  if (t > kTmTailCutoff) return std::log(NormalCdf(t));
  // Phi(t) = 0.5 exp(-t^2/2) erfcx(-t/sqrt 2)
  return -0.5 * t * t + std::log(0.5 * ScaledErfc(-t * kInvSqrt2));
}

double Link::Hazard(double t) const {
  if (kind_ == LinkKind::kBtl) return Sigmoid(-t);
  if (t > kTmTailCutoff) return NormalPdf(t) / NormalCdf(t);
  return kSqrt2OverPi / ScaledErfc(-t * kInvSqrt2);
}

double Link::NegLogSecondDeriv(double t) const {
  if (kind_ == LinkKind::kBtl) return Sigmoid(t) * Sigmoid(-t);
  // d/dt (-phi/Phi) = h (h + t) with h the hazard phi/Phi.
  const double h = Hazard(t);
  return h * (h + t);
}

double ComputeZeta(const Link& link, double B, double L, double sigma) {
  CheckConstantArgs(B, L, sigma);
  const double t_max = B * L / sigma;
  const double num = GridExtremum(
      [&](double t) {
        const double dv = link.Deriv(t);
        return dv * dv;
      },
      0.0, t_max, /*maximize=*/true);
  const double den = link.Eval(t_max) * link.Eval(-t_max);
  return num / den;
}

double ComputeGamma(const Link& link, double B, double L, double sigma) {
  CheckConstantArgs(B, L, sigma);
  const double t_max = B * L / sigma;
  return 0.5 * GridExtremum([&](double t) { return link.NegLogSecondDeriv(t); },
                            -t_max, t_max, /*maximize=*/false);
}

double ComputeOmega(const Link& link, double B, double L, double sigma) {
  CheckConstantArgs(B, L, sigma);
  const double t_max = B * L / sigma;
  return GridExtremum([&](double t) { return link.Hazard(t); }, -t_max, t_max,
                      /*maximize=*/true);
}

ModelConstants ModelConstants::Compute(const Link& link, double B, double L,
                                       double sigma) {
  CheckConstantArgs(B, L, sigma);
  if (B <= 0 || L <= 0) throw DomainError("B and L must be positive");
  ModelConstants c;
  c.B = B;
  c.L = L;
  c.sigma = sigma;
  c.zeta = ComputeZeta(link, B, L, sigma);
  c.gamma = ComputeGamma(link, B, L, sigma);
  c.omega = ComputeOmega(link, B, L, sigma);
  return c;
}

IndexSet RewardParam::Support() const {
  if (values_.size() == 0) return IndexSet();
  const double cut = std::max(kRelativeZeroThreshold * values_.cwiseAbs().maxCoeff(),
                              kAbsoluteZeroThreshold);
  std::vector<int> idx;
  for (int j = 0; j < dim(); ++j) {
    if (std::abs(values_[j]) > cut) idx.push_back(j);
  }
  return IndexSet::Make(std::move(idx), dim());
}

double RewardParam::SparsityRatio() const {
  if (dim() == 0) return 0.0;
  return static_cast<double>(L0()) / dim();
}

int SamplePreference(const Link& link, const Eigen::Ref<const Eigen::VectorXd>& theta,
                     const Eigen::Ref<const Eigen::VectorXd>& x0,
                     const Eigen::Ref<const Eigen::VectorXd>& x1, double sigma,
                     Rng& rng) {
  if (theta.size() != x0.size() || x0.size() != x1.size()) {
    throw ShapeError("SamplePreference: theta, x0 and x1 must have equal length");
  }
  if (!(sigma > 0)) throw DomainError("sigma must be positive");
  const double t = theta.dot(x0 - x1) / sigma;
  return rng.Uniform() < link.Eval(t) ? 0 : 1;
}

// IndexSet ------------------------------------------------------------------

IndexSet IndexSet::Make(std::vector<int> indices, int dim) {
  std::sort(indices.begin(), indices.end());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= dim) {
      throw IndexError("index " + std::to_string(indices[i]) +
                       " outside [0, " + std::to_string(dim) + ")");
    }
    if (i > 0 && indices[i] == indices[i - 1]) {
      throw IndexError("duplicate index " + std::to_string(indices[i]));
    }
  }
  return IndexSet(std::move(indices));
}

IndexSet IndexSet::Full(int dim) {
  std::vector<int> idx(dim);
  for (int j = 0; j < dim; ++j) idx[j] = j;
  return IndexSet(std::move(idx));
}

bool IndexSet::Contains(int j) const {
  return std::binary_search(indices_.begin(), indices_.end(), j);
}

std::string IndexSet::ToString() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) os << ',';
    os << indices_[i];
  }
  os << '}';
  return os.str();
}

}  // namespace sparsepref
