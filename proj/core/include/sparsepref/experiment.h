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

#ifndef SPARSEPREF_EXPERIMENT_H_
#define SPARSEPREF_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparsepref/data.h"
#include "sparsepref/estimators.h"
#include "sparsepref/model.h"

namespace sparsepref {

enum class ExperimentKind {
  kRateCurve,
  kSparsityCurve,
  kBetaContour,
  kFrozenFeatures,
  kDiagnose,
};

std::string_view KindName(ExperimentKind kind);
ExperimentKind ParseKind(std::string_view name);

enum class EstimatorKind { kMl, kL1, kL0 };

std::string_view EstimatorName(EstimatorKind kind);
EstimatorKind ParseEstimator(std::string_view name);

// Inclusive arithmetic range lo, lo + step, ..., hi.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
  std::vector<double> Values() const;
};

// Declarative description of one sweep. Defaults() fills the settings used
// for the corresponding figure; every field can then be overridden.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kRateCurve;
  int d = 100;
  LinkKind link = LinkKind::kBtl;
  double B = 2.0;

  struct Grid {
    std::vector<long> n;
    std::vector<int> k;
    std::vector<double> sigma;
    // Explicit l1 weights. When empty, beta = c / sqrt(n).
    std::vector<double> beta;
    double c = 1.0;
  } grid;

  // beta_contour only: exponents of n and beta (base 10).
  Range log10_n{1.0, 5.0, 0.25};
  Range log10_beta{-4.0, 0.0, 0.25};

  int repetitions = 20;
  std::uint64_t base_seed = 0;
  std::string output_path;
  std::vector<EstimatorKind> estimators{EstimatorKind::kMl, EstimatorKind::kL1};
  int threads = 1;
  // Fill wall_time_s. Off by default so that output is byte-reproducible.
  bool record_time = false;

  int max_iter = 10000;
  double tol = 1e-10;

  // frozen_features
  std::string train_path;
  std::string test_path;
  double fit_sigma = 1.0;

  // diagnose
  std::string data_path;
  int kl_pairs = 1000;
  int re_trials = 200;
  double constants_B = 1.0;
  double constants_L = 1.0;
  double constants_sigma = 1.0;

  static ExperimentSpec Defaults(ExperimentKind kind);
  // Throws DomainError on malformed grids and CapacityError when l0 is
  // requested above its enumeration cap.
  void Validate() const;
  EstimatorConfig SolverConfig(double beta) const;
};

// One observation: (grid point, trial, estimator).
struct ResultRow {
  ExperimentKind kind = ExperimentKind::kRateCurve;
  long n = 0;
  int d = 0;
  std::optional<int> k;
  std::optional<double> sigma;
  std::optional<double> beta;
  std::uint64_t seed = 0;
  EstimatorKind estimator = EstimatorKind::kMl;
  std::optional<double> error_sigma_norm;
  std::optional<double> error_l2;
  std::optional<double> accuracy;
  double sparsity_ratio = 0.0;
  int iterations = 0;
  bool converged = false;
  std::optional<double> wall_time_s;
};

inline constexpr std::string_view kResultCsvHeader =
    "kind,n,d,k,sigma,beta,seed,estimator,error_sigma_norm,error_l2,accuracy,"
    "sparsity_ratio,iterations,converged,wall_time_s";

void WriteResultsCsv(const std::vector<ResultRow>& rows, std::ostream& out);
void WriteResultsCsv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> ReadResultsCsv(std::istream& in);
std::vector<ResultRow> ReadResultsCsv(const std::string& path);

// Seed of the synthetic dataset for trial `trial` at grid point (n, k, sigma).
// Depends on coordinate values, not positions, so extending a grid leaves
// existing cells untouched; beta is excluded so that every l1 weight sees the
// same datasets.
std::uint64_t TrialSeed(const ExperimentSpec& spec, long n, int k, double sigma,
                        int trial);

// Mean of a metric over rows matching a predicate, keyed by an x value.
struct CurvePoint {
  EstimatorKind estimator;
  double x = 0.0;  // k/d for sparsity curves, n for rate curves
  double mean_error = 0.0;
  int count = 0;
};

struct SweepResult {
  std::vector<ResultRow> rows;
  std::vector<CurvePoint> curve;
  // Least-squares slope of log(mean error) against log(x), per estimator
  // (rate curves only).
  std::map<EstimatorKind, double> slopes;
};

struct ContourCell {
  long n = 0;
  double log10_n = 0.0;
  double log10_beta = 0.0;
  double beta = 0.0;
  double mean_error = 0.0;
};

struct ContourResult {
  std::vector<ResultRow> rows;
  std::vector<ContourCell> cells;
  // Per n column: (log10 n, log10 argmin beta).
  std::vector<std::pair<double, double>> valley;
  double valley_slope = 0.0;
};

// Fresh synthetic dataset per (k, trial); fits the spec's estimators.
SweepResult RunSparsityCurve(const ExperimentSpec& spec);
// Fresh dataset per (n, trial); l1 uses beta = c / sqrt(n) unless grid.beta
// is given. Also fits the log-log slope per estimator.
SweepResult RunRateCurve(const ExperimentSpec& spec);
// l1 error over the (log10 n, log10 beta) grid; argmin beta per n column and
// the slope of log10(argmin beta) against log10(n).
ContourResult RunBetaContour(const ExperimentSpec& spec);
// l1 at beta = c / sqrt(n_train) plus the beta = 0 baseline, fitted on
// `train` and scored on `test` by Predict. Throws ShapeError when the
// dimensions differ and EmptyInputError for an empty training set.
std::vector<ResultRow> RunFrozenFeatures(const ExperimentSpec& spec,
                                         const PreferenceDataset& train,
                                         const PreferenceDataset& test);
std::vector<ResultRow> RunFrozenFeatures(const ExperimentSpec& spec,
                                         const std::string& train_path,
                                         const std::string& test_path);

struct DiagnoseResult {
  std::string summary;  // human-readable
  std::string csv;      // check,detail,value,pass
  bool all_pass = true;
};

// Constants table for BTL and TM, then the submatrix, incoherence,
// restricted-eigenvalue and KL-bound checks on `dataset` (or on a synthetic
// dataset built from the spec when none is given).
DiagnoseResult RunDiagnose(const ExperimentSpec& spec,
                           const std::optional<PreferenceDataset>& dataset);

// Least-squares slope of y against x.
double LeastSquaresSlope(const std::vector<double>& x,
                         const std::vector<double>& y);

// Runs fn(0..count-1) on up to `threads` workers. Rethrows the first
// exception after all workers stop.
void ParallelFor(int count, int threads, const std::function<void(int)>& fn);

}  // namespace sparsepref

#endif  // SPARSEPREF_EXPERIMENT_H_
