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

#include "sparsepref/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "sparsepref/dataset_io.h"
#include "sparsepref/error.h"
#include "sparsepref/synthetic.h"

namespace sparsepref {
namespace {

using Clock = std::chrono::steady_clock;

struct SyntheticTask {
  long n;
  int k;
  double sigma;
  int trial;
};

struct FitPlan {
  EstimatorKind estimator;
  double beta;
};

std::vector<FitPlan> PlansFor(const ExperimentSpec& spec,
                              const std::vector<double>& l1_betas) {
  std::vector<FitPlan> plans;
  for (EstimatorKind e : spec.estimators) {
    if (e == EstimatorKind::kL1) {
      for (double b : l1_betas) plans.push_back({e, b});
    } else {
      plans.push_back({e, 0.0});
    }
  }
  return plans;
}

// Fits every plan on one synthetic dataset and returns the rows in plan order.
std::vector<ResultRow> RunSyntheticTask(const ExperimentSpec& spec,
                                        const SyntheticTask& task,
                                        const std::vector<double>& l1_betas) {
  SyntheticSpec syn;
  syn.d = spec.d;
  syn.k = task.k;
  syn.n = static_cast<int>(task.n);
  syn.sigma = task.sigma;
  syn.link = spec.link;
  syn.seed = TrialSeed(spec, task.n, task.k, task.sigma, task.trial);
  const SyntheticData data = GenDataset(syn);
  const Link link(spec.link);
  const Eigen::MatrixXd& gram = data.dataset.gram();
  const Eigen::VectorXd& truth = data.theta_star.values();

  std::vector<ResultRow> rows;
  for (const FitPlan& plan : PlansFor(spec, l1_betas)) {
    const auto start = Clock::now();
    EstimateReport rep;
    switch (plan.estimator) {
      case EstimatorKind::kMl:
        rep = FitMl(data.dataset, link, task.sigma, spec.SolverConfig(0.0));
        break;
      case EstimatorKind::kL1:
        rep = FitL1(data.dataset, link, task.sigma, spec.SolverConfig(plan.beta));
        break;
      case EstimatorKind::kL0:
        rep = FitL0(data.dataset, link, task.sigma, spec.SolverConfig(0.0),
                    task.k);
        break;
    }
    ResultRow row;
    row.kind = spec.kind;
    row.n = task.n;
    row.d = spec.d;
    row.k = task.k;
    row.sigma = task.sigma;
    row.beta = plan.beta;
    row.seed = syn.seed;
    row.estimator = plan.estimator;
    const Eigen::VectorXd& est = rep.theta_hat.values();
    row.error_sigma_norm = EmpiricalError(est, truth, gram);
    row.error_l2 = (est - truth).squaredNorm();
    row.sparsity_ratio = rep.theta_hat.SparsityRatio();
    row.iterations = rep.iterations;
    row.converged = rep.converged;
    if (spec.record_time) {
      row.wall_time_s =
          std::chrono::duration<double>(Clock::now() - start).count();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int EstimatorOrder(EstimatorKind e) { return static_cast<int>(e); }

// Orders rows by (grid point, trial, estimator). Rows are produced in
// (n, k, sigma, trial) task order, so a stable sort on the grid coordinates
// keeps trials ascending inside each grid point.
void SortRows(std::vector<ResultRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ResultRow& a, const ResultRow& b) {
                     auto key = [](const ResultRow& r) {
                       return std::make_tuple(r.n, r.k.value_or(0),
                                              r.sigma.value_or(0.0),
                                              r.beta.value_or(0.0));
                     };
                     return key(a) < key(b);
                   });
}

std::vector<ResultRow> RunSyntheticSweep(const ExperimentSpec& spec,
                                         const std::vector<long>& ns,
                                         bool beta_from_rule,
                                         const std::vector<double>& betas) {
  std::vector<SyntheticTask> tasks;
  for (long n : ns) {
    for (int k : spec.grid.k) {
      for (double s : spec.grid.sigma) {
        for (int t = 0; t < spec.repetitions; ++t) tasks.push_back({n, k, s, t});
      }
    }
  }
  std::vector<std::vector<ResultRow>> out(tasks.size());
  ParallelFor(static_cast<int>(tasks.size()), spec.threads, [&](int i) {
    const auto& task = tasks[i];
    std::vector<double> l1_betas = betas;
    if (beta_from_rule) {
      l1_betas = {spec.grid.c / std::sqrt(static_cast<double>(task.n))};
    }
    out[i] = RunSyntheticTask(spec, task, l1_betas);
  });
  std::vector<ResultRow> rows;
  for (auto& part : out) {
    for (auto& r : part) rows.push_back(std::move(r));
  }
  SortRows(rows);
  return rows;
}

std::vector<CurvePoint> MeanCurve(const std::vector<ResultRow>& rows,
                                  bool x_is_sparsity) {
  std::map<std::tuple<int, double, double>, std::pair<double, int>> acc;
  for (const auto& r : rows) {
    if (!r.error_sigma_norm) continue;
    const double x = x_is_sparsity
                         ? static_cast<double>(r.k.value_or(0)) / r.d
                         : static_cast<double>(r.n);
    auto& slot = acc[{EstimatorOrder(r.estimator), x, r.beta.value_or(0.0)}];
    slot.first += *r.error_sigma_norm;
    slot.second += 1;
  }
  std::vector<CurvePoint> curve;
  for (const auto& [key, sum] : acc) {
    curve.push_back({static_cast<EstimatorKind>(std::get<0>(key)),
                     std::get<1>(key), sum.first / sum.second, sum.second});
  }
  return curve;
}

std::string FormatOptional(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string();
}

}  // namespace

// Names ----------------------------------------------------------------------

std::string_view KindName(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kRateCurve: return "rate_curve";
    case ExperimentKind::kSparsityCurve: return "sparsity_curve";
    case ExperimentKind::kBetaContour: return "beta_contour";
    case ExperimentKind::kFrozenFeatures: return "frozen_features";
    case ExperimentKind::kDiagnose: return "diagnose";
  }
  return "unknown";
}

ExperimentKind ParseKind(std::string_view name) {
  for (auto k : {ExperimentKind::kRateCurve, ExperimentKind::kSparsityCurve,
                 ExperimentKind::kBetaContour, ExperimentKind::kFrozenFeatures,
                 ExperimentKind::kDiagnose}) {
    if (KindName(k) == name) return k;
  }
  throw ParseError("unknown experiment kind '" + std::string(name) + "'");
}

std::string_view EstimatorName(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kMl: return "ml";
    case EstimatorKind::kL1: return "l1";
    case EstimatorKind::kL0: return "l0";
  }
  return "unknown";
}

EstimatorKind ParseEstimator(std::string_view name) {
  for (auto e : {EstimatorKind::kMl, EstimatorKind::kL1, EstimatorKind::kL0}) {
    if (EstimatorName(e) == name) return e;
  }
  throw ParseError("unknown estimator '" + std::string(name) +
                   "' (expected ml, l1 or l0)");
}

std::vector<double> Range::Values() const {
  if (!(step > 0) || !(hi >= lo)) {
    throw DomainError("range needs step > 0 and hi >= lo");
  }
  const long count = std::lround(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> v(count);
  for (long i = 0; i < count; ++i) v[i] = lo + step * i;
  return v;
}

// ExperimentSpec --------------------------------------------------------------

ExperimentSpec ExperimentSpec::Defaults(ExperimentKind kind) {
  ExperimentSpec s;
  s.kind = kind;
  switch (kind) {
    case ExperimentKind::kSparsityCurve:
      s.grid.n = {100};
      s.grid.k = {1, 2, 5, 10, 20, 50, 100};
      s.grid.sigma = {0.1};
      s.grid.beta = {0.1};
      break;
    case ExperimentKind::kRateCurve:
      s.grid.n = {100, 200, 400, 800, 1600, 3200};
      s.grid.k = {5};
      s.grid.sigma = {0.1};
      s.grid.c = 1.0;
      break;
    case ExperimentKind::kBetaContour:
      s.grid.k = {5};
      s.grid.sigma = {0.1};
      s.repetitions = 5;
      s.estimators = {EstimatorKind::kL1};
      break;
    case ExperimentKind::kFrozenFeatures:
      s.grid.c = 0.5;
      s.B = 100.0;
      s.repetitions = 1;
      break;
    case ExperimentKind::kDiagnose:
      s.d = 10;
      s.B = 1.0;
      s.grid.n = {200};
      s.grid.k = {2};
      s.grid.sigma = {1.0};
      s.repetitions = 1;
      break;
  }
  return s;
}

void ExperimentSpec::Validate() const {
  if (d < 1) throw DomainError("d must be at least 1");
  if (!(B > 0)) throw DomainError("B must be positive");
  if (repetitions < 1) throw DomainError("repetitions must be at least 1");
  if (threads < 1) throw DomainError("threads must be at least 1");
  if (estimators.empty()) throw DomainError("at least one estimator is required");
  for (long n : grid.n) {
    if (n < 1) throw DomainError("grid.n entries must be at least 1");
  }
  for (int k : grid.k) {
    if (k < 1 || k > d) throw DomainError("grid.k entries must lie in [1, d]");
  }
  for (double s : grid.sigma) {
    if (!(s > 0)) throw DomainError("grid.sigma entries must be positive");
  }
  for (double b : grid.beta) {
    if (!(b >= 0)) throw DomainError("grid.beta entries must be nonnegative");
  }
  if (!(grid.c > 0)) throw DomainError("grid.c must be positive");
  SolverConfig(0.0).Validate();

  const bool synthetic = kind == ExperimentKind::kRateCurve ||
                         kind == ExperimentKind::kSparsityCurve ||
                         kind == ExperimentKind::kBetaContour;
  if (synthetic) {
    if (grid.k.empty() || grid.sigma.empty()) {
      throw DomainError("grid.k and grid.sigma must be nonempty");
    }
    if (kind == ExperimentKind::kBetaContour) {
      log10_n.Values();
      log10_beta.Values();
    } else if (grid.n.empty()) {
      throw DomainError("grid.n must be nonempty");
    }
  }
  if (std::find(estimators.begin(), estimators.end(), EstimatorKind::kL0) !=
      estimators.end()) {
    if (kind == ExperimentKind::kFrozenFeatures) {
      throw DomainError("the l0 estimator needs a known sparsity k; not "
                        "available for frozen_features");
    }
    for (int k : grid.k) {
      const std::uint64_t supports = CountSubsets(d, 0, k);
      if (supports > kL0EnumerationCap) {
        throw CapacityError("l0 estimator at d=" + std::to_string(d) +
                            ", k=" + std::to_string(k) + " needs " +
                            std::to_string(supports) +
                            " supports, above the cap of " +
                            std::to_string(kL0EnumerationCap));
      }
    }
  }
}

EstimatorConfig ExperimentSpec::SolverConfig(double beta) const {
  EstimatorConfig c;
  c.B = B;
  c.beta = beta;
  c.max_iter = max_iter;
  c.tol = tol;
  return c;
}

std::uint64_t TrialSeed(const ExperimentSpec& spec, long n, int k, double sigma,
                        int trial) {
  return HashSeed({spec.base_seed, static_cast<std::uint64_t>(n),
                   static_cast<std::uint64_t>(spec.d),
                   static_cast<std::uint64_t>(k), DoubleBits(sigma),
                   static_cast<std::uint64_t>(spec.link),
                   static_cast<std::uint64_t>(trial)});
}

// Runners ----------------------------------------------------------------------

SweepResult RunSparsityCurve(const ExperimentSpec& spec) {
  spec.Validate();
  SweepResult r;
  const bool rule = spec.grid.beta.empty();
  r.rows = RunSyntheticSweep(spec, spec.grid.n, rule, spec.grid.beta);
  r.curve = MeanCurve(r.rows, /*x_is_sparsity=*/true);
  return r;
}

SweepResult RunRateCurve(const ExperimentSpec& spec) {
  spec.Validate();
  SweepResult r;
  const bool rule = spec.grid.beta.empty();
  r.rows = RunSyntheticSweep(spec, spec.grid.n, rule, spec.grid.beta);
  // With c / sqrt(n) the beta column varies with n; group on n only.
  std::vector<ResultRow> keyed = r.rows;
  if (rule) {
    for (auto& row : keyed) {
      if (row.estimator == EstimatorKind::kL1) row.beta = spec.grid.c;
    }
  }
  r.curve = MeanCurve(keyed, /*x_is_sparsity=*/false);
  std::map<EstimatorKind, std::pair<std::vector<double>, std::vector<double>>> xy;
  if (rule || spec.grid.beta.size() <= 1) {
    for (const auto& p : r.curve) {
      if (!(p.mean_error > 0)) continue;
      xy[p.estimator].first.push_back(std::log(p.x));
      xy[p.estimator].second.push_back(std::log(p.mean_error));
    }
    for (const auto& [e, v] : xy) {
      if (v.first.size() >= 2) r.slopes[e] = LeastSquaresSlope(v.first, v.second);
    }
  }
  return r;
}

ContourResult RunBetaContour(const ExperimentSpec& spec_in) {
  ExperimentSpec spec = spec_in;
  spec.estimators = {EstimatorKind::kL1};
  spec.Validate();

  const std::vector<double> log_ns = spec.log10_n.Values();
  const std::vector<double> log_betas = spec.log10_beta.Values();
  std::vector<long> ns;
  for (double x : log_ns) ns.push_back(std::llround(std::pow(10.0, x)));
  std::vector<double> betas;
  for (double y : log_betas) betas.push_back(std::pow(10.0, y));

  ContourResult r;
  r.rows = RunSyntheticSweep(spec, ns, /*beta_from_rule=*/false, betas);

  // Cell means; grid.k and grid.sigma are pooled when they hold several values.
  for (std::size_t i = 0; i < ns.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    double best_log_beta = 0.0;
    for (std::size_t j = 0; j < betas.size(); ++j) {
      double sum = 0.0;
      int count = 0;
      for (const auto& row : r.rows) {
        if (row.n == ns[i] && row.beta == betas[j] && row.error_sigma_norm) {
          sum += *row.error_sigma_norm;
          ++count;
        }
      }
      const double mean = count ? sum / count : 0.0;
      r.cells.push_back({ns[i], log_ns[i], log_betas[j], betas[j], mean});
      if (mean < best) {
        best = mean;
        best_log_beta = log_betas[j];
      }
    }
    r.valley.emplace_back(log_ns[i], best_log_beta);
  }
  if (r.valley.size() >= 2) {
    std::vector<double> x, y;
    for (const auto& [a, b] : r.valley) {
      x.push_back(a);
      y.push_back(b);
    }
    r.valley_slope = LeastSquaresSlope(x, y);
  }
  return r;
}

std::vector<ResultRow> RunFrozenFeatures(const ExperimentSpec& spec_in,
                                         const PreferenceDataset& train,
                                         const PreferenceDataset& test) {
  ExperimentSpec spec = spec_in;
  spec.kind = ExperimentKind::kFrozenFeatures;
  spec.Validate();
  if (train.empty()) throw EmptyInputError("training set has no samples");
  if (test.empty()) throw EmptyInputError("test set has no samples");
  if (train.d() != test.d()) {
    throw ShapeError("train dimension " + std::to_string(train.d()) +
                     " differs from test dimension " + std::to_string(test.d()));
  }
  const Link link(spec.link);
  const double beta =
      spec.grid.c / std::sqrt(static_cast<double>(train.n()));

  std::vector<ResultRow> rows;
  for (EstimatorKind e : spec.estimators) {
    const auto start = Clock::now();
    const double b = e == EstimatorKind::kL1 ? beta : 0.0;
    const EstimateReport rep =
        FitL1(train, link, spec.fit_sigma, spec.SolverConfig(b));
    ResultRow row;
    row.kind = ExperimentKind::kFrozenFeatures;
    row.n = train.n();
    row.d = train.d();
    row.sigma = spec.fit_sigma;
    row.beta = b;
    row.seed = spec.base_seed;
    row.estimator = e;
    row.accuracy = Accuracy(rep.theta_hat.values(), test);
    row.sparsity_ratio = rep.theta_hat.SparsityRatio();
    row.iterations = rep.iterations;
    row.converged = rep.converged;
    if (spec.record_time) {
      row.wall_time_s =
          std::chrono::duration<double>(Clock::now() - start).count();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResultRow> RunFrozenFeatures(const ExperimentSpec& spec,
                                         const std::string& train_path,
                                         const std::string& test_path) {
  return RunFrozenFeatures(spec, ReadDataset(train_path), ReadDataset(test_path));
}

// CSV ----------------------------------------------------------------------------

void WriteResultsCsv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kResultCsvHeader << '\n';
  for (const auto& r : rows) {
    out << KindName(r.kind) << ',' << r.n << ',' << r.d << ','
        << (r.k ? std::to_string(*r.k) : std::string()) << ','
        << FormatOptional(r.sigma) << ',' << FormatOptional(r.beta) << ','
        << r.seed << ',' << EstimatorName(r.estimator) << ','
        << FormatOptional(r.error_sigma_norm) << ','
        << FormatOptional(r.error_l2) << ',' << FormatOptional(r.accuracy)
        << ',' << FormatDouble(r.sparsity_ratio) << ',' << r.iterations << ','
        << (r.converged ? "true" : "false") << ','
        << FormatOptional(r.wall_time_s) << '\n';
  }
}

void WriteResultsCsv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  WriteResultsCsv(rows, out);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

namespace {

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T ParseNumber(const std::string& s, long line) {
  std::istringstream is(s);
  T v{};
  is >> v;
  if (!is || !is.eof()) {
    throw ParseError("line " + std::to_string(line) + ": cannot parse '" + s +
                     "'");
  }
  return v;
}

std::optional<double> ParseOptional(const std::string& s, long line) {
  if (s.empty()) return std::nullopt;
  return ParseNumber<double>(s, line);
}

}  // namespace

std::vector<ResultRow> ReadResultsCsv(std::istream& in) {
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw ParseError("line 1: missing header");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultCsvHeader) {
    throw ParseError("line 1: unexpected result header");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = SplitFields(line);
    if (f.size() != 15) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 15 "
                       "columns, got " + std::to_string(f.size()));
    }
    ResultRow r;
    try {
      r.kind = ParseKind(f[0]);
      r.estimator = ParseEstimator(f[7]);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    r.n = ParseNumber<long>(f[1], line_no);
    r.d = ParseNumber<int>(f[2], line_no);
    if (!f[3].empty()) r.k = ParseNumber<int>(f[3], line_no);
    r.sigma = ParseOptional(f[4], line_no);
    r.beta = ParseOptional(f[5], line_no);
    r.seed = ParseNumber<std::uint64_t>(f[6], line_no);
    r.error_sigma_norm = ParseOptional(f[8], line_no);
    r.error_l2 = ParseOptional(f[9], line_no);
    r.accuracy = ParseOptional(f[10], line_no);
    r.sparsity_ratio = ParseNumber<double>(f[11], line_no);
    r.iterations = ParseNumber<int>(f[12], line_no);
    if (f[13] != "true" && f[13] != "false") {
      throw ParseError("line " + std::to_string(line_no) +
                       ": converged must be true or false");
    }
    r.converged = f[13] == "true";
    r.wall_time_s = ParseOptional(f[14], line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> ReadResultsCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open result file '" + path + "'");
  try {
    return ReadResultsCsv(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// Utilities -----------------------------------------------------------------------

double LeastSquaresSlope(const std::vector<double>& x,
                         const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("slope needs at least two (x, y) pairs");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw DomainError("slope undefined for constant x");
  return sxy / sxx;
}

void ParallelFor(int count, int threads, const std::function<void(int)>& fn) {
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (!failed.load()) {
          const int i = next.fetch_add(1);
          if (i >= count) return;
          try {
            fn(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!error) error = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace sparsepref
