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

// Command-line front end: synthetic data, single fits, the experiment sweeps,
// diagnostics and plotting.
//
// Exit codes: 0 success, 2 configuration or parse error, 3 capacity error,
// 4 I/O error, 1 anything else.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sparsepref/config.h"
#include "sparsepref/dataset_io.h"
#include "sparsepref/error.h"
#include "sparsepref/estimators.h"
#include "sparsepref/experiment.h"
#include "sparsepref/plot.h"
#include "sparsepref/synthetic.h"

namespace sp = sparsepref;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitIo = 4;

// Dotted-name flags that mirror the config keys; values set on the command
// line win over the config file.
struct SpecFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void Register(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file");
    for (const auto& key : sp::ConfigKeys()) {
      const std::string name(key.name);
      options[name] =
          app->add_option("--" + name, values[name], std::string(key.help))
              ->group("Experiment settings");
    }
  }

  sp::ExperimentSpec Build(sp::ExperimentKind kind) const {
    sp::ExperimentSpec spec = sp::ExperimentSpec::Defaults(kind);
    sp::ConfigMap config;
    if (!config_path.empty()) config = sp::LoadConfigFile(config_path);
    for (const auto& [name, opt] : options) {
      if (opt->count() > 0) config[name] = values.at(name);
    }
    sp::ApplyConfig(config, spec);
    if (spec.kind != kind) {
      throw sp::ParseError("config kind '" + std::string(sp::KindName(spec.kind)) +
                           "' does not match the '" +
                           std::string(sp::KindName(kind)) + "' subcommand");
    }
    return spec;
  }
};

void Emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sp::IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw sp::IoError("write to '" + path + "' failed");
}

std::string ResultsCsv(const std::vector<sp::ResultRow>& rows) {
  std::ostringstream out;
  sp::WriteResultsCsv(rows, out);
  return out.str();
}

void PrintCurve(const sp::SweepResult& r) {
  for (const auto& p : r.curve) {
    std::cerr << sp::EstimatorName(p.estimator) << "  x=" << p.x
              << "  mean error=" << p.mean_error << "  (" << p.count
              << " trials)\n";
  }
  for (const auto& [e, slope] : r.slopes) {
    std::cerr << sp::EstimatorName(e) << " log-log slope: " << slope << '\n';
  }
}

int Run(int argc, char** argv) {
  CLI::App app{"Sparse preference learning: estimators, experiments and "
               "diagnostics"};
  app.require_subcommand(1);

  // simulate
  sp::SyntheticSpec syn;
  std::string syn_link = "btl";
  std::string syn_out;
  std::string syn_theta_out;
  auto* simulate = app.add_subcommand(
      "simulate", "Draw a k-sparse theta* and a labelled synthetic dataset");
  simulate->add_option("--d", syn.d, "dimension")->capture_default_str();
  simulate->add_option("--k", syn.k, "sparsity of theta*")->capture_default_str();
  simulate->add_option("--n", syn.n, "number of comparisons")->capture_default_str();
  simulate->add_option("--sigma", syn.sigma, "noise scale")->capture_default_str();
  simulate->add_option("--link", syn_link, "btl or tm")->capture_default_str();
  simulate->add_option("--seed", syn.seed, "seed")->capture_default_str();
  simulate->add_option("--out", syn_out, "dataset file (.csv or .jsonl)")
      ->required();
  simulate->add_option("--theta-out", syn_theta_out,
                       "write theta* as JSON to this file");

  // fit
  std::string fit_data;
  std::string fit_estimator = "l1";
  std::string fit_link = "btl";
  std::string fit_out;
  double fit_sigma = 1.0;
  double fit_beta = -1.0;
  double fit_c = 1.0;
  int fit_k = 1;
  sp::EstimatorConfig fit_cfg;
  auto* fit = app.add_subcommand("fit", "Fit one estimator on a dataset file");
  fit->add_option("--data", fit_data, "dataset file")->required();
  fit->add_option("--estimator", fit_estimator, "ml, l1 or l0")
      ->capture_default_str();
  fit->add_option("--link", fit_link, "btl or tm")->capture_default_str();
  fit->add_option("--sigma", fit_sigma, "noise scale")->capture_default_str();
  fit->add_option("--beta", fit_beta, "l1 weight (default c / sqrt(n))");
  fit->add_option("--c", fit_c, "constant in c / sqrt(n)")->capture_default_str();
  fit->add_option("--k", fit_k, "support size for l0")->capture_default_str();
  fit->add_option("--B", fit_cfg.B, "ball radius")->capture_default_str();
  fit->add_option("--max-iter", fit_cfg.max_iter, "iteration cap")
      ->capture_default_str();
  fit->add_option("--tol", fit_cfg.tol, "relative objective tolerance")
      ->capture_default_str();
  fit->add_option("--out", fit_out, "write the JSON report here (default stdout)");

  // sweeps
  struct Sweep {
    const char* name;
    const char* help;
    sp::ExperimentKind kind;
    SpecFlags flags;
    CLI::App* cmd = nullptr;
  };
  std::vector<Sweep> sweeps;
  sweeps.push_back({"sparsity-curve", "Error against k/d for ml and l1",
                    sp::ExperimentKind::kSparsityCurve, {}});
  sweeps.push_back({"rate-curve", "Error against n with beta = c / sqrt(n)",
                    sp::ExperimentKind::kRateCurve, {}});
  sweeps.push_back({"beta-contour", "l1 error over a (log n, log beta) grid",
                    sp::ExperimentKind::kBetaContour, {}});
  sweeps.push_back({"frozen-features",
                    "l1 and baseline heads on embedding files",
                    sp::ExperimentKind::kFrozenFeatures, {}});
  sweeps.push_back({"diagnose", "Constants table and assumption checks",
                    sp::ExperimentKind::kDiagnose, {}});
  for (auto& s : sweeps) {
    s.cmd = app.add_subcommand(s.name, s.help);
    s.flags.Register(s.cmd);
  }

  // plot
  std::string plot_in;
  std::string plot_out = ".";
  auto* plot = app.add_subcommand("plot", "Render SVG plots from a result CSV");
  plot->add_option("--in", plot_in, "result CSV")->required();
  plot->add_option("--out", plot_out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (simulate->parsed()) {
    syn.link = sp::ParseLinkKind(syn_link);
    const sp::SyntheticData data = sp::GenDataset(syn);
    sp::WriteDataset(data.dataset, syn_out);
    if (!syn_theta_out.empty()) {
      const auto& v = data.theta_star.values();
      nlohmann::json j;
      j["theta_star"] = std::vector<double>(v.data(), v.data() + v.size());
      j["support"] = data.theta_star.Support().indices();
      Emit(j.dump(2) + "\n", syn_theta_out);
    }
    return 0;
  }

  if (fit->parsed()) {
    const sp::PreferenceDataset data = sp::ReadDataset(fit_data);
    const sp::Link link(sp::ParseLinkKind(fit_link));
    const sp::EstimatorKind kind = sp::ParseEstimator(fit_estimator);
    sp::EstimateReport rep;
    switch (kind) {
      case sp::EstimatorKind::kMl:
        rep = sp::FitMl(data, link, fit_sigma, fit_cfg);
        break;
      case sp::EstimatorKind::kL1:
        fit_cfg.beta = fit_beta >= 0
                           ? fit_beta
                           : fit_c / std::sqrt(static_cast<double>(data.n()));
        rep = sp::FitL1(data, link, fit_sigma, fit_cfg);
        break;
      case sp::EstimatorKind::kL0:
        rep = sp::FitL0(data, link, fit_sigma, fit_cfg, fit_k);
        break;
    }
    const auto& v = rep.theta_hat.values();
    nlohmann::json j;
    j["estimator"] = fit_estimator;
    j["beta"] = fit_cfg.beta;
    j["objective"] = rep.objective();
    j["iterations"] = rep.iterations;
    j["converged"] = rep.converged;
    j["support"] = rep.support.indices();
    j["sparsity_ratio"] = rep.theta_hat.SparsityRatio();
    j["train_accuracy"] = sp::Accuracy(v, data);
    j["theta"] = std::vector<double>(v.data(), v.data() + v.size());
    Emit(j.dump(2) + "\n", fit_out);
    return 0;
  }

  if (plot->parsed()) {
    for (const auto& path : sp::EmitPlots(sp::ReadResultsCsv(plot_in), plot_out)) {
      std::cerr << "wrote " << path << '\n';
    }
    return 0;
  }

  for (auto& s : sweeps) {
    if (!s.cmd->parsed()) continue;
    const sp::ExperimentSpec spec = s.flags.Build(s.kind);
    switch (s.kind) {
      case sp::ExperimentKind::kSparsityCurve: {
        const auto r = sp::RunSparsityCurve(spec);
        Emit(ResultsCsv(r.rows), spec.output_path);
        PrintCurve(r);
        break;
      }
      case sp::ExperimentKind::kRateCurve: {
        const auto r = sp::RunRateCurve(spec);
        Emit(ResultsCsv(r.rows), spec.output_path);
        PrintCurve(r);
        break;
      }
      case sp::ExperimentKind::kBetaContour: {
        const auto r = sp::RunBetaContour(spec);
        Emit(ResultsCsv(r.rows), spec.output_path);
        for (const auto& [x, y] : r.valley) {
          std::cerr << "log10 n=" << x << "  argmin log10 beta=" << y << '\n';
        }
        std::cerr << "valley slope: " << r.valley_slope << '\n';
        break;
      }
      case sp::ExperimentKind::kFrozenFeatures: {
        if (spec.train_path.empty() || spec.test_path.empty()) {
          throw sp::ParseError("frozen-features needs --frozen.train and "
                               "--frozen.test");
        }
        const auto rows =
            sp::RunFrozenFeatures(spec, spec.train_path, spec.test_path);
        Emit(ResultsCsv(rows), spec.output_path);
        for (const auto& r : rows) {
          std::cerr << sp::EstimatorName(r.estimator) << "  beta=" << *r.beta
                    << "  test accuracy=" << *r.accuracy
                    << "  sparsity ratio=" << r.sparsity_ratio << '\n';
        }
        break;
      }
      case sp::ExperimentKind::kDiagnose: {
        std::optional<sp::PreferenceDataset> data;
        if (!spec.data_path.empty()) data = sp::ReadDataset(spec.data_path);
        const auto r = sp::RunDiagnose(spec, data);
        std::cout << r.summary;
        if (!spec.output_path.empty()) Emit(r.csv, spec.output_path);
        break;
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const sp::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const sp::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const sp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
