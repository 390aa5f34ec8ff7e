// Copyright 2026 The gwasverify Authors
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

#ifndef GWV_EVAL_HPP_
#define GWV_EVAL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gwv/metadata.hpp"
#include "gwv/synth.hpp"
#include "gwv/verify.hpp"

namespace gwv {

struct ConfusionMetrics {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t tn = 0;
  int64_t fn = 0;

  double tpr() const;
  double tnr() const;
  double accuracy() const;
};

// truth_correct[i] says whether statistic i was truly reported correctly.
ConfusionMetrics confusion_metrics(const std::vector<bool>& truth_correct,
                                   std::span<const Verdict> verdicts);

// Mean normalized absolute deviation between reported and correct values.
double utility_loss(StatKind kind, std::span<const double> reported,
                    std::span<const double> correct, double z_norm);

// Per-statistic confusion of a verification report against the injected
// per-SNP ground truth (rows are grouped in threes per reported SNP).
ConfusionMetrics report_confusion(const VerificationReport& report,
                                  std::span<const ScenarioKind> truth,
                                  StatKind kind);

// Fraction of rows of the given statistic whose three-way classification
// (correct / oversell / undersell) matches the injected kind.
double three_way_accuracy(const VerificationReport& report,
                          std::span<const ScenarioKind> truth, StatKind kind);

// Truth sidecar: snp_id,kind CSV aligned with a bundle's reported list.
void write_truth_csv(const std::string& path,
                     std::span<const SnpStatistics> reported,
                     std::span<const ScenarioKind> truth);
std::vector<ScenarioKind> read_truth_csv(const std::string& path,
                                         std::span<const SnpStatistics> reported);

// Experiment grid reproducing the evaluation sweeps: scenario x epsilon
// x l (x epsilon_dp), averaged over `trials` fresh researcher datasets.
struct ExperimentConfig {
  SynthesisConfig d_spec;
  SynthesisConfig e_spec;
  SynthesisConfig f_spec;
  std::vector<size_t> l_values{100};
  std::vector<double> epsilons{3.0};
  std::vector<double> epsilon_dp;  // empty disables the DP arm
  double dp_sensitivity_p = 1.0;
  double dp_sensitivity_or = 1.0;
  std::vector<ErrorScenario> scenarios{ErrorScenario{}};
  std::vector<ErrorScenario> calibration_sweep;
  size_t calibration_splits = 5;
  int calibration_trials = 3;
  int verify_trials = 3;
  int trials = 5;
  uint64_t root_seed = 0;
  bool audit_enabled = false;
  std::vector<size_t> audit_axis;
  std::vector<double> audit_epsilons;
  size_t cohort_size = 25;
  int audit_reps = 20;
  double audit_fpr = 0.05;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

// Runs the grid and writes tpr_tnr.csv, utility_sweep.csv,
// power_curves.csv (when the audit arm is enabled), and summary.json
// into out_dir. Cells that fail keep a status entry instead of aborting
// the run.
void run_experiment(const ExperimentConfig& config,
                    const std::string& out_dir);

}  // namespace gwv

#endif  // GWV_EVAL_HPP_
