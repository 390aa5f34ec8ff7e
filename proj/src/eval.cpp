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

#include "gwv/eval.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "gwv/audit.hpp"
#include "gwv/error.hpp"
#include "gwv/io.hpp"
#include "gwv/rng.hpp"

namespace gwv {

namespace {

using nlohmann::json;

double ratio(int64_t num, int64_t denom) {
  if (denom == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(num) / static_cast<double>(denom);
}

}  // namespace

double ConfusionMetrics::tpr() const { return ratio(tp, tp + fn); }
double ConfusionMetrics::tnr() const { return ratio(tn, tn + fp); }
double ConfusionMetrics::accuracy() const {
  return ratio(tp + tn, tp + tn + fp + fn);
}

ConfusionMetrics confusion_metrics(const std::vector<bool>& truth_correct,
                                   std::span<const Verdict> verdicts) {
  require(truth_correct.size() == verdicts.size(), ErrorCode::kLengthMismatch,
          "truth and verdict vectors differ in length");
  ConfusionMetrics m;
  for (size_t i = 0; i < verdicts.size(); ++i) {
    bool said_correct = verdicts[i] == Verdict::kCorrect;
    if (truth_correct[i]) {
      (said_correct ? m.tp : m.fn) += 1;
    } else {
      (said_correct ? m.fp : m.tn) += 1;
    }
  }
  return m;
}

double utility_loss(StatKind kind, std::span<const double> reported,
                    std::span<const double> correct, double z_norm) {
  (void)kind;
  require(reported.size() == correct.size(), ErrorCode::kLengthMismatch,
          "reported and correct vectors differ in length");
  require(!reported.empty(), ErrorCode::kDomain, "empty statistic vectors");
  require(z_norm > 0.0, ErrorCode::kDomain, "z_norm must be positive");
  double total = 0.0;
  for (size_t j = 0; j < reported.size(); ++j) {
    total += std::fabs(reported[j] - correct[j]) / z_norm;
  }
  return total / static_cast<double>(reported.size());
}

ConfusionMetrics report_confusion(const VerificationReport& report,
                                  std::span<const ScenarioKind> truth,
                                  StatKind kind) {
  std::vector<bool> truth_correct;
  std::vector<Verdict> verdicts;
  for (size_t idx = 0; idx < report.rows.size(); ++idx) {
    const ReportRow& row = report.rows[idx];
    if (row.statistic != kind) continue;
    size_t snp = idx / 3;
    require(snp < truth.size(), ErrorCode::kLengthMismatch,
            "truth vector shorter than the report");
    truth_correct.push_back(truth[snp] == ScenarioKind::kCorrect);
    verdicts.push_back(row.verdict);
  }
  return confusion_metrics(truth_correct, verdicts);
}

double three_way_accuracy(const VerificationReport& report,
                          std::span<const ScenarioKind> truth, StatKind kind) {
  int64_t matches = 0;
  int64_t total = 0;
  for (size_t idx = 0; idx < report.rows.size(); ++idx) {
    const ReportRow& row = report.rows[idx];
    if (row.statistic != kind) continue;
    size_t snp = idx / 3;
    require(snp < truth.size(), ErrorCode::kLengthMismatch,
            "truth vector shorter than the report");
    ScenarioKind classified;
    if (row.verdict == Verdict::kCorrect) {
      classified = ScenarioKind::kCorrect;
    } else if (row.direction == Direction::kOversell) {
      classified = ScenarioKind::kOversell;
    } else if (row.direction == Direction::kUndersell) {
      classified = ScenarioKind::kUndersell;
    } else {
      ++total;
      continue;  // undirected incorrect never matches a concrete kind
    }
    matches += classified == truth[snp];
    ++total;
  }
  return ratio(matches, total);
}

void write_truth_csv(const std::string& path,
                     std::span<const SnpStatistics> reported,
                     std::span<const ScenarioKind> truth) {
  require(reported.size() == truth.size(), ErrorCode::kLengthMismatch,
          "reported and truth vectors differ in length");
  std::ostringstream out;
  out << "snp_id,kind\n";
  for (size_t j = 0; j < reported.size(); ++j) {
    out << reported[j].snp_id << ',' << to_string(truth[j]) << '\n';
  }
  write_text_file(path, out.str());
}

std::vector<ScenarioKind> read_truth_csv(
    const std::string& path, std::span<const SnpStatistics> reported) {
  std::istringstream in(read_text_file(path));
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::kParse,
          "empty truth CSV");
  std::vector<ScenarioKind> truth;
  size_t j = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t comma = line.find(',');
    require(comma != std::string::npos, ErrorCode::kParse,
            "truth row needs snp_id,kind: " + line);
    require(j < reported.size(), ErrorCode::kLengthMismatch,
            "truth CSV longer than the reported list");
    std::string id = line.substr(0, comma);
    std::string kind = line.substr(comma + 1);
    require(id == reported[j].snp_id, ErrorCode::kMismatch,
            "truth CSV does not align with the reported list at " + id);
    if (kind == "correct") {
      truth.push_back(ScenarioKind::kCorrect);
    } else if (kind == "oversell") {
      truth.push_back(ScenarioKind::kOversell);
    } else if (kind == "undersell") {
      truth.push_back(ScenarioKind::kUndersell);
    } else {
      fail(ErrorCode::kParse, "unknown truth kind: " + kind);
    }
    ++j;
  }
  require(j == reported.size(), ErrorCode::kLengthMismatch,
          "truth CSV shorter than the reported list");
  return truth;
}

namespace {

SynthesisConfig parse_dataset_spec(const json& spec) {
  KeyValues kv;
  for (auto it = spec.begin(); it != spec.end(); ++it) {
    if (it.value().is_string()) {
      kv.emplace_back(it.key(), it.value().get<std::string>());
    } else {
      kv.emplace_back(it.key(), it.value().dump());
    }
  }
  return parse_synthesis_config(kv);
}

std::vector<ErrorScenario> parse_scenario_list(const json& list) {
  std::vector<ErrorScenario> scenarios;
  for (const json& entry : list) {
    scenarios.push_back(parse_scenario(entry.get<std::string>()));
  }
  return scenarios;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kParse, std::string("bad experiment JSON: ") + e.what());
  }
  ExperimentConfig config;
  try {
    config.d_spec = parse_dataset_spec(doc.at("datasets").at("d"));
    config.e_spec = parse_dataset_spec(doc.at("datasets").at("e"));
    config.f_spec = parse_dataset_spec(doc.at("datasets").at("f"));
    if (doc.contains("l")) config.l_values = doc["l"].get<std::vector<size_t>>();
    if (doc.contains("epsilon")) {
      config.epsilons = doc["epsilon"].get<std::vector<double>>();
    }
    if (doc.contains("epsilon_dp")) {
      config.epsilon_dp = doc["epsilon_dp"].get<std::vector<double>>();
    }
    if (doc.contains("dp_sensitivity")) {
      const json& s = doc["dp_sensitivity"];
      if (s.contains("p_value")) config.dp_sensitivity_p = s["p_value"];
      if (s.contains("odds_ratio")) config.dp_sensitivity_or = s["odds_ratio"];
    }
    if (doc.contains("scenarios")) {
      config.scenarios = parse_scenario_list(doc["scenarios"]);
    }
    if (doc.contains("calibration")) {
      const json& c = doc["calibration"];
      if (c.contains("sweep")) {
        config.calibration_sweep = parse_scenario_list(c["sweep"]);
      }
      if (c.contains("splits")) config.calibration_splits = c["splits"];
      if (c.contains("trials")) config.calibration_trials = c["trials"];
    }
    if (doc.contains("verify_trials")) {
      config.verify_trials = doc["verify_trials"];
    }
    if (doc.contains("trials")) config.trials = doc["trials"];
    if (doc.contains("seed")) config.root_seed = doc["seed"];
    if (doc.contains("audit")) {
      const json& a = doc["audit"];
      config.audit_enabled = a.value("enabled", false);
      if (a.contains("axis")) {
        config.audit_axis = a["axis"].get<std::vector<size_t>>();
      }
      if (a.contains("epsilons")) {
        config.audit_epsilons = a["epsilons"].get<std::vector<double>>();
      }
      if (a.contains("cohort_size")) config.cohort_size = a["cohort_size"];
      if (a.contains("reps")) config.audit_reps = a["reps"];
      if (a.contains("fpr")) config.audit_fpr = a["fpr"];
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse,
         std::string("experiment config field error: ") + e.what());
  }
  require(config.trials >= 1, ErrorCode::kDomain, "trials must be >= 1");
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(read_text_file(path));
}

namespace {

// Default calibration sweep: correct reporting plus oversell injections
// spanning a range of utility losses and one undersell arm.
std::vector<ErrorScenario> default_calibration_sweep(
    const GwasRanking& ranking, size_t l) {
  std::vector<ErrorScenario> sweep;
  sweep.push_back(ErrorScenario{});  // correct
  for (double target : {0.1, 0.2, 0.3, 0.4}) {
    ErrorScenario s;
    s.kind = ScenarioKind::kOversell;
    s.offset = offset_for_target_loss(ranking, l, target);
    sweep.push_back(s);
  }
  ErrorScenario under;
  under.kind = ScenarioKind::kUndersell;
  under.offset = offset_for_target_loss(ranking, l, 0.2);
  sweep.push_back(under);
  return sweep;
}

struct CellStats {
  double tpr_sum = 0.0;
  double tnr_sum = 0.0;
  double acc2_sum = 0.0;
  double acc3_sum = 0.0;
  double loss_sum = 0.0;
  int count = 0;
  int tpr_count = 0;
  int tnr_count = 0;
};

}  // namespace

void run_experiment(const ExperimentConfig& config,
                    const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  require(!ec, ErrorCode::kIo, "cannot create directory: " + out_dir);

  json summary;
  summary["status"] = json::object();
  summary["cutoffs"] = json::object();

  CaseControlDataset public_e = synthesize_dataset(config.e_spec);
  CaseControlDataset f_full = synthesize_dataset(config.f_spec);
  std::vector<CaseControlDataset> f_splits =
      partition_dataset(f_full, config.calibration_splits,
                        PartitionAxis::kSnps,
                        derive_seed(config.root_seed, "f-split"));

  std::ostringstream tpr_csv;
  tpr_csv << "scenario,epsilon,epsilon_dp,l,statistic,trials,tpr,tnr,"
             "accuracy2,accuracy3,utility_loss\n";
  std::ostringstream utility_csv;
  utility_csv << "scenario,epsilon,l,trial,loss_p,loss_o,loss_a\n";

  for (size_t li = 0; li < config.l_values.size(); ++li) {
    size_t l = config.l_values[li];
    for (size_t ei = 0; ei < config.epsilons.size(); ++ei) {
      double epsilon = config.epsilons[ei];
      std::string cell_tag = "l=" + std::to_string(l) +
                             ",epsilon=" + format_double(epsilon);
      CutoffSet cutoffs;
      try {
        std::vector<ErrorScenario> sweep = config.calibration_sweep;
        if (sweep.empty()) {
          GwasRanking f_ranking = run_gwas_full(f_splits[0]);
          sweep = default_calibration_sweep(f_ranking, l);
        }
        cutoffs = calibrate_cutoffs(
            f_splits, public_e, l, epsilon, sweep,
            derive_seed(config.root_seed, "calibrate", li, ei),
            config.calibration_trials);
      } catch (const Error& e) {
        summary["status"]["calibration " + cell_tag] =
            std::string(to_string(e.code())) + ": " + e.what();
        continue;
      }
      summary["cutoffs"][cell_tag] = {{"tau_o", cutoffs.tau_o},
                                      {"tau_p", cutoffs.tau_p},
                                      {"tau_a", cutoffs.tau_a}};

      // epsilon_dp = 0 encodes the no-DP arm.
      std::vector<double> dp_arms{0.0};
      dp_arms.insert(dp_arms.end(), config.epsilon_dp.begin(),
                     config.epsilon_dp.end());

      for (size_t si = 0; si < config.scenarios.size(); ++si) {
        const ErrorScenario& scenario = config.scenarios[si];
        for (double eps_dp : dp_arms) {
          std::array<CellStats, 3> per_kind;
          std::string status = "ok";
          for (int trial = 0; trial < config.trials; ++trial) {
            try {
              SynthesisConfig d_spec = config.d_spec;
              d_spec.seed =
                  derive_seed(config.root_seed, "d-seed", trial, d_spec.seed);
              CaseControlDataset d = synthesize_dataset(d_spec);
              GwasRanking ranking = run_gwas_full(d);
              MetadataResult base = build_metadata(
                  d, l, l, epsilon,
                  derive_seed(config.root_seed, "bundle", li * 100 + ei,
                              trial));
              InjectionResult injected = inject_errors(
                  d, base.bundle, ranking, scenario,
                  derive_seed(config.root_seed, "inject", si, trial));
              if (eps_dp > 0.0) {
                LaplaceSensitivity sens =
                    default_sensitivity(d.case_count());
                sens.p_value = config.dp_sensitivity_p;
                sens.odds_ratio = config.dp_sensitivity_or;
                injected.bundle.reported = laplace_perturb_statistics(
                    injected.bundle.reported, eps_dp, sens,
                    derive_seed(config.root_seed, "dp", si, trial));
              }
              VerificationReport report = verify_bundle(
                  injected.bundle, public_e, cutoffs, config.verify_trials,
                  derive_seed(config.root_seed, "verify", si * 1000 + trial,
                              li * 100 + ei));
              utility_csv << scenario.describe() << ','
                          << format_double(epsilon) << ',' << l << ','
                          << trial << ',' << format_double(injected.loss_p)
                          << ',' << format_double(injected.loss_o) << ','
                          << format_double(injected.loss_a) << '\n';
              for (StatKind kind : kAllStatKinds) {
                int ki = static_cast<int>(kind);
                ConfusionMetrics cm =
                    report_confusion(report, injected.per_snp, kind);
                CellStats& cs = per_kind[ki];
                if (cm.tp + cm.fn > 0) {
                  cs.tpr_sum += cm.tpr();
                  ++cs.tpr_count;
                }
                if (cm.tn + cm.fp > 0) {
                  cs.tnr_sum += cm.tnr();
                  ++cs.tnr_count;
                }
                cs.acc2_sum += cm.accuracy();
                cs.acc3_sum +=
                    three_way_accuracy(report, injected.per_snp, kind);
                cs.loss_sum += kind == StatKind::kPValue ? injected.loss_p
                               : kind == StatKind::kOddsRatio
                                   ? injected.loss_o
                                   : injected.loss_a;
                ++cs.count;
              }
            } catch (const Error& e) {
              status = std::string(to_string(e.code())) + ": " + e.what();
            }
          }
          std::string full_tag = scenario.describe() + "," + cell_tag +
                                 ",epsilon_dp=" + format_double(eps_dp);
          summary["status"][full_tag] = status;
          for (StatKind kind : kAllStatKinds) {
            const CellStats& cs = per_kind[static_cast<int>(kind)];
            if (cs.count == 0) continue;
            auto mean = [](double sum, int count) {
              return count > 0 ? sum / count
                               : std::numeric_limits<double>::quiet_NaN();
            };
            tpr_csv << scenario.describe() << ',' << format_double(epsilon)
                    << ',' << format_double(eps_dp) << ',' << l << ','
                    << to_string(kind) << ',' << cs.count << ','
                    << format_double(mean(cs.tpr_sum, cs.tpr_count)) << ','
                    << format_double(mean(cs.tnr_sum, cs.tnr_count)) << ','
                    << format_double(mean(cs.acc2_sum, cs.count)) << ','
                    << format_double(mean(cs.acc3_sum, cs.count)) << ','
                    << format_double(mean(cs.loss_sum, cs.count)) << '\n';
          }
        }
      }
    }
  }

  if (config.audit_enabled) {
    try {
      SynthesisConfig d_spec = config.d_spec;
      d_spec.seed = derive_seed(config.root_seed, "audit-d", d_spec.seed);
      CaseControlDataset d = synthesize_dataset(d_spec);
      AttackCohorts cohorts =
          AttackCohorts::draw(d, config.cohort_size, config.cohort_size,
                              derive_seed(config.root_seed, "cohorts"));
      std::vector<double> pop = control_allele_frequencies(d);
      BundleFactory factory = [&d](size_t k, double eps, uint64_t s) {
        return build_metadata(d, k, k, eps, s).bundle.partial;
      };
      std::vector<PowerResult> results = power_curve(
          d, factory, AttackKind::kLrt, config.audit_axis,
          config.audit_epsilons, cohorts, pop,
          derive_seed(config.root_seed, "audit-lrt"), config.audit_reps,
          config.audit_fpr);
      std::vector<PowerResult> ed = power_curve(
          d, factory, AttackKind::kEditDistance, config.audit_axis,
          config.audit_epsilons, cohorts, pop,
          derive_seed(config.root_seed, "audit-ed"), config.audit_reps,
          config.audit_fpr);
      results.insert(results.end(), ed.begin(), ed.end());
      write_text_file((fs::path(out_dir) / "power_curves.csv").string(),
                      power_results_to_csv(results));
      summary["status"]["audit"] = "ok";
    } catch (const Error& e) {
      summary["status"]["audit"] =
          std::string(to_string(e.code())) + ": " + e.what();
    }
  }

  write_text_file((fs::path(out_dir) / "tpr_tnr.csv").string(),
                  tpr_csv.str());
  write_text_file((fs::path(out_dir) / "utility_sweep.csv").string(),
                  utility_csv.str());
  write_text_file((fs::path(out_dir) / "summary.json").string(),
                  summary.dump(2) + "\n");
}

}  // namespace gwv
