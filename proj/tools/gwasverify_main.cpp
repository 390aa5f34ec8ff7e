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

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gwv/audit.hpp"
#include "gwv/error.hpp"
#include "gwv/eval.hpp"
#include "gwv/gwas.hpp"
#include "gwv/io.hpp"
#include "gwv/ldp.hpp"
#include "gwv/metadata.hpp"
#include "gwv/rng.hpp"
#include "gwv/synth.hpp"
#include "gwv/util.hpp"
#include "gwv/verify.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Scenario strings may carry a target utility loss ("oversell:loss=0.3")
// that is resolved into a rank offset against the dataset's ranking.
gwv::ErrorScenario resolve_scenario(const std::string& text,
                                    const gwv::GwasRanking& ranking,
                                    size_t l) {
  size_t pos = text.find("loss=");
  if (pos == std::string::npos) return gwv::parse_scenario(text);
  double target = 0.0;
  try {
    target = std::stod(text.substr(pos + 5));
  } catch (const std::exception&) {
    gwv::fail(gwv::ErrorCode::kParse, "bad loss target in: " + text);
  }
  size_t offset = gwv::offset_for_target_loss(ranking, l, target);
  std::string resolved = text.substr(0, pos) + std::to_string(offset);
  return gwv::parse_scenario(resolved);
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, sep)) {
    if (!tok.empty()) parts.push_back(tok);
  }
  return parts;
}

int cmd_synth(const std::string& config_path, const std::string& out,
              uint64_t seed, bool seed_given) {
  gwv::SynthesisConfig config =
      gwv::parse_synthesis_config(gwv::read_key_values(config_path));
  if (seed_given) config.seed = seed;
  gwv::CaseControlDataset dataset = gwv::synthesize_dataset(config);
  gwv::save_dataset(dataset, out);
  return 0;
}

int cmd_gwas(const std::string& data_path, size_t l, bool no_continuity,
             const std::string& out, const std::string& full_out) {
  gwv::CaseControlDataset dataset = gwv::load_dataset(data_path);
  gwv::GwasRanking ranking = gwv::run_gwas_full(dataset, !no_continuity);
  gwv::require(l >= 1 && l <= ranking.ranked.size(),
               gwv::ErrorCode::kDomain, "l out of range");
  if (!full_out.empty()) gwv::write_statistics_csv(full_out, ranking.ranked);
  std::vector<gwv::SnpStatistics> top(ranking.ranked.begin(),
                                      ranking.ranked.begin() + l);
  gwv::write_statistics_csv(out, top);
  return 0;
}

int cmd_metadata(const std::string& data_path, size_t l, size_t k,
                 double epsilon, size_t sampling_b,
                 const std::string& scenario_text,
                 const std::string& truth_out, const std::string& losses_out,
                 uint64_t seed, const std::string& out_dir) {
  gwv::CaseControlDataset dataset = gwv::load_dataset(data_path);
  gwv::MechanismDescriptor mechanism;
  if (sampling_b > 0) {
    mechanism.kind = gwv::MechanismKind::kSampling;
    mechanism.partitions = sampling_b;
  } else {
    mechanism.kind = gwv::MechanismKind::kRandomizedResponse;
    mechanism.epsilon = epsilon;
  }
  gwv::MetadataResult base =
      gwv::build_metadata(dataset, l, k, mechanism, seed);
  gwv::GwasRanking ranking = gwv::run_gwas_full(dataset);
  gwv::ErrorScenario scenario = resolve_scenario(scenario_text, ranking, l);
  gwv::InjectionResult injected = gwv::inject_errors(
      dataset, base.bundle, ranking, scenario, gwv::derive_seed(seed, "inject"));
  gwv::save_bundle(injected.bundle, out_dir);
  if (!truth_out.empty()) {
    gwv::write_truth_csv(truth_out, injected.bundle.reported,
                         injected.per_snp);
  }
  if (!losses_out.empty()) {
    gwv::KeyValues kv;
    kv.emplace_back("scenario", scenario.describe());
    kv.emplace_back("loss_p", gwv::format_double(injected.loss_p));
    kv.emplace_back("loss_o", gwv::format_double(injected.loss_o));
    kv.emplace_back("loss_a", gwv::format_double(injected.loss_a));
    gwv::write_key_values(kv, losses_out);
  }
  return 0;
}

int cmd_calibrate(const std::string& f_path, const std::string& e_path,
                  size_t splits, size_t l, double epsilon, size_t sampling_b,
                  const std::string& sweep_text, int trials, uint64_t seed,
                  const std::string& out) {
  gwv::CaseControlDataset f_full = gwv::load_dataset(f_path);
  gwv::CaseControlDataset public_e = gwv::load_dataset(e_path);
  std::vector<gwv::CaseControlDataset> f_splits = gwv::partition_dataset(
      f_full, splits, gwv::PartitionAxis::kSnps,
      gwv::derive_seed(seed, "f-split"));
  std::vector<gwv::ErrorScenario> sweep;
  gwv::GwasRanking ranking = gwv::run_gwas_full(f_splits[0]);
  for (const std::string& s : split_list(sweep_text, ';')) {
    sweep.push_back(resolve_scenario(s, ranking, l));
  }
  gwv::MechanismDescriptor mechanism;
  if (sampling_b > 0) {
    mechanism.kind = gwv::MechanismKind::kSampling;
    mechanism.partitions = sampling_b;
  } else {
    mechanism.kind = gwv::MechanismKind::kRandomizedResponse;
    mechanism.epsilon = epsilon;
  }
  gwv::CutoffSet cutoffs = gwv::calibrate_cutoffs(
      f_splits, public_e, l, mechanism, sweep, seed, trials);
  gwv::save_cutoffs(cutoffs, out);
  return 0;
}

int cmd_verify(const std::string& bundle_path, const std::string& e_path,
               const std::string& cutoffs_path, int trials, uint64_t seed,
               const std::string& out_dir, const std::string& truth_path) {
  gwv::MetadataBundle bundle = gwv::load_bundle(bundle_path);
  gwv::CaseControlDataset public_e = gwv::load_dataset(e_path);
  gwv::CutoffSet cutoffs = gwv::load_cutoffs(cutoffs_path);
  gwv::VerificationReport report =
      gwv::verify_bundle(bundle, public_e, cutoffs, trials, seed);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  gwv::require(!ec, gwv::ErrorCode::kIo,
               "cannot create directory: " + out_dir);
  gwv::write_report_csv((fs::path(out_dir) / "report.csv").string(), report);

  json summary;
  summary["rows"] = report.rows.size();
  size_t incorrect = 0;
  for (const auto& row : report.rows) {
    incorrect += row.verdict == gwv::Verdict::kIncorrect;
  }
  summary["incorrect_rows"] = incorrect;
  summary["weak_association_warning"] = report.weak_association_warning;

  if (!truth_path.empty()) {
    std::vector<gwv::ScenarioKind> truth =
        gwv::read_truth_csv(truth_path, bundle.reported);
    for (gwv::StatKind kind : gwv::kAllStatKinds) {
      gwv::ConfusionMetrics cm = gwv::report_confusion(report, truth, kind);
      json entry;
      entry["tp"] = cm.tp;
      entry["fp"] = cm.fp;
      entry["tn"] = cm.tn;
      entry["fn"] = cm.fn;
      if (cm.tp + cm.fn > 0) entry["tpr"] = cm.tpr();
      if (cm.tn + cm.fp > 0) entry["tnr"] = cm.tnr();
      entry["accuracy"] = cm.accuracy();
      entry["accuracy_three_way"] =
          gwv::three_way_accuracy(report, truth, kind);
      summary["per_statistic"][gwv::to_string(kind)] = entry;
    }
  }
  gwv::write_text_file((fs::path(out_dir) / "summary.json").string(),
                       summary.dump(2) + "\n");
  return report.any_incorrect() ? 1 : 0;
}

int cmd_audit(const std::string& data_path, const std::string& attack,
              const std::string& axis_text, const std::string& eps_text,
              const std::string& pop_path, size_t n_a, size_t n_b, int reps,
              double fpr, uint64_t seed, const std::string& out) {
  gwv::CaseControlDataset dataset = gwv::load_dataset(data_path);
  std::vector<size_t> axis;
  for (const std::string& tok : split_list(axis_text, ',')) {
    axis.push_back(std::stoull(tok));
  }
  std::vector<double> epsilons;
  for (const std::string& tok : split_list(eps_text, ',')) {
    epsilons.push_back(std::stod(tok));
  }
  std::vector<double> pop;
  if (pop_path.empty()) {
    pop = gwv::control_allele_frequencies(dataset);
  } else {
    pop.assign(dataset.m(), 0.0);
    std::istringstream in(gwv::read_text_file(pop_path));
    std::string line;
    gwv::require(static_cast<bool>(std::getline(in, line)),
                 gwv::ErrorCode::kParse, "empty frequency CSV");
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      size_t comma = line.find(',');
      gwv::require(comma != std::string::npos, gwv::ErrorCode::kParse,
                   "frequency row needs snp_id,freq: " + line);
      pop[dataset.snp_index(line.substr(0, comma))] =
          std::stod(line.substr(comma + 1));
    }
  }
  gwv::AttackCohorts cohorts = gwv::AttackCohorts::draw(
      dataset, n_a, n_b, gwv::derive_seed(seed, "cohorts"));
  gwv::BundleFactory factory = [&dataset](size_t k, double eps, uint64_t s) {
    return gwv::build_metadata(dataset, k, k, eps, s).bundle.partial;
  };
  std::vector<gwv::PowerResult> results;
  if (attack == "lrt" || attack == "both") {
    auto lrt = gwv::power_curve(dataset, factory, gwv::AttackKind::kLrt,
                                axis, epsilons, cohorts, pop,
                                gwv::derive_seed(seed, "lrt"), reps, fpr);
    results.insert(results.end(), lrt.begin(), lrt.end());
  }
  if (attack == "ed" || attack == "both") {
    auto ed = gwv::power_curve(dataset, factory,
                               gwv::AttackKind::kEditDistance, axis, epsilons,
                               cohorts, pop, gwv::derive_seed(seed, "ed"),
                               reps, fpr);
    results.insert(results.end(), ed.begin(), ed.end());
  }
  gwv::require(!results.empty(), gwv::ErrorCode::kUsage,
               "attack must be lrt, ed, or both");
  gwv::write_text_file(out, gwv::power_results_to_csv(results));
  return 0;
}

int cmd_experiment(const std::string& config_path, uint64_t seed,
                   bool seed_given, const std::string& out_dir) {
  gwv::ExperimentConfig config = gwv::load_experiment_config(config_path);
  if (seed_given) config.root_seed = seed;
  gwv::run_experiment(config, out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving verification of case-control study outputs"};
  app.require_subcommand(1);

  uint64_t seed = 0;
  unsigned threads = 1;
  app.add_option("--seed", seed, "Root seed for all randomness");
  app.add_option("--threads", threads,
                 "Worker cap; never changes results");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  std::string synth_config, synth_out;
  synth->add_option("--config", synth_config, "key=value synthesis config")
      ->required();
  synth->add_option("--out", synth_out, "Output genotype TSV")->required();

  auto* gwas = app.add_subcommand("gwas", "Run the association scan");
  std::string gwas_data, gwas_out, gwas_full_out;
  size_t gwas_l = 100;
  bool gwas_no_continuity = false;
  gwas->add_option("--data", gwas_data, "Genotype TSV")->required();
  gwas->add_option("--l", gwas_l, "Number of top statistics to emit");
  gwas->add_flag("--no-continuity", gwas_no_continuity,
                 "Disable the zero-cell continuity correction");
  gwas->add_option("--out", gwas_out, "Top-l statistics CSV")->required();
  gwas->add_option("--full-out", gwas_full_out, "Full ranking CSV");

  auto* metadata = app.add_subcommand("metadata", "Build a metadata bundle");
  std::string md_data, md_scenario = "correct", md_truth, md_losses, md_out;
  size_t md_l = 100, md_k = 0, md_b = 0;
  double md_epsilon = 3.0;
  metadata->add_option("--data", md_data, "Genotype TSV")->required();
  metadata->add_option("--l", md_l, "Number of reported statistics");
  metadata->add_option("--k", md_k, "Partial dataset size (default l)");
  metadata->add_option("--epsilon", md_epsilon, "Randomized-response budget");
  metadata->add_option("--b", md_b,
                       "Sampling partitions (selects the sampling mechanism)");
  metadata->add_option("--scenario", md_scenario,
                       "correct | oversell:<offset|loss=X> | "
                       "undersell:<offset|loss=X> | mixed:<offset>:<fo,fu,fc> "
                       "| metadata-epsilon:<eps>");
  metadata->add_option("--truth-out", md_truth, "Per-SNP truth CSV");
  metadata->add_option("--losses-out", md_losses, "Utility-loss key=value");
  metadata->add_option("--out", md_out, "Bundle directory")->required();

  auto* calibrate = app.add_subcommand("calibrate", "Select cut-off points");
  std::string cal_f, cal_e, cal_sweep =
      "correct;oversell:loss=0.1;oversell:loss=0.2;oversell:loss=0.3;"
      "oversell:loss=0.4;undersell:loss=0.2";
  std::string cal_out;
  size_t cal_splits = 5, cal_l = 100, cal_b = 0;
  double cal_epsilon = 3.0;
  int cal_trials = 3;
  calibrate->add_option("--f", cal_f, "Labelled calibration TSV")->required();
  calibrate->add_option("--e", cal_e, "Public dataset TSV")->required();
  calibrate->add_option("--splits", cal_splits, "Number of SNP-axis splits");
  calibrate->add_option("--l", cal_l, "Reported list length");
  calibrate->add_option("--epsilon", cal_epsilon, "Randomized-response budget");
  calibrate->add_option("--b", cal_b,
                        "Sampling partitions (selects the sampling mechanism)");
  calibrate->add_option("--sweep", cal_sweep, "Semicolon-separated scenarios");
  calibrate->add_option("--trials", cal_trials, "Expected-deviation trials");
  calibrate->add_option("--out", cal_out, "Cut-off JSON")->required();

  auto* verify = app.add_subcommand("verify", "Verify a metadata bundle");
  std::string ver_bundle, ver_e, ver_cutoffs, ver_out, ver_truth;
  int ver_trials = 3;
  verify->add_option("--bundle", ver_bundle, "bundle.json path")->required();
  verify->add_option("--e", ver_e, "Public dataset TSV")->required();
  verify->add_option("--cutoffs", ver_cutoffs, "Cut-off JSON")->required();
  verify->add_option("--trials", ver_trials, "Expected-deviation trials");
  verify->add_option("--truth", ver_truth, "Optional per-SNP truth CSV");
  verify->add_option("--out", ver_out, "Report directory")->required();

  auto* audit = app.add_subcommand("audit", "Membership-inference power");
  std::string aud_data, aud_attack = "both", aud_axis = "10,50,100";
  std::string aud_eps = "1,3,5", aud_pop, aud_out;
  size_t aud_a = 25, aud_b = 25;
  int aud_reps = 20;
  double aud_fpr = 0.05;
  audit->add_option("--data", aud_data, "Genotype TSV")->required();
  audit->add_option("--attack", aud_attack, "lrt | ed | both");
  audit->add_option("--axis", aud_axis, "Comma-separated l (= k) values");
  audit->add_option("--epsilons", aud_eps, "Comma-separated epsilon values");
  audit->add_option("--pop-freqs", aud_pop,
                    "snp_id,freq CSV (default: control-group frequencies)");
  audit->add_option("--a", aud_a, "Non-member cohort size");
  audit->add_option("--b-size", aud_b, "Member cohort size");
  audit->add_option("--reps", aud_reps, "Noise redraws per point");
  audit->add_option("--fpr", aud_fpr, "False-positive rate for the threshold");
  audit->add_option("--out", aud_out, "Power CSV")->required();

  auto* experiment = app.add_subcommand("experiment", "Run a sweep grid");
  std::string exp_config, exp_out;
  experiment->add_option("--config", exp_config, "Experiment JSON")
      ->required();
  experiment->add_option("--out", exp_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[usage]: " << e.what() << "\n";
    return 2;
  }

  gwv::set_max_threads(threads);
  bool seed_given = app.count("--seed") > 0;

  try {
    if (synth->parsed()) {
      return cmd_synth(synth_config, synth_out, seed, seed_given);
    }
    if (gwas->parsed()) {
      return cmd_gwas(gwas_data, gwas_l, gwas_no_continuity, gwas_out,
                      gwas_full_out);
    }
    if (metadata->parsed()) {
      return cmd_metadata(md_data, md_l, md_k == 0 ? md_l : md_k, md_epsilon,
                          md_b, md_scenario, md_truth, md_losses, seed,
                          md_out);
    }
    if (calibrate->parsed()) {
      return cmd_calibrate(cal_f, cal_e, cal_splits, cal_l, cal_epsilon,
                           cal_b, cal_sweep, cal_trials, seed, cal_out);
    }
    if (verify->parsed()) {
      return cmd_verify(ver_bundle, ver_e, ver_cutoffs, ver_trials, seed,
                        ver_out, ver_truth);
    }
    if (audit->parsed()) {
      return cmd_audit(aud_data, aud_attack, aud_axis, aud_eps, aud_pop,
                       aud_a, aud_b, aud_reps, aud_fpr, seed, aud_out);
    }
    if (experiment->parsed()) {
      return cmd_experiment(exp_config, seed, seed_given, exp_out);
    }
  } catch (const gwv::Error& e) {
    std::cerr << "error[" << gwv::to_string(e.code()) << "]: " << e.what()
              << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
