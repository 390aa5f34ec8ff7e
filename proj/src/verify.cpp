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

#include "gwv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "gwv/error.hpp"
#include "gwv/io.hpp"
#include "gwv/rng.hpp"

namespace gwv {

namespace {

using nlohmann::json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Largest-remainder rounding of non-negative reals to integers with an
// exact total.
std::array<int64_t, 3> round_preserving_sum(const std::vector<double>& values,
                                            int64_t total) {
  std::array<int64_t, 3> out{0, 0, 0};
  std::array<double, 3> frac{0, 0, 0};
  int64_t floored = 0;
  for (size_t i = 0; i < 3; ++i) {
    double v = std::max(values[i], 0.0);
    out[i] = static_cast<int64_t>(std::floor(v));
    frac[i] = v - static_cast<double>(out[i]);
    floored += out[i];
  }
  int64_t remaining = total - floored;
  // Hand out one unit at a time by descending fractional part; wraps
  // around in the (floating-point-only) case of more units than cells.
  std::array<size_t, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&frac](size_t x, size_t y) {
    if (frac[x] != frac[y]) return frac[x] > frac[y];
    return x < y;
  });
  size_t cursor = 0;
  while (remaining > 0) {
    ++out[order[cursor % 3]];
    ++cursor;
    --remaining;
  }
  while (remaining < 0) {
    size_t i = order[cursor % 3];
    if (out[i] > 0) {
      --out[i];
      ++remaining;
    }
    ++cursor;
  }
  return out;
}

double strength(double value, StatKind kind) {
  return kind == StatKind::kPValue ? -std::log(value) : value;
}

}  // namespace

const char* to_string(StatKind kind) {
  switch (kind) {
    case StatKind::kOddsRatio:
      return "odds_ratio";
    case StatKind::kPValue:
      return "p_value";
    case StatKind::kMaf:
      return "maf";
  }
  return "unknown";
}

double statistic_value(const SnpStatistics& stats, StatKind kind) {
  switch (kind) {
    case StatKind::kOddsRatio:
      return stats.odds_ratio;
    case StatKind::kPValue:
      return stats.p_value;
    case StatKind::kMaf:
      return stats.case_maf;
  }
  return 0.0;
}

std::vector<SnpStatistics> reconstruct_statistics(
    const PartialNoisyDataset& partial, double epsilon_declared,
    bool continuity_correction) {
  const CaseControlDataset& data = partial.data;
  std::vector<SnpStatistics> out;
  out.reserve(data.m());

  if (partial.mechanism.kind == MechanismKind::kSampling) {
    for (size_t j = 0; j < data.m(); ++j) {
      std::vector<uint8_t> col = data.column(j);
      SnpStatistics stats = compute_statistics(
          contingency_table(col, data.labels), continuity_correction);
      stats.snp_id = data.snp_ids[j];
      out.push_back(std::move(stats));
    }
    return out;
  }

  RrParameters params = rr_probabilities(epsilon_declared, 3);
  int64_t case_total = static_cast<int64_t>(data.case_count());
  int64_t control_total = static_cast<int64_t>(data.n()) - case_total;
  for (size_t j = 0; j < data.m(); ++j) {
    std::array<int64_t, 3> obs_case{0, 0, 0};
    std::array<int64_t, 3> obs_control{0, 0, 0};
    for (size_t i = 0; i < data.n(); ++i) {
      if (data.labels[i] == Label::kCase) {
        ++obs_case[data.geno(i, j)];
      } else {
        ++obs_control[data.geno(i, j)];
      }
    }
    // Case and control groups are debiased separately; labels ship in
    // the clear within the bundle.
    CountEstimate est_case = estimate_counts(obs_case, params);
    CountEstimate est_control = estimate_counts(obs_control, params);
    ContingencyTable table;
    table.s = round_preserving_sum(est_case.adjusted, case_total);
    table.c = round_preserving_sum(est_control.adjusted, control_total);
    SnpStatistics stats = compute_statistics(table, continuity_correction);
    stats.snp_id = data.snp_ids[j];
    out.push_back(std::move(stats));
  }
  return out;
}

double deviation(StatKind kind, double reported, double reconstructed) {
  if (kind == StatKind::kPValue) {
    require(reported > 0.0 && reported < 1.0, ErrorCode::kUndefinedDeviation,
            "log-scale deviation undefined for reported p = " +
                format_double(reported));
    require(reconstructed > 0.0, ErrorCode::kUndefinedDeviation,
            "reconstructed p-value must be positive");
    double log_rep = -std::log(reported);
    double log_rec = -std::log(reconstructed);
    return std::fabs(log_rep - log_rec) / log_rep;
  }
  require(reported > 0.0, ErrorCode::kUndefinedDeviation,
          "deviation undefined for reported value 0");
  return std::fabs(reported - reconstructed) / reported;
}

ExpectedDeviation expected_deviation(const CaseControlDataset& public_e,
                                     size_t l,
                                     const MechanismDescriptor& mechanism,
                                     uint64_t seed, int trials) {
  require(trials >= 1, ErrorCode::kDomain, "trials must be >= 1");
  require(public_e.case_count() == public_e.control_count(),
          ErrorCode::kDomain,
          "public dataset must have equal case and control counts");

  std::vector<SnpStatistics> top = run_gwas(public_e, l);
  ExpectedDeviation out;
  out.snp_ids.reserve(l);
  double mean_p = 0.0;
  for (const SnpStatistics& s : top) {
    out.snp_ids.push_back(s.snp_id);
    mean_p += s.p_value;
  }
  mean_p /= static_cast<double>(l);
  if (mean_p >= 0.05) {
    out.weak_association_warning = true;
    out.warning = "public dataset associations are weak (mean top-l p = " +
                  format_double(mean_p) + ")";
  }

  for (auto& v : out.re) v.assign(l, 0.0);
  for (int t = 0; t < trials; ++t) {
    PartialNoisyDataset noisy = build_partial_dataset(
        public_e, out.snp_ids, mechanism, derive_seed(seed, "trial", t));
    std::vector<SnpStatistics> recon =
        reconstruct_statistics(noisy, mechanism.epsilon);
    for (size_t j = 0; j < l; ++j) {
      for (StatKind kind : kAllStatKinds) {
        double re;
        try {
          re = deviation(kind, statistic_value(top[j], kind),
                         statistic_value(recon[j], kind));
        } catch (const Error&) {
          re = kNan;
        }
        out.re[static_cast<int>(kind)][j] += re / trials;
      }
    }
  }
  return out;
}

double relative_change(double re_d, double re_e) {
  require(re_e > 0.0, ErrorCode::kUndefinedDeviation,
          "expected deviation must be positive");
  return std::fabs(re_d - re_e) / re_e;
}

double CutoffSet::tau(StatKind kind) const {
  switch (kind) {
    case StatKind::kOddsRatio:
      return tau_o;
    case StatKind::kPValue:
      return tau_p;
    case StatKind::kMaf:
      return tau_a;
  }
  return 0.0;
}

namespace {

// Computes the per-rank relative changes of a bundle against expected
// deviations. NaN marks undefined entries.
std::array<std::vector<double>, 3> bundle_phis(
    const MetadataBundle& bundle, const ExpectedDeviation& expected,
    std::vector<SnpStatistics>* reconstructed_out) {
  std::vector<SnpStatistics> recon =
      reconstruct_statistics(bundle.partial, bundle.epsilon_declared);
  std::unordered_map<std::string, size_t> recon_index;
  for (size_t i = 0; i < recon.size(); ++i) {
    recon_index.emplace(recon[i].snp_id, i);
  }

  size_t l = bundle.reported.size();
  std::array<std::vector<double>, 3> phis;
  for (auto& v : phis) v.assign(l, kNan);

  for (size_t j = 0; j < l; ++j) {
    const SnpStatistics& rep = bundle.reported[j];
    std::string lookup = rep.snp_id;
    auto link = bundle.linkage.find(lookup);
    if (link != bundle.linkage.end()) lookup = link->second;
    auto it = recon_index.find(lookup);
    require(it != recon_index.end(), ErrorCode::kDomain,
            "reported SNP not covered by the partial dataset: " + rep.snp_id);
    const SnpStatistics& rec = recon[it->second];
    for (StatKind kind : kAllStatKinds) {
      int ki = static_cast<int>(kind);
      double re_e = expected.re[ki][j];
      double re_d;
      try {
        re_d = deviation(kind, statistic_value(rep, kind),
                         statistic_value(rec, kind));
      } catch (const Error&) {
        continue;  // stays NaN
      }
      if (std::isnan(re_e)) continue;
      if (re_e == 0.0) {
        // A perfectly-reproduced expectation: only an exactly matching
        // observed deviation counts as in-band.
        phis[ki][j] = re_d == 0.0 ? 0.0 : kNan;
        continue;
      }
      phis[ki][j] = relative_change(re_d, re_e);
    }
  }
  if (reconstructed_out) *reconstructed_out = std::move(recon);
  return phis;
}

}  // namespace

CutoffSet calibrate_cutoffs(const std::vector<CaseControlDataset>& f_splits,
                            const CaseControlDataset& public_e, size_t l,
                            const MechanismDescriptor& mechanism,
                            const std::vector<ErrorScenario>& scenario_sweep,
                            uint64_t seed, int trials, double r2_threshold) {
  require(f_splits.size() >= 2, ErrorCode::kDomain,
          "calibration needs at least two splits");
  bool has_correct = false;
  bool has_incorrect = false;
  for (const ErrorScenario& scenario : scenario_sweep) {
    scenario.validate();
    switch (scenario.kind) {
      case ScenarioKind::kCorrect:
        has_correct = true;
        break;
      case ScenarioKind::kOversell:
      case ScenarioKind::kUndersell:
      case ScenarioKind::kMixed:
        has_incorrect = true;
        break;
      case ScenarioKind::kMetadataEpsilon:
        fail(ErrorCode::kDomain,
             "metadata-epsilon scenarios cannot calibrate cut-offs");
    }
  }
  require(has_correct && has_incorrect, ErrorCode::kDomain,
          "scenario sweep needs both correct and incorrect cases");

  ExpectedDeviation expected = expected_deviation(
      public_e, l, mechanism, derive_seed(seed, "calib-e"), trials);

  // Pooled relative changes labeled with the injected ground truth.
  std::array<std::vector<double>, 3> phi_correct;
  std::array<std::vector<double>, 3> phi_incorrect;
  size_t skipped = 0;

  for (size_t s = 0; s < f_splits.size(); ++s) {
    const CaseControlDataset& split = f_splits[s];
    GwasRanking ranking = run_gwas_full(split);
    MetadataResult base =
        build_metadata(split, l, l, mechanism,
                       derive_seed(seed, "calib-bundle", s), r2_threshold);
    for (size_t c = 0; c < scenario_sweep.size(); ++c) {
      InjectionResult injected = inject_errors(
          split, base.bundle, ranking, scenario_sweep[c],
          derive_seed(seed, "calib-inject", s, c), r2_threshold);
      auto phis = bundle_phis(injected.bundle, expected, nullptr);
      for (StatKind kind : kAllStatKinds) {
        int ki = static_cast<int>(kind);
        for (size_t j = 0; j < injected.bundle.reported.size(); ++j) {
          double phi = phis[ki][j];
          if (std::isnan(phi)) {
            ++skipped;
            continue;
          }
          bool truly_correct = injected.per_snp[j] == ScenarioKind::kCorrect;
          (truly_correct ? phi_correct : phi_incorrect)[ki].push_back(phi);
        }
      }
    }
  }

  constexpr size_t kGridSize = 512;
  CutoffSet cutoffs;
  cutoffs.record.mechanism = mechanism.tag();
  cutoffs.record.l = l;
  cutoffs.record.splits = f_splits.size();
  cutoffs.record.trials = trials;
  cutoffs.record.grid_size = kGridSize;
  cutoffs.record.skipped_undefined = skipped;
  {
    std::ostringstream sweep;
    for (size_t c = 0; c < scenario_sweep.size(); ++c) {
      if (c) sweep << ';';
      sweep << scenario_sweep[c].describe();
    }
    cutoffs.record.sweep = sweep.str();
  }

  for (StatKind kind : kAllStatKinds) {
    int ki = static_cast<int>(kind);
    std::vector<double> pooled = phi_correct[ki];
    pooled.insert(pooled.end(), phi_incorrect[ki].begin(),
                  phi_incorrect[ki].end());
    require(!pooled.empty(), ErrorCode::kCalibrationFailure,
            "no usable relative changes for " + std::string(to_string(kind)));
    auto [lo_it, hi_it] = std::minmax_element(pooled.begin(), pooled.end());
    double lo = *lo_it;
    double hi = *hi_it;
    require(hi > lo, ErrorCode::kCalibrationFailure,
            "degenerate relative-change distribution for " +
                std::string(to_string(kind)));

    double best_tau = lo;
    size_t best_cost = std::numeric_limits<size_t>::max();
    for (size_t g = 0; g < kGridSize; ++g) {
      double tau =
          lo + (hi - lo) * static_cast<double>(g) / (kGridSize - 1);
      size_t fp = 0;
      for (double phi : phi_incorrect[ki]) fp += phi <= tau;
      size_t fn = 0;
      for (double phi : phi_correct[ki]) fn += phi > tau;
      size_t cost = fp + fn;
      // Ties resolve to the larger threshold, favoring true positives.
      if (cost <= best_cost) {
        best_cost = cost;
        best_tau = tau;
      }
    }
    switch (kind) {
      case StatKind::kOddsRatio:
        cutoffs.tau_o = best_tau;
        break;
      case StatKind::kPValue:
        cutoffs.tau_p = best_tau;
        break;
      case StatKind::kMaf:
        cutoffs.tau_a = best_tau;
        break;
    }
  }
  return cutoffs;
}

CutoffSet calibrate_cutoffs(const std::vector<CaseControlDataset>& f_splits,
                            const CaseControlDataset& public_e, size_t l,
                            double epsilon,
                            const std::vector<ErrorScenario>& scenario_sweep,
                            uint64_t seed, int trials, double r2_threshold) {
  MechanismDescriptor mechanism;
  mechanism.kind = MechanismKind::kRandomizedResponse;
  mechanism.epsilon = epsilon;
  return calibrate_cutoffs(f_splits, public_e, l, mechanism, scenario_sweep,
                           seed, trials, r2_threshold);
}

void save_cutoffs(const CutoffSet& cutoffs, const std::string& path) {
  json doc;
  doc["tau_o"] = cutoffs.tau_o;
  doc["tau_p"] = cutoffs.tau_p;
  doc["tau_a"] = cutoffs.tau_a;
  doc["record"]["mechanism"] = cutoffs.record.mechanism;
  doc["record"]["l"] = cutoffs.record.l;
  doc["record"]["splits"] = cutoffs.record.splits;
  doc["record"]["trials"] = cutoffs.record.trials;
  doc["record"]["grid_size"] = cutoffs.record.grid_size;
  doc["record"]["sweep"] = cutoffs.record.sweep;
  doc["record"]["skipped_undefined"] = cutoffs.record.skipped_undefined;
  write_text_file(path, doc.dump(2) + "\n");
}

CutoffSet load_cutoffs(const std::string& path) {
  CutoffSet cutoffs;
  try {
    json doc = json::parse(read_text_file(path));
    cutoffs.tau_o = doc.at("tau_o").get<double>();
    cutoffs.tau_p = doc.at("tau_p").get<double>();
    cutoffs.tau_a = doc.at("tau_a").get<double>();
    const json& record = doc.at("record");
    cutoffs.record.mechanism = record.at("mechanism").get<std::string>();
    cutoffs.record.l = record.at("l").get<size_t>();
    cutoffs.record.splits = record.at("splits").get<size_t>();
    cutoffs.record.trials = record.at("trials").get<int>();
    cutoffs.record.grid_size = record.at("grid_size").get<size_t>();
    cutoffs.record.sweep = record.at("sweep").get<std::string>();
    cutoffs.record.skipped_undefined =
        record.at("skipped_undefined").get<size_t>();
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("bad cutoff JSON: ") + e.what());
  }
  return cutoffs;
}

const char* to_string(Verdict verdict) {
  return verdict == Verdict::kCorrect ? "correct" : "incorrect";
}

const char* to_string(Direction direction) {
  switch (direction) {
    case Direction::kOversell:
      return "oversell";
    case Direction::kUndersell:
      return "undersell";
    case Direction::kNotApplicable:
      return "n/a";
  }
  return "n/a";
}

Classification classify_statistic(double phi, double tau, double reported,
                                  double reconstructed, StatKind kind) {
  require(tau >= 0.0, ErrorCode::kDomain, "tau must be non-negative");
  Classification result{Verdict::kCorrect, Direction::kNotApplicable};
  if (!(phi <= tau)) {
    result.verdict = Verdict::kIncorrect;
    double gap = strength(reported, kind) - strength(reconstructed, kind);
    if (gap > 0.0) {
      result.direction = Direction::kOversell;
    } else if (gap < 0.0) {
      result.direction = Direction::kUndersell;
    }
  }
  return result;
}

bool VerificationReport::any_incorrect() const {
  return std::any_of(rows.begin(), rows.end(), [](const ReportRow& row) {
    return row.verdict == Verdict::kIncorrect;
  });
}

VerificationReport verify_bundle(const MetadataBundle& bundle,
                                 const CaseControlDataset& public_e,
                                 const CutoffSet& cutoffs, int trials,
                                 uint64_t seed) {
  require(cutoffs.record.l == bundle.reported.size(), ErrorCode::kMismatch,
          "cut-offs were calibrated for a different list length");
  require(cutoffs.record.mechanism == bundle.partial.mechanism.tag(),
          ErrorCode::kMismatch,
          "cut-offs were calibrated for a different mechanism");
  require(public_e.n() == bundle.n_samples, ErrorCode::kMismatch,
          "public dataset sample count does not match the bundle");

  ExpectedDeviation expected =
      expected_deviation(public_e, bundle.reported.size(),
                         bundle.partial.mechanism,
                         derive_seed(seed, "e-dev"), trials);

  std::vector<SnpStatistics> recon;
  auto phis = bundle_phis(bundle, expected, &recon);
  std::unordered_map<std::string, size_t> recon_index;
  for (size_t i = 0; i < recon.size(); ++i) {
    recon_index.emplace(recon[i].snp_id, i);
  }

  VerificationReport report;
  report.weak_association_warning = expected.weak_association_warning;
  for (size_t j = 0; j < bundle.reported.size(); ++j) {
    const SnpStatistics& rep = bundle.reported[j];
    std::string lookup = rep.snp_id;
    auto link = bundle.linkage.find(lookup);
    if (link != bundle.linkage.end()) lookup = link->second;
    const SnpStatistics& rec = recon[recon_index.at(lookup)];
    for (StatKind kind : kAllStatKinds) {
      int ki = static_cast<int>(kind);
      ReportRow row;
      row.snp_id = rep.snp_id;
      row.statistic = kind;
      row.tau = cutoffs.tau(kind);
      row.reported_value = statistic_value(rep, kind);
      row.reconstructed_value = statistic_value(rec, kind);
      row.re_e = expected.re[ki][j];
      double phi = phis[ki][j];
      try {
        row.re_d = deviation(kind, row.reported_value, row.reconstructed_value);
      } catch (const Error&) {
        row.re_d = kNan;
        row.reason = "undefined-re";
      }
      if (std::isnan(phi)) {
        // Undefined relative change cannot clear any cut-off.
        row.phi = kNan;
        if (row.reason.empty()) row.reason = "undefined-phi";
        row.verdict = Verdict::kIncorrect;
        double gap = strength(row.reported_value, kind) -
                     strength(row.reconstructed_value, kind);
        row.direction = gap > 0.0   ? Direction::kOversell
                        : gap < 0.0 ? Direction::kUndersell
                                    : Direction::kNotApplicable;
      } else {
        row.phi = phi;
        Classification cls = classify_statistic(
            phi, row.tau, row.reported_value, row.reconstructed_value, kind);
        row.verdict = cls.verdict;
        row.direction = cls.direction;
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string report_to_csv(const VerificationReport& report) {
  std::ostringstream out;
  out << "snp_id,statistic,phi,tau,verdict,direction\n";
  for (const ReportRow& row : report.rows) {
    out << row.snp_id << ',' << to_string(row.statistic) << ','
        << format_double(row.phi) << ',' << format_double(row.tau) << ','
        << to_string(row.verdict) << ',' << to_string(row.direction) << '\n';
  }
  return out.str();
}

void write_report_csv(const std::string& path,
                      const VerificationReport& report) {
  write_text_file(path, report_to_csv(report));
}

}  // namespace gwv
