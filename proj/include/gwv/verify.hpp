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

#ifndef GWV_VERIFY_HPP_
#define GWV_VERIFY_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gwv/dataset.hpp"
#include "gwv/gwas.hpp"
#include "gwv/ldp.hpp"
#include "gwv/metadata.hpp"

namespace gwv {

enum class StatKind { kOddsRatio = 0, kPValue = 1, kMaf = 2 };
inline constexpr std::array<StatKind, 3> kAllStatKinds = {
    StatKind::kOddsRatio, StatKind::kPValue, StatKind::kMaf};

const char* to_string(StatKind kind);
double statistic_value(const SnpStatistics& stats, StatKind kind);

// Recovers per-SNP statistics from a partial noisy dataset. For
// randomized response, genotype counts are debiased per group with the
// declared epsilon, rounded back to integer tables that preserve the
// group totals, and fed through the statistics engine. For sampling,
// statistics are computed directly on the sample.
std::vector<SnpStatistics> reconstruct_statistics(
    const PartialNoisyDataset& partial, double epsilon_declared,
    bool continuity_correction = true);

// Relative error between a reported and a reconstructed value. P-values
// compare on the -log scale; odds ratio and MAF compare directly.
double deviation(StatKind kind, double reported, double reconstructed);

// Expected per-rank deviations measured on a public dataset and its
// noisy counterpart, averaged over `trials` perturbation seeds. Entries
// are NaN when the deviation is undefined for a rank.
struct ExpectedDeviation {
  std::vector<std::string> snp_ids;           // public top-l, rank order
  std::array<std::vector<double>, 3> re;      // indexed by StatKind
  bool weak_association_warning = false;
  std::string warning;
};

ExpectedDeviation expected_deviation(const CaseControlDataset& public_e,
                                     size_t l,
                                     const MechanismDescriptor& mechanism,
                                     uint64_t seed, int trials);

// Relative change between observed and expected deviation.
double relative_change(double re_d, double re_e);

struct CalibrationRecord {
  std::string mechanism;  // descriptor tag, embeds epsilon or b
  size_t l = 0;
  size_t splits = 0;
  int trials = 0;
  size_t grid_size = 0;
  std::string sweep;
  size_t skipped_undefined = 0;
};

struct CutoffSet {
  double tau_o = 0.0;
  double tau_p = 0.0;
  double tau_a = 0.0;
  CalibrationRecord record;

  double tau(StatKind kind) const;
};

// Per-statistic cut-offs minimizing false positives plus false negatives
// over the pooled relative-change distributions simulated on the F
// splits; ties resolve toward the larger threshold.
CutoffSet calibrate_cutoffs(const std::vector<CaseControlDataset>& f_splits,
                            const CaseControlDataset& public_e, size_t l,
                            const MechanismDescriptor& mechanism,
                            const std::vector<ErrorScenario>& scenario_sweep,
                            uint64_t seed, int trials = 3,
                            double r2_threshold = kDefaultR2Threshold);

CutoffSet calibrate_cutoffs(const std::vector<CaseControlDataset>& f_splits,
                            const CaseControlDataset& public_e, size_t l,
                            double epsilon,
                            const std::vector<ErrorScenario>& scenario_sweep,
                            uint64_t seed, int trials = 3,
                            double r2_threshold = kDefaultR2Threshold);

void save_cutoffs(const CutoffSet& cutoffs, const std::string& path);
CutoffSet load_cutoffs(const std::string& path);

enum class Verdict { kCorrect, kIncorrect };
enum class Direction { kOversell, kUndersell, kNotApplicable };
const char* to_string(Verdict verdict);
const char* to_string(Direction direction);

struct Classification {
  Verdict verdict;
  Direction direction;
};

// Correct iff phi <= tau. Incorrect verdicts get a direction from the
// reported-vs-reconstructed strength gap (-log p for p-values, the raw
// value otherwise).
Classification classify_statistic(double phi, double tau, double reported,
                                  double reconstructed, StatKind kind);

struct ReportRow {
  std::string snp_id;
  StatKind statistic;
  double phi = 0.0;
  double tau = 0.0;
  Verdict verdict = Verdict::kCorrect;
  Direction direction = Direction::kNotApplicable;
  // Intermediates, kept for the summary and for audits.
  double re_d = 0.0;
  double re_e = 0.0;
  double reported_value = 0.0;
  double reconstructed_value = 0.0;
  std::string reason;  // "", "undefined-re", "undefined-phi"
};

struct VerificationReport {
  std::vector<ReportRow> rows;
  bool weak_association_warning = false;

  bool any_incorrect() const;
};

// Full pipeline: reconstruct from the partial dataset, compare against
// the expected deviations from the public dataset, classify each
// reported statistic against the calibrated cut-offs. The cut-offs must
// have been calibrated for the bundle's mechanism and list length.
VerificationReport verify_bundle(const MetadataBundle& bundle,
                                 const CaseControlDataset& public_e,
                                 const CutoffSet& cutoffs, int trials,
                                 uint64_t seed);

// Report CSV: snp_id,statistic,phi,tau,verdict,direction.
std::string report_to_csv(const VerificationReport& report);
void write_report_csv(const std::string& path,
                      const VerificationReport& report);

}  // namespace gwv

#endif  // GWV_VERIFY_HPP_
