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

#ifndef GWV_AUDIT_HPP_
#define GWV_AUDIT_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gwv/dataset.hpp"
#include "gwv/ldp.hpp"

namespace gwv {

// Membership-inference log-likelihood ratio against released case-group
// allele frequencies versus reference population frequencies. The
// printed form scores x and (1 - x) with genotypes in {0,1,2}; the
// per-allele variant scores x and (2 - x).
struct LrtScorer {
  enum class Encoding { kAsPrinted, kPerAllele };

  LrtScorer(std::span<const double> case_freqs,
            std::span<const double> pop_freqs,
            Encoding encoding = Encoding::kAsPrinted);

  double score(std::span<const uint8_t> genotypes) const;

  int clamped_frequencies() const { return clamped_; }

 private:
  std::vector<double> log_ratio_;       // ln(a/pop)
  std::vector<double> log_comp_ratio_;  // ln((1-a)/(1-pop))
  Encoding encoding_;
  int clamped_ = 0;
};

// Hamming distance between equal-length genotype vectors.
int64_t edit_distance(std::span<const uint8_t> g1, std::span<const uint8_t> g2);

// Minimum Hamming distance between the target (restricted to the partial
// dataset's SNPs, in the same order) and the case rows of the partial
// noisy dataset.
int64_t edit_distance_score(std::span<const uint8_t> target,
                            const PartialNoisyDataset& partial);

enum class ScoreDirection { kHigherSuspicious, kLowerSuspicious };

struct PowerResult {
  double gamma = 0.0;
  double power = 0.0;
  double fpr_target = 0.05;
  std::string score_kind;
  std::string axis;      // "l" or "k"
  double axis_value = 0.0;
  double epsilon = 0.0;  // 0 when not applicable
};

// Empirical power at a fixed false-positive rate: gamma is set so the
// required fraction of the non-member scores stays unflagged, and power
// is the fraction of member scores beyond gamma in the suspicious
// direction.
PowerResult attack_power(std::span<const double> scores_a,
                         std::span<const double> scores_b,
                         ScoreDirection direction, double fpr = 0.05);

// Attack cohorts: genotype rows over the full SNP panel of the source
// dataset. Set A holds non-members of the case group, set B holds case
// members.
struct AttackCohorts {
  std::vector<std::vector<uint8_t>> a_rows;
  std::vector<std::vector<uint8_t>> b_rows;

  // Draws |B| distinct case rows and |A| distinct control rows.
  static AttackCohorts draw(const CaseControlDataset& dataset, size_t n_a,
                            size_t n_b, uint64_t seed);
};

enum class AttackKind { kLrt, kEditDistance };

using BundleFactory = std::function<PartialNoisyDataset(
    size_t k, double epsilon, uint64_t seed)>;

// Power sweep for the two attacks. LRT scores released case MAFs of the
// top-l SNPs against `pop_freqs` (aligned with dataset columns); one
// curve point per axis value. Edit distance scores targets against the
// partial noisy dataset; one point per (axis value, epsilon). Powers are
// averaged over `reps` fresh noise draws.
std::vector<PowerResult> power_curve(
    const CaseControlDataset& dataset, const BundleFactory& factory,
    AttackKind attack, std::span<const size_t> axis_values,
    std::span<const double> epsilons, const AttackCohorts& cohorts,
    std::span<const double> pop_freqs, uint64_t seed, int reps = 1,
    double fpr = 0.05);

// Population allele frequency per SNP from a reference dataset's control
// group, (C1 + 2*C2) / (2*C).
std::vector<double> control_allele_frequencies(
    const CaseControlDataset& dataset);

std::string power_results_to_csv(std::span<const PowerResult> results);

}  // namespace gwv

#endif  // GWV_AUDIT_HPP_
