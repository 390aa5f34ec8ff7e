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

#ifndef GWV_METADATA_HPP_
#define GWV_METADATA_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gwv/dataset.hpp"
#include "gwv/gwas.hpp"
#include "gwv/ldp.hpp"

namespace gwv {

inline constexpr double kDefaultR2Threshold = 0.2;

// Greedy selection of pairwise-independent SNPs. Candidates are scanned
// in the given order; a candidate joins the representatives when its
// squared genotype correlation with every representative stays below the
// threshold, otherwise it maps to the most correlated representative.
struct LdPruneResult {
  std::vector<std::string> representatives;
  std::map<std::string, std::string> linkage;  // pruned id -> representative
};

LdPruneResult ld_prune(const CaseControlDataset& dataset,
                       std::span<const std::string> candidate_snps,
                       double r2_threshold);

// Researcher-side bundle: declared study facts, the partial noisy
// dataset over the top-k independent SNPs, and the reported top-l
// statistics. Ground truth never serializes with the bundle.
struct MetadataBundle {
  std::string phenotype;
  std::string population;
  size_t n_samples = 0;
  size_t m_snps = 0;
  double epsilon_declared = 0.0;
  PartialNoisyDataset partial;
  std::vector<SnpStatistics> reported;
  std::map<std::string, std::string> linkage;  // reported id -> partial rep
};

struct MetadataResult {
  MetadataBundle bundle;
  std::vector<SnpStatistics> ground_truth;  // correct stats per reported id
};

MetadataResult build_metadata(const CaseControlDataset& dataset, size_t l,
                              size_t k, double epsilon, uint64_t seed,
                              double r2_threshold = kDefaultR2Threshold);

// Mechanism-generic variant; covers the sampling-based partial dataset.
MetadataResult build_metadata(const CaseControlDataset& dataset, size_t l,
                              size_t k, const MechanismDescriptor& mechanism,
                              uint64_t seed,
                              double r2_threshold = kDefaultR2Threshold);

enum class ScenarioKind {
  kCorrect,
  kOversell,
  kUndersell,
  kMixed,
  kMetadataEpsilon,
};

const char* to_string(ScenarioKind kind);

// Reporting-error model. Oversell attaches to each claimed SNP the
// statistics of the SNP `offset` ranks stronger in the p-sorted list;
// undersell uses `offset` ranks weaker; mixed draws a per-SNP kind from
// mix_fractions; metadata-epsilon rebuilds the partial dataset with
// epsilon_actual while the declared value stays unchanged.
//
// window_start pins the rank of the first claimed SNP. 0 means the
// smallest feasible start (`offset` for scenarios that need stronger
// donors, the top of the list otherwise), so the claimed window stays
// fixed while `offset` sweeps the deviation magnitude.
struct ErrorScenario {
  ScenarioKind kind = ScenarioKind::kCorrect;
  size_t offset = 0;
  size_t window_start = 0;
  std::array<double, 3> mix_fractions{0.0, 0.0, 1.0};  // over, under, correct
  double epsilon_actual = 0.0;

  void validate() const;
  std::string describe() const;
};

// Parses "correct", "oversell:7", "oversell:7:120" (offset:window_start),
// "undersell:12", "mixed:7:0.3,0.3,0.4", "metadata-epsilon:1.5".
ErrorScenario parse_scenario(const std::string& text);

struct InjectionResult {
  MetadataBundle bundle;
  std::vector<SnpStatistics> ground_truth;  // correct stats per reported id
  std::vector<ScenarioKind> per_snp;        // injected kind per reported row
  double loss_p = 0.0;
  double loss_o = 0.0;
  double loss_a = 0.0;
};

// Applies the scenario on top of a bundle built from `dataset`. The full
// p-sorted ranking must come from the same dataset. Scenarios that report
// stronger-than-own statistics claim the window of ranks starting at
// `offset`, mirroring a researcher whose strongest finding actually sits
// that far down the list; the partial noisy dataset always covers the
// claimed SNPs.
InjectionResult inject_errors(const CaseControlDataset& dataset,
                              const MetadataBundle& bundle,
                              const GwasRanking& ranking,
                              const ErrorScenario& scenario, uint64_t seed,
                              double r2_threshold = kDefaultR2Threshold);

// Smallest rank offset whose oversell injection reaches at least the
// target mean absolute p-value deviation, or the closest achievable one.
// window_start fixes the claimed window (0 keeps it at the offset).
size_t offset_for_target_loss(const GwasRanking& ranking, size_t l,
                              double target_loss, size_t window_start = 0);

// On-disk layout: <dir>/bundle.json with fields phenotype, population,
// n, m, epsilon, partial_ref, reported_ref (+ linkage), next to the
// partial TSV, its mechanism sidecar, and the reported statistics CSV.
void save_bundle(const MetadataBundle& bundle, const std::string& dir);
MetadataBundle load_bundle(const std::string& bundle_json_path);

}  // namespace gwv

#endif  // GWV_METADATA_HPP_
