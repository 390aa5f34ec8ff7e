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

#ifndef GWV_LDP_HPP_
#define GWV_LDP_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gwv/dataset.hpp"
#include "gwv/gwas.hpp"
#include "gwv/rng.hpp"

namespace gwv {

// Direct-encoding randomized response over a d-value domain: a report is
// truthful with probability p_keep = e^eps / (d - 1 + e^eps) and lands on
// each alternative with probability q_flip = 1 / (d - 1 + e^eps), so
// p_keep / q_flip = e^eps.
struct RrParameters {
  double epsilon = 0.0;
  int domain_size = 0;
  double p_keep = 0.0;
  double q_flip = 0.0;
};

RrParameters rr_probabilities(double epsilon, int domain_size = 3);

uint8_t perturb_value(uint8_t value, const RrParameters& params, Rng& rng);

enum class MechanismKind { kRandomizedResponse, kSampling };

struct MechanismDescriptor {
  MechanismKind kind = MechanismKind::kRandomizedResponse;
  double epsilon = 0.0;    // randomized response only
  size_t partitions = 0;   // sampling only
  std::string seed_commitment;

  // Short stable tag such as "rr(epsilon=3)" or "sampling(b=3)"; used to
  // match calibration records against bundles.
  std::string tag() const;
};

// k-SNP perturbed submatrix shipped as metadata. `data` reuses the
// genotype TSV layout; the descriptor travels in a key=value sidecar.
struct PartialNoisyDataset {
  CaseControlDataset data;
  MechanismDescriptor mechanism;
};

PartialNoisyDataset build_partial_noisy_dataset(
    const CaseControlDataset& dataset, std::span<const std::string> snp_ids,
    double epsilon, uint64_t seed);

// Debiased frequency estimate: raw_i = (c_i - n*q) / (p - q), then
// clamped at zero and rescaled so the post-processed counts sum to n.
struct CountEstimate {
  std::vector<double> raw;
  std::vector<double> adjusted;
};

CountEstimate estimate_counts(std::span<const int64_t> observed_counts,
                              const RrParameters& params);

// Sampling-based partial dataset: samples are split into `partitions`
// balanced parts and every SNP column is filled from one randomly chosen
// part, with no noise added.
PartialNoisyDataset sample_partial_dataset(const CaseControlDataset& dataset,
                                           std::span<const std::string> snp_ids,
                                           size_t partitions, uint64_t seed);

// Dispatches on the descriptor kind.
PartialNoisyDataset build_partial_dataset(const CaseControlDataset& dataset,
                                          std::span<const std::string> snp_ids,
                                          const MechanismDescriptor& mechanism,
                                          uint64_t seed);

// Per-statistic Laplace scales are sensitivity / epsilon_dp. The MAF
// sensitivity for one individual is 1/S; p-value and odds ratio have no
// finite global bound, so their sensitivities are caller-supplied.
struct LaplaceSensitivity {
  double p_value = 1.0;
  double odds_ratio = 1.0;
  double maf = 0.0;
};

LaplaceSensitivity default_sensitivity(size_t case_count);

// Adds independent zero-mean Laplace noise to the released triple
// (p-value, odds ratio, MAF) of every statistic, clamping back to the
// valid domain. Derived fields (se, ci, z) keep their pre-noise values.
std::vector<SnpStatistics> laplace_perturb_statistics(
    std::span<const SnpStatistics> stats, double epsilon_dp,
    const LaplaceSensitivity& sensitivity, uint64_t seed);

// Sidecar (de)serialization for the mechanism descriptor.
void save_mechanism(const MechanismDescriptor& descriptor,
                    const std::string& path);
MechanismDescriptor load_mechanism(const std::string& path);

}  // namespace gwv

#endif  // GWV_LDP_HPP_
