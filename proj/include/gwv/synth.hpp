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

#ifndef GWV_SYNTH_HPP_
#define GWV_SYNTH_HPP_

#include <cstdint>
#include <string>

#include "gwv/dataset.hpp"
#include "gwv/io.hpp"

namespace gwv {

// Synthetic case-control generator. Each SNP draws a baseline minor-allele
// frequency; associated SNPs shift the case-group frequency by an effect
// drawn from effect range. Genotypes follow Hardy-Weinberg proportions.
struct SynthesisConfig {
  size_t n_case = 0;
  size_t n_control = 0;
  size_t m = 0;
  size_t n_associated = 0;
  double effect_lo = 0.0;
  double effect_hi = 0.0;
  double baseline_maf_lo = 0.0;
  double baseline_maf_hi = 0.0;
  // Block-LD mode: SNPs in a block copy the block leader, each cell
  // re-drawn with probability ld_flip_prob. Size 1 disables it.
  size_t ld_block_size = 1;
  double ld_flip_prob = 0.0;
  uint64_t seed = 0;
  std::string phenotype = "synthetic";
  std::string population = "synthetic";

  void validate() const;
};

SynthesisConfig parse_synthesis_config(const KeyValues& pairs);
KeyValues synthesis_config_to_key_values(const SynthesisConfig& config);

CaseControlDataset synthesize_dataset(const SynthesisConfig& config);

enum class PartitionAxis { kSnps, kSamples };

// SNP axis: disjoint SNP sets covering the input, sizes within 1.
// Sample axis: disjoint sample sets with case/control balance preserved
// within 1 per part.
std::vector<CaseControlDataset> partition_dataset(
    const CaseControlDataset& dataset, size_t parts, PartitionAxis axis,
    uint64_t seed);

// Replaces labels with a uniformly random balanced assignment; requires an
// even sample count.
CaseControlDataset random_label(const CaseControlDataset& dataset,
                                uint64_t seed);

}  // namespace gwv

#endif  // GWV_SYNTH_HPP_
