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

#ifndef GWV_DATASET_HPP_
#define GWV_DATASET_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gwv {

enum class Label : uint8_t { kControl = 0, kCase = 1 };

// Case-control genotype matrix. Rows are samples, columns are SNPs,
// values are minor-allele counts in {0, 1, 2}. Datasets are immutable
// after construction by convention; all pipeline operations take const
// references and return fresh objects.
struct CaseControlDataset {
  std::vector<std::string> sample_ids;
  std::vector<Label> labels;
  std::vector<std::string> snp_ids;
  std::vector<uint8_t> genotypes;  // row-major, n() x m()
  std::string phenotype;
  std::string population;

  size_t n() const { return sample_ids.size(); }
  size_t m() const { return snp_ids.size(); }

  uint8_t geno(size_t sample, size_t snp) const {
    return genotypes[sample * m() + snp];
  }
  uint8_t& geno(size_t sample, size_t snp) {
    return genotypes[sample * m() + snp];
  }

  size_t case_count() const;
  size_t control_count() const { return n() - case_count(); }

  std::vector<uint8_t> column(size_t snp) const;

  // Index of a SNP id; throws a domain error for unknown ids.
  size_t snp_index(std::string_view snp_id) const;

  // Checks every structural invariant: matrix shape, genotype domain,
  // and that both groups are non-empty. Throws on violation.
  void validate() const;
};

}  // namespace gwv

#endif  // GWV_DATASET_HPP_
