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

#include "gwv/dataset.hpp"

#include <algorithm>

#include "gwv/error.hpp"

namespace gwv {

size_t CaseControlDataset::case_count() const {
  return static_cast<size_t>(
      std::count(labels.begin(), labels.end(), Label::kCase));
}

std::vector<uint8_t> CaseControlDataset::column(size_t snp) const {
  std::vector<uint8_t> out(n());
  for (size_t i = 0; i < n(); ++i) out[i] = geno(i, snp);
  return out;
}

size_t CaseControlDataset::snp_index(std::string_view snp_id) const {
  for (size_t j = 0; j < snp_ids.size(); ++j) {
    if (snp_ids[j] == snp_id) return j;
  }
  fail(ErrorCode::kDomain, "unknown SNP id: " + std::string(snp_id));
}

void CaseControlDataset::validate() const {
  require(labels.size() == sample_ids.size(), ErrorCode::kLengthMismatch,
          "labels and sample_ids differ in length");
  require(genotypes.size() == n() * m(), ErrorCode::kLengthMismatch,
          "genotype matrix does not match n x m");
  for (uint8_t g : genotypes) {
    require(g <= 2, ErrorCode::kDomain,
            "genotype value outside {0,1,2}: " + std::to_string(int(g)));
  }
  size_t cases = case_count();
  require(cases > 0, ErrorCode::kEmptyGroup, "dataset has no case samples");
  require(cases < n(), ErrorCode::kEmptyGroup,
          "dataset has no control samples");
}

}  // namespace gwv
