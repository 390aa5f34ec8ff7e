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

#ifndef GWV_GWAS_HPP_
#define GWV_GWAS_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gwv/dataset.hpp"

namespace gwv {

// Per-SNP genotype tallies split by group. The association statistics are
// computed from the collapsed 2x2 view (s0 | s1+s2) vs (c0 | c1+c2).
struct ContingencyTable {
  std::array<int64_t, 3> s{0, 0, 0};  // case counts per genotype value
  std::array<int64_t, 3> c{0, 0, 0};  // control counts per genotype value

  int64_t case_total() const { return s[0] + s[1] + s[2]; }
  int64_t control_total() const { return c[0] + c[1] + c[2]; }
  int64_t total() const { return case_total() + control_total(); }
  int64_t genotype_total(int value) const { return s[value] + c[value]; }

  // True when the collapsed 2x2 view contains a zero cell.
  bool has_zero_cell() const;

  void validate() const;
};

ContingencyTable contingency_table(std::span<const uint8_t> genotype_column,
                                   std::span<const Label> labels);

struct SnpStatistics {
  std::string snp_id;
  double odds_ratio = 0.0;
  double p_value = 1.0;
  double case_maf = 0.0;
  double se_log_or = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double z = 0.0;
};

// Two-sided tail mass of the standard normal outside +-z, floored at
// 1e-300 so downstream log-scale deviations stay finite.
double normal_two_sided_p(double z);

// Odds ratio, SE of the log odds ratio, 95% CI, z deviate, two-sided
// p-value, and case-group MAF from the table. With the continuity
// correction enabled, 0.5 is added to all four 2x2 cells whenever any of
// them is zero; otherwise zero cells raise a degenerate-table error.
SnpStatistics compute_statistics(const ContingencyTable& table,
                                 bool continuity_correction = true);

// All-SNP statistics sorted by increasing p-value, ties broken by snp_id.
// With the correction disabled, degenerate tables are excluded.
struct GwasRanking {
  std::vector<SnpStatistics> ranked;
};

GwasRanking run_gwas_full(const CaseControlDataset& dataset,
                          bool continuity_correction = true);

// Top-l slice of the full ranking; 1 <= l <= number of ranked SNPs.
std::vector<SnpStatistics> run_gwas(const CaseControlDataset& dataset,
                                    size_t l,
                                    bool continuity_correction = true);

// Statistics CSV: snp_id,odds_ratio,p_value,maf,se,ci_low,ci_high,z.
std::string statistics_to_csv(std::span<const SnpStatistics> stats);
std::vector<SnpStatistics> statistics_from_csv(const std::string& content);
void write_statistics_csv(const std::string& path,
                          std::span<const SnpStatistics> stats);
std::vector<SnpStatistics> read_statistics_csv(const std::string& path);

}  // namespace gwv

#endif  // GWV_GWAS_HPP_
