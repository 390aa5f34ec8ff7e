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

#include "gwv/gwas.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gwv/error.hpp"
#include "gwv/io.hpp"
#include "gwv/util.hpp"

namespace gwv {

bool ContingencyTable::has_zero_cell() const {
  return s[0] == 0 || s[1] + s[2] == 0 || c[0] == 0 || c[1] + c[2] == 0;
}

void ContingencyTable::validate() const {
  for (int v = 0; v < 3; ++v) {
    require(s[v] >= 0 && c[v] >= 0, ErrorCode::kDomain,
            "negative contingency count");
  }
  require(case_total() > 0, ErrorCode::kEmptyGroup, "empty case group");
  require(control_total() > 0, ErrorCode::kEmptyGroup, "empty control group");
}

ContingencyTable contingency_table(std::span<const uint8_t> genotype_column,
                                   std::span<const Label> labels) {
  require(genotype_column.size() == labels.size(), ErrorCode::kLengthMismatch,
          "genotype column and labels differ in length");
  require(!genotype_column.empty(), ErrorCode::kDomain,
          "empty genotype column");
  ContingencyTable table;
  for (size_t i = 0; i < genotype_column.size(); ++i) {
    uint8_t g = genotype_column[i];
    require(g <= 2, ErrorCode::kDomain, "genotype value outside {0,1,2}");
    if (labels[i] == Label::kCase) {
      ++table.s[g];
    } else {
      ++table.c[g];
    }
  }
  return table;
}

double normal_two_sided_p(double z) {
  double p = std::erfc(std::fabs(z) / std::sqrt(2.0));
  return std::max(p, 1e-300);
}

SnpStatistics compute_statistics(const ContingencyTable& table,
                                 bool continuity_correction) {
  table.validate();

  double a = static_cast<double>(table.s[0]);
  double b = static_cast<double>(table.s[1] + table.s[2]);
  double c = static_cast<double>(table.c[0]);
  double d = static_cast<double>(table.c[1] + table.c[2]);
  if (table.has_zero_cell()) {
    require(continuity_correction, ErrorCode::kDegenerateTable,
            "zero cell in the 2x2 table");
    a += 0.5;
    b += 0.5;
    c += 0.5;
    d += 0.5;
  }

  SnpStatistics stats;
  stats.odds_ratio = (c * b) / (a * d);
  stats.se_log_or = std::sqrt(1.0 / b + 1.0 / a + 1.0 / d + 1.0 / c);
  double log_or = std::log(stats.odds_ratio);
  stats.ci_low = std::exp(log_or - 1.96 * stats.se_log_or);
  stats.ci_high = std::exp(log_or + 1.96 * stats.se_log_or);
  stats.z = log_or / stats.se_log_or;
  stats.p_value = normal_two_sided_p(stats.z);
  stats.case_maf = static_cast<double>(table.s[1] + 2 * table.s[2]) /
                   (2.0 * static_cast<double>(table.case_total()));
  return stats;
}

GwasRanking run_gwas_full(const CaseControlDataset& dataset,
                          bool continuity_correction) {
  std::span<const Label> labels(dataset.labels);
  // Per-SNP slots keep the result independent of the worker count.
  std::vector<SnpStatistics> slots(dataset.m());
  std::vector<uint8_t> keep(dataset.m(), 0);
  parallel_for(dataset.m(), [&](size_t begin, size_t end) {
    std::vector<uint8_t> col;
    for (size_t j = begin; j < end; ++j) {
      col = dataset.column(j);
      ContingencyTable table = contingency_table(col, labels);
      if (!continuity_correction && table.has_zero_cell()) continue;
      slots[j] = compute_statistics(table, continuity_correction);
      slots[j].snp_id = dataset.snp_ids[j];
      keep[j] = 1;
    }
  });
  GwasRanking result;
  result.ranked.reserve(dataset.m());
  for (size_t j = 0; j < dataset.m(); ++j) {
    if (keep[j]) result.ranked.push_back(std::move(slots[j]));
  }
  std::sort(result.ranked.begin(), result.ranked.end(),
            [](const SnpStatistics& x, const SnpStatistics& y) {
              if (x.p_value != y.p_value) return x.p_value < y.p_value;
              return x.snp_id < y.snp_id;
            });
  return result;
}

std::vector<SnpStatistics> run_gwas(const CaseControlDataset& dataset,
                                    size_t l, bool continuity_correction) {
  GwasRanking full = run_gwas_full(dataset, continuity_correction);
  require(l >= 1 && l <= full.ranked.size(), ErrorCode::kDomain,
          "l out of range: " + std::to_string(l));
  full.ranked.resize(l);
  return std::move(full.ranked);
}

std::string statistics_to_csv(std::span<const SnpStatistics> stats) {
  std::ostringstream out;
  out << "snp_id,odds_ratio,p_value,maf,se,ci_low,ci_high,z\n";
  for (const SnpStatistics& s : stats) {
    out << s.snp_id << ',' << format_double(s.odds_ratio) << ','
        << format_double(s.p_value) << ',' << format_double(s.case_maf) << ','
        << format_double(s.se_log_or) << ',' << format_double(s.ci_low) << ','
        << format_double(s.ci_high) << ',' << format_double(s.z) << '\n';
  }
  return out.str();
}

std::vector<SnpStatistics> statistics_from_csv(const std::string& content) {
  std::istringstream in(content);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::kParse,
          "empty statistics CSV");
  std::vector<SnpStatistics> stats;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    require(fields.size() == 8, ErrorCode::kParse,
            "statistics row needs 8 fields: " + line);
    SnpStatistics s;
    s.snp_id = fields[0];
    try {
      s.odds_ratio = std::stod(fields[1]);
      s.p_value = std::stod(fields[2]);
      s.case_maf = std::stod(fields[3]);
      s.se_log_or = std::stod(fields[4]);
      s.ci_low = std::stod(fields[5]);
      s.ci_high = std::stod(fields[6]);
      s.z = std::stod(fields[7]);
    } catch (const std::exception&) {
      fail(ErrorCode::kParse, "bad numeric field in: " + line);
    }
    stats.push_back(std::move(s));
  }
  return stats;
}

void write_statistics_csv(const std::string& path,
                          std::span<const SnpStatistics> stats) {
  write_text_file(path, statistics_to_csv(stats));
}

std::vector<SnpStatistics> read_statistics_csv(const std::string& path) {
  return statistics_from_csv(read_text_file(path));
}

}  // namespace gwv
