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

#include "gwv/audit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gwv/error.hpp"
#include "gwv/gwas.hpp"
#include "gwv/io.hpp"
#include "gwv/rng.hpp"

namespace gwv {

namespace {

constexpr double kFreqFloor = 1e-6;

}  // namespace

LrtScorer::LrtScorer(std::span<const double> case_freqs,
                     std::span<const double> pop_freqs, Encoding encoding)
    : encoding_(encoding) {
  require(case_freqs.size() == pop_freqs.size(), ErrorCode::kLengthMismatch,
          "case and population frequency vectors differ in length");
  require(!case_freqs.empty(), ErrorCode::kDomain, "empty frequency vectors");
  log_ratio_.reserve(case_freqs.size());
  log_comp_ratio_.reserve(case_freqs.size());
  for (size_t j = 0; j < case_freqs.size(); ++j) {
    double a = case_freqs[j];
    double pop = pop_freqs[j];
    if (a < kFreqFloor || a > 1.0 - kFreqFloor) {
      a = std::clamp(a, kFreqFloor, 1.0 - kFreqFloor);
      ++clamped_;
    }
    if (pop < kFreqFloor || pop > 1.0 - kFreqFloor) {
      pop = std::clamp(pop, kFreqFloor, 1.0 - kFreqFloor);
      ++clamped_;
    }
    log_ratio_.push_back(std::log(a / pop));
    log_comp_ratio_.push_back(std::log((1.0 - a) / (1.0 - pop)));
  }
}

double LrtScorer::score(std::span<const uint8_t> genotypes) const {
  require(genotypes.size() == log_ratio_.size(), ErrorCode::kLengthMismatch,
          "target vector does not match the frequency panel");
  double total = 0.0;
  for (size_t j = 0; j < genotypes.size(); ++j) {
    double x = genotypes[j];
    double carrier = encoding_ == Encoding::kAsPrinted ? 1.0 - x : 2.0 - x;
    total += x * log_ratio_[j] + carrier * log_comp_ratio_[j];
  }
  return total;
}

int64_t edit_distance(std::span<const uint8_t> g1,
                      std::span<const uint8_t> g2) {
  require(g1.size() == g2.size(), ErrorCode::kLengthMismatch,
          "genotype vectors differ in length");
  int64_t distance = 0;
  for (size_t i = 0; i < g1.size(); ++i) distance += g1[i] != g2[i];
  return distance;
}

int64_t edit_distance_score(std::span<const uint8_t> target,
                            const PartialNoisyDataset& partial) {
  const CaseControlDataset& data = partial.data;
  require(target.size() == data.m(), ErrorCode::kLengthMismatch,
          "target does not cover the partial dataset's SNPs");
  int64_t best = -1;
  for (size_t i = 0; i < data.n(); ++i) {
    if (data.labels[i] != Label::kCase) continue;
    int64_t d = 0;
    for (size_t j = 0; j < data.m(); ++j) d += target[j] != data.geno(i, j);
    if (best < 0 || d < best) best = d;
  }
  require(best >= 0, ErrorCode::kEmptyGroup,
          "partial dataset has no case rows");
  return best;
}

PowerResult attack_power(std::span<const double> scores_a,
                         std::span<const double> scores_b,
                         ScoreDirection direction, double fpr) {
  require(!scores_a.empty() && !scores_b.empty(), ErrorCode::kDomain,
          "both score sets must be non-empty");
  require(fpr > 0.0 && fpr < 1.0, ErrorCode::kDomain, "fpr must be in (0,1)");

  std::vector<double> sorted(scores_a.begin(), scores_a.end());
  std::sort(sorted.begin(), sorted.end());
  size_t keep = static_cast<size_t>(
      std::ceil((1.0 - fpr) * static_cast<double>(sorted.size())));
  keep = std::clamp<size_t>(keep, 1, sorted.size());

  PowerResult result;
  result.fpr_target = fpr;
  size_t flagged = 0;
  if (direction == ScoreDirection::kHigherSuspicious) {
    result.gamma = sorted[keep - 1];
    for (double b : scores_b) flagged += b > result.gamma;
  } else {
    result.gamma = sorted[sorted.size() - keep];
    for (double b : scores_b) flagged += b < result.gamma;
  }
  result.power =
      static_cast<double>(flagged) / static_cast<double>(scores_b.size());
  return result;
}

AttackCohorts AttackCohorts::draw(const CaseControlDataset& dataset,
                                  size_t n_a, size_t n_b, uint64_t seed) {
  std::vector<size_t> case_rows;
  std::vector<size_t> control_rows;
  for (size_t i = 0; i < dataset.n(); ++i) {
    (dataset.labels[i] == Label::kCase ? case_rows : control_rows)
        .push_back(i);
  }
  require(n_b <= case_rows.size(), ErrorCode::kDomain,
          "not enough case rows for set B");
  require(n_a <= control_rows.size(), ErrorCode::kDomain,
          "not enough control rows for set A");
  {
    Rng rng = Rng::stream(seed, "cohort-b");
    rng.shuffle(case_rows);
  }
  {
    Rng rng = Rng::stream(seed, "cohort-a");
    rng.shuffle(control_rows);
  }
  AttackCohorts cohorts;
  for (size_t i = 0; i < n_a; ++i) {
    std::vector<uint8_t> row(dataset.m());
    for (size_t j = 0; j < dataset.m(); ++j) {
      row[j] = dataset.geno(control_rows[i], j);
    }
    cohorts.a_rows.push_back(std::move(row));
  }
  for (size_t i = 0; i < n_b; ++i) {
    std::vector<uint8_t> row(dataset.m());
    for (size_t j = 0; j < dataset.m(); ++j) {
      row[j] = dataset.geno(case_rows[i], j);
    }
    cohorts.b_rows.push_back(std::move(row));
  }
  return cohorts;
}

std::vector<double> control_allele_frequencies(
    const CaseControlDataset& dataset) {
  std::vector<double> freqs(dataset.m(), 0.0);
  size_t controls = dataset.control_count();
  require(controls > 0, ErrorCode::kEmptyGroup, "no control samples");
  for (size_t j = 0; j < dataset.m(); ++j) {
    int64_t alleles = 0;
    for (size_t i = 0; i < dataset.n(); ++i) {
      if (dataset.labels[i] == Label::kControl) alleles += dataset.geno(i, j);
    }
    freqs[j] = static_cast<double>(alleles) / (2.0 * controls);
  }
  return freqs;
}

std::vector<PowerResult> power_curve(
    const CaseControlDataset& dataset, const BundleFactory& factory,
    AttackKind attack, std::span<const size_t> axis_values,
    std::span<const double> epsilons, const AttackCohorts& cohorts,
    std::span<const double> pop_freqs, uint64_t seed, int reps, double fpr) {
  require(!axis_values.empty(), ErrorCode::kDomain, "no axis values");
  require(std::is_sorted(axis_values.begin(), axis_values.end()),
          ErrorCode::kDomain, "axis values must be sorted ascending");
  require(reps >= 1, ErrorCode::kDomain, "reps must be >= 1");
  require(pop_freqs.size() == dataset.m(), ErrorCode::kLengthMismatch,
          "population frequencies must align with the dataset SNPs");

  GwasRanking ranking = run_gwas_full(dataset);
  std::vector<PowerResult> results;

  auto restrict_rows = [&](const std::vector<std::vector<uint8_t>>& rows,
                           std::span<const size_t> cols) {
    std::vector<std::vector<uint8_t>> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
      std::vector<uint8_t> r(cols.size());
      for (size_t j = 0; j < cols.size(); ++j) r[j] = row[cols[j]];
      out.push_back(std::move(r));
    }
    return out;
  };

  for (size_t axis : axis_values) {
    require(axis >= 1 && axis <= ranking.ranked.size(), ErrorCode::kDomain,
            "axis value out of range");
    std::vector<size_t> cols;
    std::vector<double> case_freqs;
    std::vector<double> pop;
    cols.reserve(axis);
    for (size_t r = 0; r < axis; ++r) {
      size_t col = dataset.snp_index(ranking.ranked[r].snp_id);
      cols.push_back(col);
      case_freqs.push_back(ranking.ranked[r].case_maf);
      pop.push_back(pop_freqs[col]);
    }
    auto a_rows = restrict_rows(cohorts.a_rows, cols);
    auto b_rows = restrict_rows(cohorts.b_rows, cols);

    if (attack == AttackKind::kLrt) {
      LrtScorer scorer(case_freqs, pop);
      std::vector<double> scores_a, scores_b;
      for (const auto& row : a_rows) scores_a.push_back(scorer.score(row));
      for (const auto& row : b_rows) scores_b.push_back(scorer.score(row));
      PowerResult r = attack_power(scores_a, scores_b,
                                   ScoreDirection::kHigherSuspicious, fpr);
      r.score_kind = "lrt";
      r.axis = "l";
      r.axis_value = static_cast<double>(axis);
      results.push_back(r);
      continue;
    }

    for (size_t e = 0; e < epsilons.size(); ++e) {
      double gamma_sum = 0.0;
      double power_sum = 0.0;
      for (int rep = 0; rep < reps; ++rep) {
        PartialNoisyDataset partial = factory(
            axis, epsilons[e],
            derive_seed(seed, "ed-rep", axis * 1000 + e, rep));
        // Column order of the partial may differ from the ranking order;
        // align targets with the partial's own SNP list.
        std::vector<size_t> pcols;
        pcols.reserve(partial.data.m());
        for (const std::string& id : partial.data.snp_ids) {
          pcols.push_back(dataset.snp_index(id));
        }
        auto a_full = restrict_rows(cohorts.a_rows, pcols);
        auto b_full = restrict_rows(cohorts.b_rows, pcols);
        std::vector<double> scores_a, scores_b;
        for (const auto& row : a_full) {
          scores_a.push_back(
              static_cast<double>(edit_distance_score(row, partial)));
        }
        for (const auto& row : b_full) {
          scores_b.push_back(
              static_cast<double>(edit_distance_score(row, partial)));
        }
        PowerResult r = attack_power(scores_a, scores_b,
                                     ScoreDirection::kLowerSuspicious, fpr);
        gamma_sum += r.gamma;
        power_sum += r.power;
      }
      PowerResult r;
      r.fpr_target = fpr;
      r.score_kind = "edit_distance";
      r.axis = "k";
      r.axis_value = static_cast<double>(axis);
      r.epsilon = epsilons[e];
      r.gamma = gamma_sum / reps;
      r.power = power_sum / reps;
      results.push_back(r);
    }
  }
  return results;
}

std::string power_results_to_csv(std::span<const PowerResult> results) {
  std::ostringstream out;
  out << "attack,axis,value,epsilon,gamma,power\n";
  for (const PowerResult& r : results) {
    out << r.score_kind << ',' << r.axis << ',' << format_double(r.axis_value)
        << ',' << format_double(r.epsilon) << ',' << format_double(r.gamma)
        << ',' << format_double(r.power) << '\n';
  }
  return out.str();
}

}  // namespace gwv
