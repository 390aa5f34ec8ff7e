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

#include "gwv/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "gwv/error.hpp"
#include "gwv/rng.hpp"

namespace gwv {

namespace {

std::string padded_id(const char* prefix, size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%06zu", prefix, index);
  return buf;
}

uint8_t draw_hwe_genotype(double maf, Rng& rng) {
  double u = rng.uniform();
  double p0 = (1.0 - maf) * (1.0 - maf);
  double p1 = 2.0 * maf * (1.0 - maf);
  if (u < p0) return 0;
  if (u < p0 + p1) return 1;
  return 2;
}

// Chunk sizes for splitting `total` into `parts` groups differing by at
// most one, larger chunks first.
std::vector<size_t> chunk_sizes(size_t total, size_t parts) {
  std::vector<size_t> sizes(parts, total / parts);
  for (size_t i = 0; i < total % parts; ++i) ++sizes[i];
  return sizes;
}

}  // namespace

void SynthesisConfig::validate() const {
  require(n_case > 0 && n_control > 0, ErrorCode::kInfeasibleConfig,
          "both case and control counts must be positive");
  require(m > 0, ErrorCode::kInfeasibleConfig, "m must be positive");
  require(n_associated <= m, ErrorCode::kInfeasibleConfig,
          "n_associated exceeds m");
  require(baseline_maf_lo > 0.0 && baseline_maf_hi <= 0.5 &&
              baseline_maf_lo <= baseline_maf_hi,
          ErrorCode::kInfeasibleConfig,
          "baseline MAF range must lie in (0, 0.5]");
  require(effect_lo <= effect_hi, ErrorCode::kInfeasibleConfig,
          "effect range is inverted");
  double lowest = baseline_maf_lo + std::min(effect_lo, 0.0);
  double highest = baseline_maf_hi + std::max(effect_hi, 0.0);
  require(lowest > 0.0 && highest <= 0.5, ErrorCode::kInfeasibleConfig,
          "effect range pushes case MAF outside (0, 0.5]");
  require(ld_block_size >= 1, ErrorCode::kInfeasibleConfig,
          "ld_block_size must be >= 1");
  require(ld_flip_prob >= 0.0 && ld_flip_prob <= 1.0,
          ErrorCode::kInfeasibleConfig, "ld_flip_prob must be in [0, 1]");
  if (ld_block_size > 1) {
    size_t leaders = (m + ld_block_size - 1) / ld_block_size;
    require(n_associated <= leaders, ErrorCode::kInfeasibleConfig,
            "n_associated exceeds the number of LD blocks");
  }
}

SynthesisConfig parse_synthesis_config(const KeyValues& pairs) {
  SynthesisConfig config;
  for (const auto& [key, value] : pairs) {
    try {
      if (key == "n_case") {
        config.n_case = std::stoull(value);
      } else if (key == "n_control") {
        config.n_control = std::stoull(value);
      } else if (key == "m") {
        config.m = std::stoull(value);
      } else if (key == "n_associated") {
        config.n_associated = std::stoull(value);
      } else if (key == "effect_lo") {
        config.effect_lo = std::stod(value);
      } else if (key == "effect_hi") {
        config.effect_hi = std::stod(value);
      } else if (key == "baseline_maf_lo") {
        config.baseline_maf_lo = std::stod(value);
      } else if (key == "baseline_maf_hi") {
        config.baseline_maf_hi = std::stod(value);
      } else if (key == "ld_block_size") {
        config.ld_block_size = std::stoull(value);
      } else if (key == "ld_flip_prob") {
        config.ld_flip_prob = std::stod(value);
      } else if (key == "seed") {
        config.seed = std::stoull(value);
      } else if (key == "phenotype") {
        config.phenotype = value;
      } else if (key == "population") {
        config.population = value;
      } else {
        fail(ErrorCode::kParse, "unknown synthesis config key: " + key);
      }
    } catch (const std::invalid_argument&) {
      fail(ErrorCode::kParse, "bad value for " + key + ": " + value);
    } catch (const std::out_of_range&) {
      fail(ErrorCode::kParse, "value out of range for " + key + ": " + value);
    }
  }
  config.validate();
  return config;
}

KeyValues synthesis_config_to_key_values(const SynthesisConfig& config) {
  KeyValues kv;
  kv.emplace_back("n_case", std::to_string(config.n_case));
  kv.emplace_back("n_control", std::to_string(config.n_control));
  kv.emplace_back("m", std::to_string(config.m));
  kv.emplace_back("n_associated", std::to_string(config.n_associated));
  kv.emplace_back("effect_lo", format_double(config.effect_lo));
  kv.emplace_back("effect_hi", format_double(config.effect_hi));
  kv.emplace_back("baseline_maf_lo", format_double(config.baseline_maf_lo));
  kv.emplace_back("baseline_maf_hi", format_double(config.baseline_maf_hi));
  kv.emplace_back("ld_block_size", std::to_string(config.ld_block_size));
  kv.emplace_back("ld_flip_prob", format_double(config.ld_flip_prob));
  kv.emplace_back("seed", std::to_string(config.seed));
  kv.emplace_back("phenotype", config.phenotype);
  kv.emplace_back("population", config.population);
  return kv;
}

CaseControlDataset synthesize_dataset(const SynthesisConfig& config) {
  config.validate();
  const size_t n = config.n_case + config.n_control;
  const size_t m = config.m;
  const size_t block = config.ld_block_size;

  CaseControlDataset ds;
  ds.phenotype = config.phenotype;
  ds.population = config.population;
  ds.sample_ids.reserve(n);
  ds.labels.reserve(n);
  for (size_t i = 0; i < config.n_case; ++i) {
    ds.sample_ids.push_back(padded_id("case", i + 1));
    ds.labels.push_back(Label::kCase);
  }
  for (size_t i = 0; i < config.n_control; ++i) {
    ds.sample_ids.push_back(padded_id("ctrl", i + 1));
    ds.labels.push_back(Label::kControl);
  }
  ds.snp_ids.reserve(m);
  for (size_t j = 0; j < m; ++j) ds.snp_ids.push_back(padded_id("snp", j + 1));
  ds.genotypes.assign(n * m, 0);

  // Association status is assigned to block leaders (every SNP when
  // ld_block_size is 1) by a seeded shuffle.
  std::vector<size_t> leaders;
  for (size_t j = 0; j < m; j += block) leaders.push_back(j);
  std::vector<size_t> order = leaders;
  {
    Rng rng = Rng::stream(config.seed, "placement");
    rng.shuffle(order);
  }
  std::vector<bool> leader_associated(m, false);
  for (size_t i = 0; i < config.n_associated && i < order.size(); ++i) {
    leader_associated[order[i]] = true;
  }

  for (size_t lead : leaders) {
    Rng model = Rng::stream(config.seed, "snp-model", lead);
    double baseline = config.baseline_maf_lo +
                      model.uniform() * (config.baseline_maf_hi -
                                         config.baseline_maf_lo);
    double effect = 0.0;
    if (leader_associated[lead]) {
      effect = config.effect_lo +
               model.uniform() * (config.effect_hi - config.effect_lo);
    }
    double case_maf = baseline + effect;

    size_t block_end = std::min(lead + block, m);
    for (size_t j = lead; j < block_end; ++j) {
      Rng rng = Rng::stream(config.seed, "geno", j);
      for (size_t i = 0; i < n; ++i) {
        double maf = ds.labels[i] == Label::kCase ? case_maf : baseline;
        if (j == lead) {
          ds.geno(i, j) = draw_hwe_genotype(maf, rng);
        } else {
          // Follower: copy the leader's cell, re-draw with flip prob.
          double u = rng.uniform();
          uint8_t value = ds.geno(i, lead);
          if (u < config.ld_flip_prob) value = draw_hwe_genotype(maf, rng);
          ds.geno(i, j) = value;
        }
      }
    }
  }

  ds.validate();
  return ds;
}

std::vector<CaseControlDataset> partition_dataset(
    const CaseControlDataset& dataset, size_t parts, PartitionAxis axis,
    uint64_t seed) {
  require(parts >= 2, ErrorCode::kDomain, "parts must be at least 2");

  std::vector<CaseControlDataset> out;
  if (axis == PartitionAxis::kSnps) {
    require(parts <= dataset.m(), ErrorCode::kDomain,
            "parts exceeds the number of SNPs");
    std::vector<size_t> order(dataset.m());
    std::iota(order.begin(), order.end(), 0);
    Rng rng = Rng::stream(seed, "partition-snp");
    rng.shuffle(order);
    std::vector<size_t> sizes = chunk_sizes(dataset.m(), parts);
    size_t cursor = 0;
    for (size_t p = 0; p < parts; ++p) {
      std::vector<size_t> cols(order.begin() + cursor,
                               order.begin() + cursor + sizes[p]);
      cursor += sizes[p];
      std::sort(cols.begin(), cols.end());
      CaseControlDataset part;
      part.sample_ids = dataset.sample_ids;
      part.labels = dataset.labels;
      part.phenotype = dataset.phenotype;
      part.population = dataset.population;
      part.snp_ids.reserve(cols.size());
      for (size_t c : cols) part.snp_ids.push_back(dataset.snp_ids[c]);
      part.genotypes.reserve(dataset.n() * cols.size());
      for (size_t i = 0; i < dataset.n(); ++i) {
        for (size_t c : cols) part.genotypes.push_back(dataset.geno(i, c));
      }
      part.validate();
      out.push_back(std::move(part));
    }
    return out;
  }

  // Sample axis: deal shuffled case and control indices separately so every
  // part keeps the group balance within one sample.
  require(parts <= dataset.n(), ErrorCode::kDomain,
          "parts exceeds the number of samples");
  std::vector<size_t> case_rows;
  std::vector<size_t> control_rows;
  for (size_t i = 0; i < dataset.n(); ++i) {
    (dataset.labels[i] == Label::kCase ? case_rows : control_rows)
        .push_back(i);
  }
  require(case_rows.size() >= parts && control_rows.size() >= parts,
          ErrorCode::kDomain, "each part needs at least one case and control");
  {
    Rng rng = Rng::stream(seed, "partition-case");
    rng.shuffle(case_rows);
  }
  {
    Rng rng = Rng::stream(seed, "partition-ctrl");
    rng.shuffle(control_rows);
  }
  std::vector<size_t> case_sizes = chunk_sizes(case_rows.size(), parts);
  std::vector<size_t> control_sizes = chunk_sizes(control_rows.size(), parts);
  size_t case_cursor = 0;
  size_t control_cursor = 0;
  for (size_t p = 0; p < parts; ++p) {
    std::vector<size_t> rows(case_rows.begin() + case_cursor,
                             case_rows.begin() + case_cursor + case_sizes[p]);
    case_cursor += case_sizes[p];
    rows.insert(rows.end(), control_rows.begin() + control_cursor,
                control_rows.begin() + control_cursor + control_sizes[p]);
    control_cursor += control_sizes[p];
    std::sort(rows.begin(), rows.end());
    CaseControlDataset part;
    part.snp_ids = dataset.snp_ids;
    part.phenotype = dataset.phenotype;
    part.population = dataset.population;
    for (size_t r : rows) {
      part.sample_ids.push_back(dataset.sample_ids[r]);
      part.labels.push_back(dataset.labels[r]);
      for (size_t j = 0; j < dataset.m(); ++j) {
        part.genotypes.push_back(dataset.geno(r, j));
      }
    }
    part.validate();
    out.push_back(std::move(part));
  }
  return out;
}

CaseControlDataset random_label(const CaseControlDataset& dataset,
                                uint64_t seed) {
  require(dataset.n() % 2 == 0, ErrorCode::kDomain,
          "random labelling needs an even sample count");
  CaseControlDataset out = dataset;
  out.labels.assign(dataset.n() / 2, Label::kCase);
  out.labels.resize(dataset.n(), Label::kControl);
  Rng rng = Rng::stream(seed, "relabel");
  rng.shuffle(out.labels);
  return out;
}

}  // namespace gwv
