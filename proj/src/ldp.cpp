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

#include "gwv/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gwv/error.hpp"
#include "gwv/io.hpp"

namespace gwv {

RrParameters rr_probabilities(double epsilon, int domain_size) {
  require(epsilon > 0.0, ErrorCode::kDomain, "epsilon must be positive");
  require(domain_size >= 2, ErrorCode::kDomain, "domain size must be >= 2");
  RrParameters params;
  params.epsilon = epsilon;
  params.domain_size = domain_size;
  double e = std::exp(epsilon);
  params.p_keep = e / (domain_size - 1 + e);
  params.q_flip = 1.0 / (domain_size - 1 + e);
  return params;
}

uint8_t perturb_value(uint8_t value, const RrParameters& params, Rng& rng) {
  require(value < params.domain_size, ErrorCode::kDomain,
          "value outside the mechanism domain");
  double u = rng.uniform();
  if (u < params.p_keep) return value;
  // Map the remaining mass onto the alternatives in ascending order.
  int alt = static_cast<int>((u - params.p_keep) / params.q_flip);
  alt = std::min(alt, params.domain_size - 2);
  int out = alt < value ? alt : alt + 1;
  return static_cast<uint8_t>(out);
}

std::string MechanismDescriptor::tag() const {
  if (kind == MechanismKind::kRandomizedResponse) {
    return "rr(epsilon=" + format_double(epsilon) + ")";
  }
  return "sampling(b=" + std::to_string(partitions) + ")";
}

PartialNoisyDataset build_partial_noisy_dataset(
    const CaseControlDataset& dataset, std::span<const std::string> snp_ids,
    double epsilon, uint64_t seed) {
  require(!snp_ids.empty(), ErrorCode::kDomain, "no SNPs selected");
  RrParameters params = rr_probabilities(epsilon, 3);

  PartialNoisyDataset out;
  out.data.sample_ids = dataset.sample_ids;
  out.data.labels = dataset.labels;
  out.data.phenotype = dataset.phenotype;
  out.data.population = dataset.population;
  out.data.snp_ids.assign(snp_ids.begin(), snp_ids.end());
  out.data.genotypes.assign(dataset.n() * snp_ids.size(), 0);

  for (size_t jj = 0; jj < snp_ids.size(); ++jj) {
    size_t col = dataset.snp_index(snp_ids[jj]);
    // Streams are keyed by the column's index in the source dataset, so
    // the noise for a SNP does not depend on which other SNPs ship.
    Rng rng = Rng::stream(seed, "rr", col);
    for (size_t i = 0; i < dataset.n(); ++i) {
      out.data.geno(i, jj) = perturb_value(dataset.geno(i, col), params, rng);
    }
  }
  out.mechanism.kind = MechanismKind::kRandomizedResponse;
  out.mechanism.epsilon = epsilon;
  out.mechanism.seed_commitment = "rr-" + std::to_string(seed);
  out.data.validate();
  return out;
}

CountEstimate estimate_counts(std::span<const int64_t> observed_counts,
                              const RrParameters& params) {
  require(static_cast<int>(observed_counts.size()) == params.domain_size,
          ErrorCode::kLengthMismatch,
          "observed counts do not match the mechanism domain");
  double denom = params.p_keep - params.q_flip;
  require(std::fabs(denom) > 1e-15, ErrorCode::kUnidentifiable,
          "p_keep equals q_flip; counts are unidentifiable");
  int64_t n = std::accumulate(observed_counts.begin(), observed_counts.end(),
                              int64_t{0});
  CountEstimate est;
  est.raw.reserve(observed_counts.size());
  for (int64_t c : observed_counts) {
    est.raw.push_back((static_cast<double>(c) -
                       static_cast<double>(n) * params.q_flip) /
                      denom);
  }
  est.adjusted = est.raw;
  for (double& v : est.adjusted) v = std::max(v, 0.0);
  double sum = std::accumulate(est.adjusted.begin(), est.adjusted.end(), 0.0);
  if (sum <= 0.0) {
    std::fill(est.adjusted.begin(), est.adjusted.end(),
              static_cast<double>(n) / est.adjusted.size());
  } else {
    double scale = static_cast<double>(n) / sum;
    for (double& v : est.adjusted) v *= scale;
  }
  // Pin the total exactly; floating rescale can be off by an ulp.
  double total = std::accumulate(est.adjusted.begin(), est.adjusted.end(), 0.0);
  size_t argmax = std::distance(
      est.adjusted.begin(),
      std::max_element(est.adjusted.begin(), est.adjusted.end()));
  est.adjusted[argmax] += static_cast<double>(n) - total;
  return est;
}

PartialNoisyDataset sample_partial_dataset(const CaseControlDataset& dataset,
                                           std::span<const std::string> snp_ids,
                                           size_t partitions, uint64_t seed) {
  require(!snp_ids.empty(), ErrorCode::kDomain, "no SNPs selected");
  require(partitions >= 2, ErrorCode::kDomain, "partitions must be >= 2");
  require(partitions <= dataset.n() / 2, ErrorCode::kDomain,
          "partitions exceed n/2");

  std::vector<size_t> case_rows;
  std::vector<size_t> control_rows;
  for (size_t i = 0; i < dataset.n(); ++i) {
    (dataset.labels[i] == Label::kCase ? case_rows : control_rows)
        .push_back(i);
  }
  require(case_rows.size() >= partitions && control_rows.size() >= partitions,
          ErrorCode::kDomain,
          "each partition needs at least one case and one control");
  {
    Rng rng = Rng::stream(seed, "sampling-case");
    rng.shuffle(case_rows);
  }
  {
    Rng rng = Rng::stream(seed, "sampling-ctrl");
    rng.shuffle(control_rows);
  }
  // Equal per-partition output shape: every column contributes the same
  // number of case and control values regardless of its chosen partition.
  size_t cases_per_part = case_rows.size() / partitions;
  size_t controls_per_part = control_rows.size() / partitions;
  size_t n_out = cases_per_part + controls_per_part;

  PartialNoisyDataset out;
  out.data.phenotype = dataset.phenotype;
  out.data.population = dataset.population;
  out.data.snp_ids.assign(snp_ids.begin(), snp_ids.end());
  for (size_t i = 0; i < cases_per_part; ++i) {
    out.data.sample_ids.push_back("sampled_case" + std::to_string(i + 1));
    out.data.labels.push_back(Label::kCase);
  }
  for (size_t i = 0; i < controls_per_part; ++i) {
    out.data.sample_ids.push_back("sampled_ctrl" + std::to_string(i + 1));
    out.data.labels.push_back(Label::kControl);
  }
  out.data.genotypes.assign(n_out * snp_ids.size(), 0);

  for (size_t jj = 0; jj < snp_ids.size(); ++jj) {
    size_t col = dataset.snp_index(snp_ids[jj]);
    Rng rng = Rng::stream(seed, "sampling", col);
    size_t part = static_cast<size_t>(rng.below(partitions));
    for (size_t i = 0; i < cases_per_part; ++i) {
      out.data.geno(i, jj) =
          dataset.geno(case_rows[part * cases_per_part + i], col);
    }
    for (size_t i = 0; i < controls_per_part; ++i) {
      out.data.geno(cases_per_part + i, jj) =
          dataset.geno(control_rows[part * controls_per_part + i], col);
    }
  }
  out.mechanism.kind = MechanismKind::kSampling;
  out.mechanism.partitions = partitions;
  out.mechanism.seed_commitment = "sampling-" + std::to_string(seed);
  out.data.validate();
  return out;
}

PartialNoisyDataset build_partial_dataset(const CaseControlDataset& dataset,
                                          std::span<const std::string> snp_ids,
                                          const MechanismDescriptor& mechanism,
                                          uint64_t seed) {
  if (mechanism.kind == MechanismKind::kRandomizedResponse) {
    return build_partial_noisy_dataset(dataset, snp_ids, mechanism.epsilon,
                                       seed);
  }
  return sample_partial_dataset(dataset, snp_ids, mechanism.partitions, seed);
}

LaplaceSensitivity default_sensitivity(size_t case_count) {
  require(case_count > 0, ErrorCode::kEmptyGroup, "empty case group");
  LaplaceSensitivity s;
  s.maf = 1.0 / static_cast<double>(case_count);
  return s;
}

std::vector<SnpStatistics> laplace_perturb_statistics(
    std::span<const SnpStatistics> stats, double epsilon_dp,
    const LaplaceSensitivity& sensitivity, uint64_t seed) {
  require(epsilon_dp > 0.0, ErrorCode::kDomain, "epsilon_dp must be positive");
  require(sensitivity.p_value > 0.0 && sensitivity.odds_ratio > 0.0 &&
              sensitivity.maf > 0.0,
          ErrorCode::kDomain, "sensitivities must be positive");
  std::vector<SnpStatistics> out(stats.begin(), stats.end());
  for (size_t i = 0; i < out.size(); ++i) {
    Rng rng = Rng::stream(seed, "dp", i);
    out[i].p_value = std::clamp(
        out[i].p_value + rng.laplace(sensitivity.p_value / epsilon_dp),
        1e-300, 1.0);
    out[i].odds_ratio = std::max(
        out[i].odds_ratio + rng.laplace(sensitivity.odds_ratio / epsilon_dp),
        1e-12);
    out[i].case_maf = std::clamp(
        out[i].case_maf + rng.laplace(sensitivity.maf / epsilon_dp), 0.0, 1.0);
  }
  return out;
}

void save_mechanism(const MechanismDescriptor& descriptor,
                    const std::string& path) {
  KeyValues kv;
  if (descriptor.kind == MechanismKind::kRandomizedResponse) {
    kv.emplace_back("mechanism", "rr");
    kv.emplace_back("epsilon", format_double(descriptor.epsilon));
  } else {
    kv.emplace_back("mechanism", "sampling");
    kv.emplace_back("b", std::to_string(descriptor.partitions));
  }
  kv.emplace_back("seed_commitment", descriptor.seed_commitment);
  write_key_values(kv, path);
}

MechanismDescriptor load_mechanism(const std::string& path) {
  MechanismDescriptor descriptor;
  bool saw_kind = false;
  for (const auto& [key, value] : read_key_values(path)) {
    if (key == "mechanism") {
      saw_kind = true;
      if (value == "rr") {
        descriptor.kind = MechanismKind::kRandomizedResponse;
      } else if (value == "sampling") {
        descriptor.kind = MechanismKind::kSampling;
      } else {
        fail(ErrorCode::kParse, "unknown mechanism: " + value);
      }
    } else if (key == "epsilon") {
      descriptor.epsilon = std::stod(value);
    } else if (key == "b") {
      descriptor.partitions = std::stoull(value);
    } else if (key == "seed_commitment") {
      descriptor.seed_commitment = value;
    } else {
      fail(ErrorCode::kParse, "unknown mechanism key: " + key);
    }
  }
  require(saw_kind, ErrorCode::kParse, "mechanism descriptor lacks a kind");
  return descriptor;
}

}  // namespace gwv
