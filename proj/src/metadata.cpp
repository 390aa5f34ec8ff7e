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

#include "gwv/metadata.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "gwv/error.hpp"
#include "gwv/io.hpp"
#include "gwv/rng.hpp"

namespace gwv {

namespace {

using nlohmann::json;

std::unordered_map<std::string, size_t> snp_index_map(
    const CaseControlDataset& dataset) {
  std::unordered_map<std::string, size_t> map;
  map.reserve(dataset.m());
  for (size_t j = 0; j < dataset.m(); ++j) map.emplace(dataset.snp_ids[j], j);
  return map;
}

// Squared Pearson correlation between two genotype columns; zero-variance
// columns count as uncorrelated.
double r_squared(std::span<const uint8_t> x, std::span<const uint8_t> y) {
  size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    double xi = x[i];
    double yi = y[i];
    sx += xi;
    sy += yi;
    sxx += xi * xi;
    syy += yi * yi;
    sxy += xi * yi;
  }
  double vx = n * sxx - sx * sx;
  double vy = n * syy - sy * sy;
  if (vx <= 0.0 || vy <= 0.0) return 0.0;
  double cov = n * sxy - sx * sy;
  return (cov * cov) / (vx * vy);
}

// Greedy scan over `ordered_ids` collecting up to `want` representatives.
LdPruneResult prune_ordered(const CaseControlDataset& dataset,
                            std::span<const std::string> ordered_ids,
                            double r2_threshold, size_t want,
                            const std::unordered_map<std::string, size_t>& idx) {
  LdPruneResult result;
  std::vector<std::vector<uint8_t>> kept_columns;
  for (const std::string& id : ordered_ids) {
    if (result.representatives.size() >= want) break;
    auto it = idx.find(id);
    require(it != idx.end(), ErrorCode::kDomain, "unknown SNP id: " + id);
    std::vector<uint8_t> col = dataset.column(it->second);
    double best_r2 = -1.0;
    size_t best = 0;
    for (size_t r = 0; r < kept_columns.size(); ++r) {
      double r2 = r_squared(col, kept_columns[r]);
      if (r2 > best_r2) {
        best_r2 = r2;
        best = r;
      }
    }
    if (best_r2 >= r2_threshold) {
      result.linkage[id] = result.representatives[best];
    } else {
      result.representatives.push_back(id);
      kept_columns.push_back(std::move(col));
    }
  }
  return result;
}

struct WindowBundle {
  MetadataBundle bundle;
  std::vector<SnpStatistics> claimed_truth;  // correct stats of claimed ids
};

// Core bundle assembly: the claimed list is the window of `l` ranking
// entries starting at `start`; the partial dataset covers the first `k`
// LD-independent SNPs scanned from the same starting rank.
WindowBundle build_window(const CaseControlDataset& dataset,
                          const GwasRanking& ranking, size_t start, size_t l,
                          size_t k, const MechanismDescriptor& mechanism,
                          uint64_t seed, double r2_threshold) {
  require(l >= 1, ErrorCode::kDomain, "l must be at least 1");
  require(l <= k, ErrorCode::kDomain, "k must be at least l");
  require(start + l <= ranking.ranked.size(), ErrorCode::kOffsetRange,
          "rank window exceeds the available ranking");

  std::vector<std::string> scan_ids;
  scan_ids.reserve(ranking.ranked.size() - start);
  for (size_t r = start; r < ranking.ranked.size(); ++r) {
    scan_ids.push_back(ranking.ranked[r].snp_id);
  }
  auto idx = snp_index_map(dataset);
  LdPruneResult pruned =
      prune_ordered(dataset, scan_ids, r2_threshold, k, idx);
  require(pruned.representatives.size() == k, ErrorCode::kDomain,
          "fewer than k LD-independent SNPs available");

  WindowBundle out;
  out.bundle.phenotype = dataset.phenotype;
  out.bundle.population = dataset.population;
  out.bundle.n_samples = dataset.n();
  out.bundle.m_snps = dataset.m();
  out.bundle.epsilon_declared =
      mechanism.kind == MechanismKind::kRandomizedResponse ? mechanism.epsilon
                                                           : 0.0;
  out.bundle.partial =
      build_partial_dataset(dataset, pruned.representatives, mechanism, seed);
  for (size_t j = 0; j < l; ++j) {
    const SnpStatistics& own = ranking.ranked[start + j];
    out.claimed_truth.push_back(own);
    auto link = pruned.linkage.find(own.snp_id);
    if (link != pruned.linkage.end()) {
      out.bundle.linkage[own.snp_id] = link->second;
    }
  }
  return out;
}

std::array<double, 3> reported_losses(
    std::span<const SnpStatistics> reported,
    std::span<const SnpStatistics> truth) {
  double z_or = 0.0;
  for (const SnpStatistics& t : truth) z_or = std::max(z_or, t.odds_ratio);
  if (z_or <= 0.0) z_or = 1.0;
  double lp = 0, lo = 0, la = 0;
  for (size_t j = 0; j < reported.size(); ++j) {
    lp += std::fabs(reported[j].p_value - truth[j].p_value) / 1.0;
    lo += std::fabs(reported[j].odds_ratio - truth[j].odds_ratio) / z_or;
    la += std::fabs(reported[j].case_maf - truth[j].case_maf) / 0.5;
  }
  double l = static_cast<double>(reported.size());
  return {lp / l, lo / l, la / l};
}

// Sorts reported rows by claimed strength, carrying truth and per-SNP
// scenario kinds along, so bundles always present a ranked list.
void sort_reported(InjectionResult& result) {
  size_t l = result.bundle.reported.size();
  std::vector<size_t> order(l);
  std::iota(order.begin(), order.end(), 0);
  const auto& rep = result.bundle.reported;
  std::sort(order.begin(), order.end(), [&rep](size_t x, size_t y) {
    if (rep[x].p_value != rep[y].p_value) return rep[x].p_value < rep[y].p_value;
    return rep[x].snp_id < rep[y].snp_id;
  });
  std::vector<SnpStatistics> new_rep, new_truth;
  std::vector<ScenarioKind> new_kinds;
  for (size_t i : order) {
    new_rep.push_back(rep[i]);
    new_truth.push_back(result.ground_truth[i]);
    new_kinds.push_back(result.per_snp[i]);
  }
  result.bundle.reported = std::move(new_rep);
  result.ground_truth = std::move(new_truth);
  result.per_snp = std::move(new_kinds);
}

}  // namespace

LdPruneResult ld_prune(const CaseControlDataset& dataset,
                       std::span<const std::string> candidate_snps,
                       double r2_threshold) {
  require(r2_threshold > 0.0 && r2_threshold <= 1.0, ErrorCode::kDomain,
          "r2 threshold must lie in (0, 1]");
  auto idx = snp_index_map(dataset);
  return prune_ordered(dataset, candidate_snps, r2_threshold,
                       candidate_snps.size(), idx);
}

MetadataResult build_metadata(const CaseControlDataset& dataset, size_t l,
                              size_t k, double epsilon, uint64_t seed,
                              double r2_threshold) {
  MechanismDescriptor mechanism;
  mechanism.kind = MechanismKind::kRandomizedResponse;
  mechanism.epsilon = epsilon;
  return build_metadata(dataset, l, k, mechanism, seed, r2_threshold);
}

MetadataResult build_metadata(const CaseControlDataset& dataset, size_t l,
                              size_t k, const MechanismDescriptor& mechanism,
                              uint64_t seed, double r2_threshold) {
  require(k <= dataset.m(), ErrorCode::kDomain, "k exceeds m");
  GwasRanking ranking = run_gwas_full(dataset);
  WindowBundle window =
      build_window(dataset, ranking, 0, l, k, mechanism, seed, r2_threshold);
  MetadataResult result;
  result.bundle = std::move(window.bundle);
  result.bundle.reported = window.claimed_truth;
  result.ground_truth = std::move(window.claimed_truth);
  return result;
}

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kCorrect:
      return "correct";
    case ScenarioKind::kOversell:
      return "oversell";
    case ScenarioKind::kUndersell:
      return "undersell";
    case ScenarioKind::kMixed:
      return "mixed";
    case ScenarioKind::kMetadataEpsilon:
      return "metadata-epsilon";
  }
  return "unknown";
}

void ErrorScenario::validate() const {
  switch (kind) {
    case ScenarioKind::kCorrect:
      break;
    case ScenarioKind::kOversell:
    case ScenarioKind::kUndersell:
      require(offset >= 1, ErrorCode::kDomain,
              "offset must be at least 1 for oversell/undersell");
      break;
    case ScenarioKind::kMixed: {
      require(offset >= 1, ErrorCode::kDomain,
              "offset must be at least 1 for mixed scenarios");
      double sum = 0.0;
      for (double f : mix_fractions) {
        require(f >= 0.0, ErrorCode::kDomain, "mix fractions must be >= 0");
        sum += f;
      }
      require(std::fabs(sum - 1.0) <= 1e-9, ErrorCode::kDomain,
              "mix fractions must sum to 1");
      break;
    }
    case ScenarioKind::kMetadataEpsilon:
      require(epsilon_actual > 0.0, ErrorCode::kDomain,
              "epsilon_actual must be positive");
      break;
  }
  if (window_start > 0) {
    bool needs_stronger =
        kind == ScenarioKind::kOversell || kind == ScenarioKind::kMixed;
    require(!needs_stronger || window_start >= offset, ErrorCode::kDomain,
            "window_start must leave room for stronger donors");
  }
}

std::string ErrorScenario::describe() const {
  std::ostringstream out;
  out << to_string(kind);
  switch (kind) {
    case ScenarioKind::kCorrect:
      break;
    case ScenarioKind::kOversell:
    case ScenarioKind::kUndersell:
      out << ":" << offset;
      if (window_start > 0) out << ":" << window_start;
      break;
    case ScenarioKind::kMixed:
      out << ":" << offset << ":" << format_double(mix_fractions[0]) << ','
          << format_double(mix_fractions[1]) << ','
          << format_double(mix_fractions[2]);
      if (window_start > 0) out << ":" << window_start;
      break;
    case ScenarioKind::kMetadataEpsilon:
      out << ":" << format_double(epsilon_actual);
      break;
  }
  return out.str();
}

ErrorScenario parse_scenario(const std::string& text) {
  std::vector<std::string> parts;
  size_t start = 0;
  for (;;) {
    size_t colon = text.find(':', start);
    if (colon == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, colon - start));
    start = colon + 1;
  }
  ErrorScenario scenario;
  try {
    if (parts[0] == "correct") {
      scenario.kind = ScenarioKind::kCorrect;
      require(parts.size() == 1, ErrorCode::kParse, "correct takes no args");
    } else if (parts[0] == "oversell" || parts[0] == "undersell") {
      scenario.kind = parts[0] == "oversell" ? ScenarioKind::kOversell
                                             : ScenarioKind::kUndersell;
      require(parts.size() == 2 || parts.size() == 3, ErrorCode::kParse,
              parts[0] + " needs an offset (and optional window start)");
      scenario.offset = std::stoull(parts[1]);
      if (parts.size() == 3) scenario.window_start = std::stoull(parts[2]);
    } else if (parts[0] == "mixed") {
      scenario.kind = ScenarioKind::kMixed;
      require(parts.size() == 3 || parts.size() == 4, ErrorCode::kParse,
              "mixed needs offset and fractions");
      scenario.offset = std::stoull(parts[1]);
      std::istringstream f(parts[2]);
      std::string tok;
      for (int i = 0; i < 3; ++i) {
        require(static_cast<bool>(std::getline(f, tok, ',')),
                ErrorCode::kParse, "mixed needs three fractions");
        scenario.mix_fractions[i] = std::stod(tok);
      }
      if (parts.size() == 4) scenario.window_start = std::stoull(parts[3]);
    } else if (parts[0] == "metadata-epsilon") {
      scenario.kind = ScenarioKind::kMetadataEpsilon;
      require(parts.size() == 2, ErrorCode::kParse,
              "metadata-epsilon needs a value");
      scenario.epsilon_actual = std::stod(parts[1]);
    } else {
      fail(ErrorCode::kParse, "unknown scenario: " + parts[0]);
    }
  } catch (const std::invalid_argument&) {
    fail(ErrorCode::kParse, "bad scenario argument in: " + text);
  } catch (const std::out_of_range&) {
    fail(ErrorCode::kParse, "scenario argument out of range in: " + text);
  }
  scenario.validate();
  return scenario;
}

InjectionResult inject_errors(const CaseControlDataset& dataset,
                              const MetadataBundle& bundle,
                              const GwasRanking& ranking,
                              const ErrorScenario& scenario, uint64_t seed,
                              double r2_threshold) {
  scenario.validate();
  const size_t l = bundle.reported.size();
  const size_t k = bundle.partial.data.m();
  const size_t ranked = ranking.ranked.size();
  const double eps = bundle.epsilon_declared;

  InjectionResult result;
  switch (scenario.kind) {
    case ScenarioKind::kCorrect: {
      result.bundle = bundle;
      result.ground_truth = bundle.reported;
      result.per_snp.assign(l, ScenarioKind::kCorrect);
      break;
    }
    case ScenarioKind::kOversell: {
      size_t start = scenario.window_start > 0 ? scenario.window_start
                                               : scenario.offset;
      require(start >= scenario.offset && start + l <= ranked,
              ErrorCode::kOffsetRange, "offset exceeds the available ranks");
      WindowBundle window =
          build_window(dataset, ranking, start, l, k,
                       bundle.partial.mechanism, seed, r2_threshold);
      result.bundle = std::move(window.bundle);
      result.ground_truth = std::move(window.claimed_truth);
      for (size_t j = 0; j < l; ++j) {
        // `offset` ranks stronger than the claimed SNP.
        SnpStatistics donor = ranking.ranked[start + j - scenario.offset];
        donor.snp_id = result.ground_truth[j].snp_id;
        result.bundle.reported.push_back(std::move(donor));
      }
      result.per_snp.assign(l, ScenarioKind::kOversell);
      break;
    }
    case ScenarioKind::kUndersell: {
      size_t start = scenario.window_start;
      require(start + scenario.offset + l <= ranked, ErrorCode::kOffsetRange,
              "offset exceeds the available ranks");
      WindowBundle window =
          start == 0 ? WindowBundle{}
                     : build_window(dataset, ranking, start, l, k,
                                    bundle.partial.mechanism, seed,
                                    r2_threshold);
      if (start == 0) {
        result.bundle = bundle;
        result.bundle.reported.clear();
        result.ground_truth.assign(ranking.ranked.begin(),
                                   ranking.ranked.begin() + l);
      } else {
        result.bundle = std::move(window.bundle);
        result.ground_truth = std::move(window.claimed_truth);
      }
      for (size_t j = 0; j < l; ++j) {
        SnpStatistics donor = ranking.ranked[start + j + scenario.offset];
        donor.snp_id = result.ground_truth[j].snp_id;
        result.bundle.reported.push_back(std::move(donor));
      }
      result.per_snp.assign(l, ScenarioKind::kUndersell);
      break;
    }
    case ScenarioKind::kMixed: {
      size_t start = scenario.window_start > 0 ? scenario.window_start
                                               : scenario.offset;
      require(start >= scenario.offset &&
                  start + l + scenario.offset <= ranked,
              ErrorCode::kOffsetRange, "offset exceeds the available ranks");
      WindowBundle window =
          build_window(dataset, ranking, start, l, k,
                       bundle.partial.mechanism, seed, r2_threshold);
      result.bundle = std::move(window.bundle);
      result.ground_truth = std::move(window.claimed_truth);
      Rng rng = Rng::stream(seed, "mix");
      for (size_t j = 0; j < l; ++j) {
        size_t rank = start + j;
        double u = rng.uniform();
        ScenarioKind kind;
        size_t donor_rank;
        if (u < scenario.mix_fractions[0]) {
          kind = ScenarioKind::kOversell;
          donor_rank = rank - scenario.offset;
        } else if (u < scenario.mix_fractions[0] + scenario.mix_fractions[1]) {
          kind = ScenarioKind::kUndersell;
          donor_rank = rank + scenario.offset;
        } else {
          kind = ScenarioKind::kCorrect;
          donor_rank = rank;
        }
        SnpStatistics donor = ranking.ranked[donor_rank];
        donor.snp_id = result.ground_truth[j].snp_id;
        result.bundle.reported.push_back(std::move(donor));
        result.per_snp.push_back(kind);
      }
      break;
    }
    case ScenarioKind::kMetadataEpsilon: {
      require(bundle.partial.mechanism.kind ==
                  MechanismKind::kRandomizedResponse,
              ErrorCode::kDomain,
              "metadata-epsilon applies to randomized-response bundles");
      result.bundle = bundle;
      result.bundle.partial = build_partial_noisy_dataset(
          dataset, bundle.partial.data.snp_ids, scenario.epsilon_actual,
          seed);
      // The shipped descriptor still declares the intended epsilon; only
      // the data carries the actually-used one.
      result.bundle.partial.mechanism.epsilon = eps;
      result.ground_truth = bundle.reported;
      result.per_snp.assign(l, ScenarioKind::kCorrect);
      break;
    }
  }

  sort_reported(result);
  auto losses = reported_losses(result.bundle.reported, result.ground_truth);
  result.loss_p = losses[0];
  result.loss_o = losses[1];
  result.loss_a = losses[2];
  return result;
}

size_t offset_for_target_loss(const GwasRanking& ranking, size_t l,
                              double target_loss, size_t window_start) {
  const auto& r = ranking.ranked;
  require(l >= 1 && l < r.size(), ErrorCode::kDomain,
          "l out of range for the ranking");
  require(window_start + l <= r.size(), ErrorCode::kDomain,
          "window start out of range for the ranking");
  std::vector<double> prefix(r.size() + 1, 0.0);
  for (size_t i = 0; i < r.size(); ++i) {
    prefix[i + 1] = prefix[i] + r[i].p_value;
  }
  // Mean claimed-minus-donor p gap is non-decreasing in the offset.
  if (window_start == 0) {
    double base = prefix[l] - prefix[0];
    size_t max_offset = r.size() - l;
    for (size_t offset = 1; offset <= max_offset; ++offset) {
      double loss = (prefix[offset + l] - prefix[offset] - base) /
                    static_cast<double>(l);
      if (loss >= target_loss) return offset;
    }
    return max_offset;
  }
  double claimed = prefix[window_start + l] - prefix[window_start];
  for (size_t offset = 1; offset <= window_start; ++offset) {
    double donor = prefix[window_start + l - offset] -
                   prefix[window_start - offset];
    double loss = (claimed - donor) / static_cast<double>(l);
    if (loss >= target_loss) return offset;
  }
  return window_start;
}

void save_bundle(const MetadataBundle& bundle, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, ErrorCode::kIo, "cannot create directory: " + dir);

  save_dataset(bundle.partial.data, (fs::path(dir) / "partial.tsv").string());
  save_mechanism(bundle.partial.mechanism,
                 (fs::path(dir) / "partial.tsv.mech").string());
  write_statistics_csv((fs::path(dir) / "reported.csv").string(),
                       bundle.reported);

  json doc;
  doc["phenotype"] = bundle.phenotype;
  doc["population"] = bundle.population;
  doc["n"] = bundle.n_samples;
  doc["m"] = bundle.m_snps;
  doc["epsilon"] = bundle.epsilon_declared;
  doc["partial_ref"] = "partial.tsv";
  doc["reported_ref"] = "reported.csv";
  doc["linkage"] = bundle.linkage;
  write_text_file((fs::path(dir) / "bundle.json").string(), doc.dump(2) + "\n");
}

MetadataBundle load_bundle(const std::string& bundle_json_path) {
  namespace fs = std::filesystem;
  json doc;
  try {
    doc = json::parse(read_text_file(bundle_json_path));
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kParse, std::string("bad bundle JSON: ") + e.what());
  }
  MetadataBundle bundle;
  try {
    bundle.phenotype = doc.at("phenotype").get<std::string>();
    bundle.population = doc.at("population").get<std::string>();
    bundle.n_samples = doc.at("n").get<size_t>();
    bundle.m_snps = doc.at("m").get<size_t>();
    bundle.epsilon_declared = doc.at("epsilon").get<double>();
    fs::path base = fs::path(bundle_json_path).parent_path();
    std::string partial_ref = doc.at("partial_ref").get<std::string>();
    std::string reported_ref = doc.at("reported_ref").get<std::string>();
    bundle.partial.data = load_dataset((base / partial_ref).string());
    bundle.partial.mechanism =
        load_mechanism((base / (partial_ref + ".mech")).string());
    bundle.reported = read_statistics_csv((base / reported_ref).string());
    if (doc.contains("linkage")) {
      bundle.linkage =
          doc.at("linkage").get<std::map<std::string, std::string>>();
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("bundle JSON field error: ") + e.what());
  }
  return bundle;
}

}  // namespace gwv
