#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gwv/audit.hpp"
#include "gwv/dataset.hpp"
#include "gwv/error.hpp"
#include "gwv/eval.hpp"
#include "gwv/gwas.hpp"
#include "gwv/io.hpp"
#include "gwv/ldp.hpp"
#include "gwv/metadata.hpp"
#include "gwv/rng.hpp"
#include "gwv/synth.hpp"
#include "gwv/verify.hpp"

namespace py = pybind11;

namespace {

gwv::ContingencyTable make_table(const std::vector<uint8_t>& column,
                                 const std::vector<gwv::Label>& labels) {
  return gwv::contingency_table(column, labels);
}

std::vector<uint8_t> perturb_column(const std::vector<uint8_t>& values,
                                    double epsilon, uint64_t seed) {
  gwv::RrParameters params = gwv::rr_probabilities(epsilon, 3);
  gwv::Rng rng = gwv::Rng::stream(seed, "rr", 0);
  std::vector<uint8_t> out;
  out.reserve(values.size());
  for (uint8_t v : values) out.push_back(gwv::perturb_value(v, params, rng));
  return out;
}

py::tuple estimate_counts_py(const std::vector<int64_t>& observed,
                             const gwv::RrParameters& params) {
  gwv::CountEstimate est = gwv::estimate_counts(observed, params);
  return py::make_tuple(est.raw, est.adjusted);
}

double lrt_statistic(const std::vector<uint8_t>& target,
                     const std::vector<double>& case_freqs,
                     const std::vector<double>& pop_freqs, bool per_allele) {
  gwv::LrtScorer scorer(case_freqs, pop_freqs,
                        per_allele ? gwv::LrtScorer::Encoding::kPerAllele
                                   : gwv::LrtScorer::Encoding::kAsPrinted);
  return scorer.score(target);
}

gwv::InjectionResult inject_errors_py(const gwv::CaseControlDataset& dataset,
                                      const gwv::MetadataBundle& bundle,
                                      const gwv::ErrorScenario& scenario,
                                      uint64_t seed) {
  gwv::GwasRanking ranking = gwv::run_gwas_full(dataset);
  return gwv::inject_errors(dataset, bundle, ranking, scenario, seed);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Core operations for verifying case-control study outputs.";

  py::register_exception<gwv::Error>(m, "VerifyError");

  py::enum_<gwv::Label>(m, "Label")
      .value("CONTROL", gwv::Label::kControl)
      .value("CASE", gwv::Label::kCase);

  py::enum_<gwv::PartitionAxis>(m, "PartitionAxis")
      .value("SNPS", gwv::PartitionAxis::kSnps)
      .value("SAMPLES", gwv::PartitionAxis::kSamples);

  py::enum_<gwv::StatKind>(m, "StatKind")
      .value("ODDS_RATIO", gwv::StatKind::kOddsRatio)
      .value("P_VALUE", gwv::StatKind::kPValue)
      .value("MAF", gwv::StatKind::kMaf);

  py::enum_<gwv::ScenarioKind>(m, "ScenarioKind")
      .value("CORRECT", gwv::ScenarioKind::kCorrect)
      .value("OVERSELL", gwv::ScenarioKind::kOversell)
      .value("UNDERSELL", gwv::ScenarioKind::kUndersell)
      .value("MIXED", gwv::ScenarioKind::kMixed)
      .value("METADATA_EPSILON", gwv::ScenarioKind::kMetadataEpsilon);

  py::enum_<gwv::Verdict>(m, "Verdict")
      .value("CORRECT", gwv::Verdict::kCorrect)
      .value("INCORRECT", gwv::Verdict::kIncorrect);

  py::enum_<gwv::Direction>(m, "Direction")
      .value("OVERSELL", gwv::Direction::kOversell)
      .value("UNDERSELL", gwv::Direction::kUndersell)
      .value("NOT_APPLICABLE", gwv::Direction::kNotApplicable);

  py::enum_<gwv::MechanismKind>(m, "MechanismKind")
      .value("RANDOMIZED_RESPONSE", gwv::MechanismKind::kRandomizedResponse)
      .value("SAMPLING", gwv::MechanismKind::kSampling);

  py::enum_<gwv::ScoreDirection>(m, "ScoreDirection")
      .value("HIGHER_SUSPICIOUS", gwv::ScoreDirection::kHigherSuspicious)
      .value("LOWER_SUSPICIOUS", gwv::ScoreDirection::kLowerSuspicious);

  py::class_<gwv::CaseControlDataset>(m, "CaseControlDataset")
      .def(py::init<>())
      .def_readwrite("sample_ids", &gwv::CaseControlDataset::sample_ids)
      .def_readwrite("labels", &gwv::CaseControlDataset::labels)
      .def_readwrite("snp_ids", &gwv::CaseControlDataset::snp_ids)
      .def_readwrite("genotypes", &gwv::CaseControlDataset::genotypes)
      .def_readwrite("phenotype", &gwv::CaseControlDataset::phenotype)
      .def_readwrite("population", &gwv::CaseControlDataset::population)
      .def_property_readonly("n", &gwv::CaseControlDataset::n)
      .def_property_readonly("m", &gwv::CaseControlDataset::m)
      .def("geno",
           [](const gwv::CaseControlDataset& ds, size_t i, size_t j) {
             return ds.geno(i, j);
           })
      .def("column", &gwv::CaseControlDataset::column)
      .def("case_count", &gwv::CaseControlDataset::case_count)
      .def("validate", &gwv::CaseControlDataset::validate);

  py::class_<gwv::SynthesisConfig>(m, "SynthesisConfig")
      .def(py::init<>())
      .def_readwrite("n_case", &gwv::SynthesisConfig::n_case)
      .def_readwrite("n_control", &gwv::SynthesisConfig::n_control)
      .def_readwrite("m", &gwv::SynthesisConfig::m)
      .def_readwrite("n_associated", &gwv::SynthesisConfig::n_associated)
      .def_readwrite("effect_lo", &gwv::SynthesisConfig::effect_lo)
      .def_readwrite("effect_hi", &gwv::SynthesisConfig::effect_hi)
      .def_readwrite("baseline_maf_lo", &gwv::SynthesisConfig::baseline_maf_lo)
      .def_readwrite("baseline_maf_hi", &gwv::SynthesisConfig::baseline_maf_hi)
      .def_readwrite("ld_block_size", &gwv::SynthesisConfig::ld_block_size)
      .def_readwrite("ld_flip_prob", &gwv::SynthesisConfig::ld_flip_prob)
      .def_readwrite("seed", &gwv::SynthesisConfig::seed)
      .def_readwrite("phenotype", &gwv::SynthesisConfig::phenotype)
      .def_readwrite("population", &gwv::SynthesisConfig::population);

  py::class_<gwv::ContingencyTable>(m, "ContingencyTable")
      .def(py::init<>())
      .def_readwrite("s", &gwv::ContingencyTable::s)
      .def_readwrite("c", &gwv::ContingencyTable::c)
      .def("case_total", &gwv::ContingencyTable::case_total)
      .def("control_total", &gwv::ContingencyTable::control_total)
      .def("total", &gwv::ContingencyTable::total);

  py::class_<gwv::SnpStatistics>(m, "SnpStatistics")
      .def(py::init<>())
      .def_readwrite("snp_id", &gwv::SnpStatistics::snp_id)
      .def_readwrite("odds_ratio", &gwv::SnpStatistics::odds_ratio)
      .def_readwrite("p_value", &gwv::SnpStatistics::p_value)
      .def_readwrite("case_maf", &gwv::SnpStatistics::case_maf)
      .def_readwrite("se_log_or", &gwv::SnpStatistics::se_log_or)
      .def_readwrite("ci_low", &gwv::SnpStatistics::ci_low)
      .def_readwrite("ci_high", &gwv::SnpStatistics::ci_high)
      .def_readwrite("z", &gwv::SnpStatistics::z);

  py::class_<gwv::RrParameters>(m, "RrParameters")
      .def_readonly("epsilon", &gwv::RrParameters::epsilon)
      .def_readonly("domain_size", &gwv::RrParameters::domain_size)
      .def_readonly("p_keep", &gwv::RrParameters::p_keep)
      .def_readonly("q_flip", &gwv::RrParameters::q_flip);

  py::class_<gwv::MechanismDescriptor>(m, "MechanismDescriptor")
      .def(py::init<>())
      .def_readwrite("kind", &gwv::MechanismDescriptor::kind)
      .def_readwrite("epsilon", &gwv::MechanismDescriptor::epsilon)
      .def_readwrite("partitions", &gwv::MechanismDescriptor::partitions)
      .def_readwrite("seed_commitment",
                     &gwv::MechanismDescriptor::seed_commitment)
      .def("tag", &gwv::MechanismDescriptor::tag);

  py::class_<gwv::PartialNoisyDataset>(m, "PartialNoisyDataset")
      .def_readwrite("data", &gwv::PartialNoisyDataset::data)
      .def_readwrite("mechanism", &gwv::PartialNoisyDataset::mechanism);

  py::class_<gwv::MetadataBundle>(m, "MetadataBundle")
      .def_readwrite("phenotype", &gwv::MetadataBundle::phenotype)
      .def_readwrite("population", &gwv::MetadataBundle::population)
      .def_readwrite("n_samples", &gwv::MetadataBundle::n_samples)
      .def_readwrite("m_snps", &gwv::MetadataBundle::m_snps)
      .def_readwrite("epsilon_declared", &gwv::MetadataBundle::epsilon_declared)
      .def_readwrite("partial", &gwv::MetadataBundle::partial)
      .def_readwrite("reported", &gwv::MetadataBundle::reported)
      .def_readwrite("linkage", &gwv::MetadataBundle::linkage);

  py::class_<gwv::MetadataResult>(m, "MetadataResult")
      .def_readwrite("bundle", &gwv::MetadataResult::bundle)
      .def_readwrite("ground_truth", &gwv::MetadataResult::ground_truth);

  py::class_<gwv::ErrorScenario>(m, "ErrorScenario")
      .def(py::init<>())
      .def_readwrite("kind", &gwv::ErrorScenario::kind)
      .def_readwrite("offset", &gwv::ErrorScenario::offset)
      .def_readwrite("mix_fractions", &gwv::ErrorScenario::mix_fractions)
      .def_readwrite("epsilon_actual", &gwv::ErrorScenario::epsilon_actual)
      .def("describe", &gwv::ErrorScenario::describe);

  py::class_<gwv::InjectionResult>(m, "InjectionResult")
      .def_readwrite("bundle", &gwv::InjectionResult::bundle)
      .def_readwrite("ground_truth", &gwv::InjectionResult::ground_truth)
      .def_readwrite("per_snp", &gwv::InjectionResult::per_snp)
      .def_readwrite("loss_p", &gwv::InjectionResult::loss_p)
      .def_readwrite("loss_o", &gwv::InjectionResult::loss_o)
      .def_readwrite("loss_a", &gwv::InjectionResult::loss_a);

  py::class_<gwv::CutoffSet>(m, "CutoffSet")
      .def_readwrite("tau_o", &gwv::CutoffSet::tau_o)
      .def_readwrite("tau_p", &gwv::CutoffSet::tau_p)
      .def_readwrite("tau_a", &gwv::CutoffSet::tau_a)
      .def("tau", &gwv::CutoffSet::tau);

  py::class_<gwv::ReportRow>(m, "ReportRow")
      .def_readonly("snp_id", &gwv::ReportRow::snp_id)
      .def_readonly("statistic", &gwv::ReportRow::statistic)
      .def_readonly("phi", &gwv::ReportRow::phi)
      .def_readonly("tau", &gwv::ReportRow::tau)
      .def_readonly("verdict", &gwv::ReportRow::verdict)
      .def_readonly("direction", &gwv::ReportRow::direction)
      .def_readonly("re_d", &gwv::ReportRow::re_d)
      .def_readonly("re_e", &gwv::ReportRow::re_e)
      .def_readonly("reason", &gwv::ReportRow::reason);

  py::class_<gwv::VerificationReport>(m, "VerificationReport")
      .def_readonly("rows", &gwv::VerificationReport::rows)
      .def_readonly("weak_association_warning",
                    &gwv::VerificationReport::weak_association_warning)
      .def("any_incorrect", &gwv::VerificationReport::any_incorrect);

  py::class_<gwv::PowerResult>(m, "PowerResult")
      .def_readonly("gamma", &gwv::PowerResult::gamma)
      .def_readonly("power", &gwv::PowerResult::power)
      .def_readonly("fpr_target", &gwv::PowerResult::fpr_target)
      .def_readonly("score_kind", &gwv::PowerResult::score_kind)
      .def_readonly("axis", &gwv::PowerResult::axis)
      .def_readonly("axis_value", &gwv::PowerResult::axis_value)
      .def_readonly("epsilon", &gwv::PowerResult::epsilon);

  py::class_<gwv::AttackCohorts>(m, "AttackCohorts")
      .def_readwrite("a_rows", &gwv::AttackCohorts::a_rows)
      .def_readwrite("b_rows", &gwv::AttackCohorts::b_rows)
      .def_static("draw", &gwv::AttackCohorts::draw, py::arg("dataset"),
                  py::arg("n_a"), py::arg("n_b"), py::arg("seed"));

  m.def("synthesize_dataset", &gwv::synthesize_dataset, py::arg("config"));
  m.def("load_dataset", &gwv::load_dataset, py::arg("path"));
  m.def("save_dataset", &gwv::save_dataset, py::arg("dataset"),
        py::arg("path"));
  m.def("partition_dataset", &gwv::partition_dataset, py::arg("dataset"),
        py::arg("parts"), py::arg("axis"), py::arg("seed"));
  m.def("random_label", &gwv::random_label, py::arg("dataset"),
        py::arg("seed"));
  m.def("contingency_table", &make_table, py::arg("genotype_column"),
        py::arg("labels"));
  m.def("compute_statistics", &gwv::compute_statistics, py::arg("table"),
        py::arg("continuity_correction") = true);
  m.def("normal_two_sided_p", &gwv::normal_two_sided_p, py::arg("z"));
  m.def("run_gwas", &gwv::run_gwas, py::arg("dataset"), py::arg("l"),
        py::arg("continuity_correction") = true);
  m.def("rr_probabilities", &gwv::rr_probabilities, py::arg("epsilon"),
        py::arg("domain_size") = 3);
  m.def("perturb_column", &perturb_column, py::arg("values"),
        py::arg("epsilon"), py::arg("seed"));
  m.def("estimate_counts", &estimate_counts_py, py::arg("observed_counts"),
        py::arg("params"));
  m.def(
      "build_partial_noisy_dataset",
      [](const gwv::CaseControlDataset& ds,
         const std::vector<std::string>& ids, double eps, uint64_t seed) {
        return gwv::build_partial_noisy_dataset(ds, ids, eps, seed);
      },
      py::arg("dataset"), py::arg("snp_ids"), py::arg("epsilon"),
      py::arg("seed"));
  m.def(
      "sample_partial_dataset",
      [](const gwv::CaseControlDataset& ds,
         const std::vector<std::string>& ids, size_t b, uint64_t seed) {
        return gwv::sample_partial_dataset(ds, ids, b, seed);
      },
      py::arg("dataset"), py::arg("snp_ids"), py::arg("partitions"),
      py::arg("seed"));
  m.def(
      "laplace_perturb_statistics",
      [](const std::vector<gwv::SnpStatistics>& stats, double eps_dp,
         double p_sensitivity, double or_sensitivity, size_t case_count,
         uint64_t seed) {
        gwv::LaplaceSensitivity sens = gwv::default_sensitivity(case_count);
        sens.p_value = p_sensitivity;
        sens.odds_ratio = or_sensitivity;
        return gwv::laplace_perturb_statistics(stats, eps_dp, sens, seed);
      },
      py::arg("stats"), py::arg("epsilon_dp"), py::arg("p_sensitivity"),
      py::arg("or_sensitivity"), py::arg("case_count"), py::arg("seed"));
  m.def(
      "build_metadata",
      [](const gwv::CaseControlDataset& ds, size_t l, size_t k, double eps,
         uint64_t seed, double r2) {
        return gwv::build_metadata(ds, l, k, eps, seed, r2);
      },
      py::arg("dataset"), py::arg("l"), py::arg("k"), py::arg("epsilon"),
      py::arg("seed"), py::arg("r2_threshold") = gwv::kDefaultR2Threshold);
  m.def("inject_errors", &inject_errors_py, py::arg("dataset"),
        py::arg("bundle"), py::arg("scenario"), py::arg("seed"));
  m.def("save_bundle", &gwv::save_bundle, py::arg("bundle"), py::arg("dir"));
  m.def("load_bundle", &gwv::load_bundle, py::arg("bundle_json_path"));
  m.def("deviation", &gwv::deviation, py::arg("kind"), py::arg("reported"),
        py::arg("reconstructed"));
  m.def("relative_change", &gwv::relative_change, py::arg("re_d"),
        py::arg("re_e"));
  m.def(
      "calibrate_cutoffs",
      [](const std::vector<gwv::CaseControlDataset>& f_splits,
         const gwv::CaseControlDataset& e, size_t l, double eps,
         const std::vector<gwv::ErrorScenario>& sweep, uint64_t seed,
         int trials) {
        return gwv::calibrate_cutoffs(f_splits, e, l, eps, sweep, seed,
                                      trials);
      },
      py::arg("f_splits"), py::arg("public_e"), py::arg("l"),
      py::arg("epsilon"), py::arg("scenario_sweep"), py::arg("seed"),
      py::arg("trials") = 3);
  m.def("verify_bundle", &gwv::verify_bundle, py::arg("bundle"),
        py::arg("public_e"), py::arg("cutoffs"), py::arg("trials"),
        py::arg("seed"));
  m.def("lrt_statistic", &lrt_statistic, py::arg("target"),
        py::arg("case_freqs"), py::arg("pop_freqs"),
        py::arg("per_allele") = false);
  m.def(
      "edit_distance",
      [](const std::vector<uint8_t>& g1, const std::vector<uint8_t>& g2) {
        return gwv::edit_distance(g1, g2);
      },
      py::arg("g1"), py::arg("g2"));
  m.def(
      "edit_distance_score",
      [](const std::vector<uint8_t>& target,
         const gwv::PartialNoisyDataset& partial) {
        return gwv::edit_distance_score(target, partial);
      },
      py::arg("target"), py::arg("partial"));
  m.def(
      "attack_power",
      [](const std::vector<double>& a, const std::vector<double>& b,
         gwv::ScoreDirection direction, double fpr) {
        return gwv::attack_power(a, b, direction, fpr);
      },
      py::arg("scores_a"), py::arg("scores_b"), py::arg("direction"),
      py::arg("fpr") = 0.05);
  m.def(
      "utility_loss",
      [](gwv::StatKind kind, const std::vector<double>& reported,
         const std::vector<double>& correct, double z) {
        return gwv::utility_loss(kind, reported, correct, z);
      },
      py::arg("kind"), py::arg("reported"), py::arg("correct"),
      py::arg("z_norm"));
}
