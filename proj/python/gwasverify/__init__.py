"""Privacy-preserving verification of case-control study outputs.

Thin Pythonface over the C++ core: synthetic data generation, the
association scan, randomized-response metadata, verification against
calibrated cut-offs, and membership-inference auditing.
"""

from gwasverify._core import (  # noqa: F401
    AttackCohorts,
    CaseControlDataset,
    ContingencyTable,
    CutoffSet,
    Direction,
    ErrorScenario,
    InjectionResult,
    Label,
    MechanismDescriptor,
    MechanismKind,
    MetadataBundle,
    MetadataResult,
    PartialNoisyDataset,
    PartitionAxis,
    PowerResult,
    RrParameters,
    ScenarioKind,
    ScoreDirection,
    SnpStatistics,
    StatKind,
    SynthesisConfig,
    VerificationReport,
    Verdict,
    attack_power,
    build_metadata,
    build_partial_noisy_dataset,
    calibrate_cutoffs,
    compute_statistics,
    contingency_table,
    deviation,
    edit_distance,
    edit_distance_score,
    estimate_counts,
    inject_errors,
    laplace_perturb_statistics,
    load_bundle,
    load_dataset,
    lrt_statistic,
    normal_two_sided_p,
    partition_dataset,
    perturb_column,
    random_label,
    relative_change,
    rr_probabilities,
    run_gwas,
    sample_partial_dataset,
    save_bundle,
    save_dataset,
    synthesize_dataset,
    utility_loss,
    verify_bundle,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
