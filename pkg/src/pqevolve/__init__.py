"""Streaming power-quality toolkit: synthetic disturbance waveforms,
trend/spectral attribute extraction, an evolving Gaussian fuzzy
classifier for partially labeled streams, and a seeded experiment
harness."""

from .classifier import (
    RHO_FLOOR,
    SIGMA_MAX,
    SIGMA_MIN,
    ClassEstimate,
    GaussianMF,
    MergeEvent,
    Rule,
    RuleBase,
    activation,
    granule_distance,
    membership,
)
from .features import (
    DEFAULT_LAMBDA,
    AttributeVector,
    HPDecomposition,
    attributes_to_csv,
    condition_attributes,
    dft_amplitude,
    extract_attributes,
    fundamental_bin,
    hp_filter,
    rms,
)
from .harness import (
    DEFAULT_PER_CLASS,
    DEFAULT_SEEDS,
    ExperimentPlan,
    ExperimentResult,
    Hyper,
    RunRecord,
    cell_id,
    run_cell,
    run_plan,
    summarize,
    sweep,
    write_confusion_csv,
    write_rulebase_csv,
    write_snapshot_json,
    write_summary_csv,
    write_trajectory_csv,
)
from .metrics import StreamScore, mean_ci99, purity_score
from .waveforms import (
    FUNDAMENTAL_FREQ,
    SAMPLES_PER_CYCLE,
    SAMPLING_FREQ,
    DisturbanceClass,
    SignalConfig,
    StreamSpec,
    Waveform,
    generate_stream,
    generate_window,
    noise_sigma,
    waveforms_to_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AttributeVector",
    "ClassEstimate",
    "DEFAULT_LAMBDA",
    "DEFAULT_PER_CLASS",
    "DEFAULT_SEEDS",
    "DisturbanceClass",
    "ExperimentPlan",
    "ExperimentResult",
    "FUNDAMENTAL_FREQ",
    "GaussianMF",
    "HPDecomposition",
    "Hyper",
    "MergeEvent",
    "RHO_FLOOR",
    "Rule",
    "RuleBase",
    "RunRecord",
    "SAMPLES_PER_CYCLE",
    "SAMPLING_FREQ",
    "SIGMA_MAX",
    "SIGMA_MIN",
    "SignalConfig",
    "StreamScore",
    "StreamSpec",
    "Waveform",
    "activation",
    "attributes_to_csv",
    "cell_id",
    "condition_attributes",
    "dft_amplitude",
    "extract_attributes",
    "fundamental_bin",
    "generate_stream",
    "generate_window",
    "granule_distance",
    "hp_filter",
    "membership",
    "mean_ci99",
    "noise_sigma",
    "purity_score",
    "rms",
    "run_cell",
    "run_plan",
    "summarize",
    "sweep",
    "waveforms_to_csv",
    "write_confusion_csv",
    "write_rulebase_csv",
    "write_snapshot_json",
    "write_summary_csv",
    "write_trajectory_csv",
]
