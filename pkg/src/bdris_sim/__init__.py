"""BD-RIS channel-estimation simulation laboratory.

Quantifies, via Monte Carlo NMSE curves, how circuit-level impairments of a
beyond-diagonal RIS scattering matrix degrade matched-filter channel
estimation.
"""

from .estimation import (
    EstimateResult,
    NOISELESS,
    ReceivedSignal,
    matched_filter,
    nmse,
    synthesize_rx,
)
from .harness import (
    SweepPlan,
    SweepRecord,
    TrialResult,
    preset_plan,
    run_sweep,
    run_trial,
    write_csv,
)
from .impairments import ImpairmentMatrix, ImpairmentSpec, max_affected, sample_impairment
from .system import ChannelPair, CombinedChannel, SystemConfig, combined_channel, generate_channels
from .training import TrainingDesign, build_training, verify_orthogonality

__all__ = [
    "ChannelPair",
    "CombinedChannel",
    "EstimateResult",
    "ImpairmentMatrix",
    "ImpairmentSpec",
    "NOISELESS",
    "ReceivedSignal",
    "SweepPlan",
    "SweepRecord",
    "SystemConfig",
    "TrainingDesign",
    "TrialResult",
    "build_training",
    "combined_channel",
    "generate_channels",
    "matched_filter",
    "max_affected",
    "nmse",
    "preset_plan",
    "run_sweep",
    "run_trial",
    "sample_impairment",
    "synthesize_rx",
    "verify_orthogonality",
    "write_csv",
]

__version__ = "0.1.0"
