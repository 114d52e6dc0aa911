"""Decoherence of multi-photon polarization entanglement in fiber channels.

Builds GHZ and W states, pushes them through independent fiber channels
with polarization mode dispersion or polarization-dependent loss, and
quantifies what survives: pair concurrences, state fidelity, witness
expectation values, entanglement sudden death thresholds, and
decoherence-free subspace detection.
"""

from .analysis import (
    DsfResult,
    EsdQuery,
    ScanSpec,
    SweepResult,
    classify_monotonicity,
    dsf_check,
    esd_threshold,
    expand_bracket,
    sweep,
)
from .channels import (
    CORRELATED,
    PDL,
    PMD,
    UNCORRELATED,
    FiberChannel,
    NetworkConfig,
    SpectralModel,
    apply_channel,
    apply_pdl,
    apply_pmd,
    r_correlated,
    r_uncorrelated,
    spectral_overlap,
)
from .config import ConfigError, RunConfig, load_config, parse_config
from .metrics import (
    MetricsReport,
    concurrence,
    evaluate,
    fidelity,
    fidelity_closed_form,
    pair_concurrences,
    pair_concurrences_closed_form,
    witness_closed_form,
    witness_value,
)
from .oracle import FrequencyGrid, grid_apply_pmd, grid_r, xstate_concurrence
from .qlinalg import DensityMatrix, NumericalError, partial_trace
from .states import (
    GHZ,
    W,
    PureState,
    WitnessSpec,
    ghz_state,
    w_state,
    witness_a0,
    witness_spec,
)

__version__ = "0.1.0"

__all__ = [
    "CORRELATED",
    "ConfigError",
    "DensityMatrix",
    "DsfResult",
    "EsdQuery",
    "FiberChannel",
    "FrequencyGrid",
    "GHZ",
    "MetricsReport",
    "NetworkConfig",
    "NumericalError",
    "PDL",
    "PMD",
    "PureState",
    "RunConfig",
    "ScanSpec",
    "SpectralModel",
    "SweepResult",
    "UNCORRELATED",
    "W",
    "WitnessSpec",
    "apply_channel",
    "apply_pdl",
    "apply_pmd",
    "classify_monotonicity",
    "concurrence",
    "dsf_check",
    "esd_threshold",
    "evaluate",
    "expand_bracket",
    "fidelity",
    "fidelity_closed_form",
    "ghz_state",
    "grid_apply_pmd",
    "grid_r",
    "load_config",
    "pair_concurrences",
    "pair_concurrences_closed_form",
    "parse_config",
    "partial_trace",
    "r_correlated",
    "r_uncorrelated",
    "spectral_overlap",
    "sweep",
    "w_state",
    "witness_a0",
    "witness_closed_form",
    "witness_spec",
    "witness_value",
    "xstate_concurrence",
]
