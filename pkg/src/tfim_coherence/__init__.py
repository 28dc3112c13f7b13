"""Post-quench coherence dynamics of the transverse-field Ising chain.

Library core: momentum-space spectra, the time-dependent contraction
kernel, Toeplitz-determinant string correlators, Fisher-density and
Loschmidt-echo series with event detectors, and small-scale oracles.
A FastAPI service (``tfim_coherence.service``) wraps the core; the CLI
(``tfim-coherence``) is a thin client of the same handlers.
"""

from .coherence import (
    CoherencePoint,
    CoherenceSeries,
    Event,
    TimeGrid,
    detect_dqpt_cusps,
    detect_mqfi_cusps,
    detect_revival_or_decay,
    loschmidt_echo,
    long_time_sweep,
    mqfi,
    rate_fq,
    rate_le,
    rfq_first_minimum,
    run_series,
    static_scan,
)
from .correlators import (
    VarianceTriple,
    variances,
    xx_minor_sequence,
    yy_minor_sequence,
    zz_sequence,
)
from .kernel import Kernel, eval_kernel, eval_kernel_direct, static_kernel
from .spectrum import (
    CriticalTimes,
    ModeSet,
    QuenchSpec,
    SectorMismatchError,
    build_modes,
    dqpt_critical_times,
    max_group_velocity,
    revival_time_prediction,
)

__version__ = "0.1.0"

__all__ = [
    "CoherencePoint",
    "CoherenceSeries",
    "CriticalTimes",
    "Event",
    "Kernel",
    "ModeSet",
    "QuenchSpec",
    "SectorMismatchError",
    "TimeGrid",
    "VarianceTriple",
    "build_modes",
    "detect_dqpt_cusps",
    "detect_mqfi_cusps",
    "detect_revival_or_decay",
    "dqpt_critical_times",
    "eval_kernel",
    "eval_kernel_direct",
    "loschmidt_echo",
    "long_time_sweep",
    "max_group_velocity",
    "mqfi",
    "rate_fq",
    "rate_le",
    "revival_time_prediction",
    "rfq_first_minimum",
    "run_series",
    "static_kernel",
    "static_scan",
    "variances",
    "xx_minor_sequence",
    "yy_minor_sequence",
    "zz_sequence",
    "__version__",
]
