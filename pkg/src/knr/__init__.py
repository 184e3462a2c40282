"""Steady states of a driven dissipative Kerr nonlinear resonator.

Closed-form photon statistics and Wigner function (:mod:`knr.analytic`),
a brute-force Lindblad oracle (:mod:`knr.oracle`) and figure-style sweeps
(:mod:`knr.sweep`).
"""
__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DegenerateWindow,
    InvalidParams,
    KnrError,
    NonConvergence,
    PoleError,
    SingularDenominator,
    SingularSystem,
    TruncationNotConverged,
    UnknownPreset,
    VacuumState,
)
from .model import KnrParams, LambdaConvention, derive  # noqa: E402
from .specfun import SeriesConfig  # noqa: E402
from .analytic import (  # noqa: E402
    g2_zero_delay,
    mean_photon_number,
    observables,
    photon_distribution,
    wigner,
)
from .oracle import OracleConfig, oracle_observables, oracle_wigner, steady_state  # noqa: E402

__all__ = [
    "KnrParams", "LambdaConvention", "derive", "SeriesConfig", "OracleConfig",
    "photon_distribution", "mean_photon_number", "g2_zero_delay", "observables", "wigner",
    "steady_state", "oracle_observables", "oracle_wigner",
    "KnrError", "PoleError", "NonConvergence", "InvalidParams", "SingularDenominator",
    "VacuumState", "TruncationNotConverged", "SingularSystem", "DegenerateWindow",
    "UnknownPreset",
]
