"""Bernstein-Vazirani under per-qubit depolarizing noise.

Three evaluation backends (full density matrix, per-qubit factorized, Monte
Carlo trajectories) plus the closed-form success probability and noise
threshold.
"""

from .analytic import (
    NoiseParams,
    SuccessProbability,
    ThresholdResult,
    success_probability,
    threshold_closed_form,
    threshold_p,
    threshold_small_p_approx,
)
from .density import DensityMatrix, run_bv_full, success_probability_full
from .factorized import full_state_from_factors, success_probability_factorized
from .hidden import HiddenString
from .montecarlo import McEstimate, TrajectoryConfig, estimate_success

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix",
    "HiddenString",
    "McEstimate",
    "NoiseParams",
    "SuccessProbability",
    "ThresholdResult",
    "TrajectoryConfig",
    "estimate_success",
    "full_state_from_factors",
    "run_bv_full",
    "success_probability",
    "success_probability_factorized",
    "success_probability_full",
    "threshold_closed_form",
    "threshold_p",
    "threshold_small_p_approx",
]
