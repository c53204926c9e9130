"""Largest rho-value (LR) numbers: the integers maximizing sigma(n)/n among
those with a fixed number of prime factors (counted with multiplicity)."""

from .constants import (EULER_GAMMA, ConstantEstimate, compute_m_constant, compute_w1,
                        compute_w2, verify_theorem3)
from .exact_oracle import brute_force_max_rho, materialize, sigma_over_n_exact
from .lr_engine import Engine, LRRecord, LRState, RobinVerdict, g_value, rho, robin_check, run
from .zstream import ZElement, ZRangeError, ZStream, delta, z_value

__all__ = [
    "EULER_GAMMA", "ConstantEstimate", "compute_m_constant", "compute_w1", "compute_w2",
    "verify_theorem3", "brute_force_max_rho", "materialize", "sigma_over_n_exact",
    "Engine", "LRRecord", "LRState", "RobinVerdict", "g_value", "rho", "robin_check", "run",
    "ZElement", "ZRangeError", "ZStream", "delta", "z_value",
]
