"""The constants W1, W2 and the Meissel-Mertens constant M, each with a truncation tail bound.

W1 = sum over Z of (1/z - log(1 + 1/z))
M  = gamma + sum over primes of (log(1 - 1/p) + 1/p)
W2 = M + sum over Z with k >= 2 of 1/z

and the identity W2 - W1 = gamma is checked on the truncated estimates.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ._numeric import EPS
from .primes import sieve

EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class ConstantEstimate:
    name: str
    value: float
    tail_bound: float
    terms_used: int

    @property
    def lower(self) -> float:
        return self.value - self.tail_bound

    @property
    def upper(self) -> float:
        return self.value + self.tail_bound

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper

    def to_json(self) -> dict:
        return asdict(self)


def _prime_power_chain_z(max_z: int, primes: np.ndarray) -> list[int]:
    """Values ``z(q, k) <= max_z`` with ``k >= 2``; these are never prime (q divides z)."""
    out = []
    for q in primes:
        q = int(q)
        z = q + q * q
        if z > max_z:
            break
        k = 2
        while z <= max_z:
            out.append(z)
            k += 1
            z += q ** k
    return out


def _x_minus_log1p(x: np.ndarray) -> np.ndarray:
    # x - log1p(x) cancels for small x; the 4-term series is exact to ~x^6/6 there.
    series = x * x * (0.5 - x * (1.0 / 3.0 - x * (0.25 - x * 0.2)))
    return np.where(x < 1e-4, series, x - np.log1p(x))


def compute_w1(max_z: int, primes: np.ndarray | None = None) -> ConstantEstimate:
    """Partial sum of ``1/z - log(1+1/z)`` over ``z <= max_z``.

    Each term is below ``1/(2 z^2)``, so the neglected tail is below
    ``(1/2) * integral_{max_z}^inf dt/t^2 = 1/(2 max_z)``.
    """
    max_z = int(max_z)
    if max_z < 30:
        raise ValueError("max_z must be >= 30")
    if primes is None:
        primes = sieve(max_z)
    primes = primes[primes <= max_z]
    chain = np.array(_prime_power_chain_z(max_z, primes), dtype=float)
    terms = np.concatenate([_x_minus_log1p(1.0 / primes.astype(float)),
                            _x_minus_log1p(1.0 / chain)])
    value = math.fsum(np.sort(terms))
    return ConstantEstimate("W1", value, 1.0 / (2 * max_z), len(terms))


def compute_m_constant(max_p: int, primes: np.ndarray | None = None) -> ConstantEstimate:
    """gamma plus the prime sum truncated at ``max_p``.

    Each term ``log(1-1/p) + 1/p`` lies in ``(-1/p^2, 0)``; the tail is
    below ``sum_{n > x} 1/n^2 < 1/x``.
    """
    max_p = int(max_p)
    if max_p < 100:
        raise ValueError("max_p must be >= 100")
    if primes is None:
        primes = sieve(max_p)
    primes = primes[primes <= max_p]
    x = 1.0 / primes.astype(float)
    # log1p(-x) + x == -(x^2/2 + x^3/3 + ...); series for small x avoids cancellation
    series = -x * x * (0.5 + x * (1.0 / 3.0 + x * (0.25 + x * 0.2)))
    terms = np.where(x < 1e-4, series, np.log1p(-x) + x)
    value = math.fsum([EULER_GAMMA, *np.sort(terms)])
    return ConstantEstimate("M", value, 1.0 / max_p, len(terms))


def compute_w2(max_z: int, primes: np.ndarray | None = None) -> ConstantEstimate:
    """``M + sum 1/z`` over the ``k >= 2`` elements with ``z <= max_z``.

    Tail of the chain sum: every such ``z`` exceeds ``q^2``; for ``q <= sqrt(x)``
    the omitted part of each geometric chain is under ``2/x``, and for
    ``q > sqrt(x)`` the whole chain is under ``2/q^2``.  Together that is
    below ``3/sqrt(x)``.  M's own tail is added on top.
    """
    max_z = int(max_z)
    if max_z < 900:
        raise ValueError("max_z must be >= 900")
    if primes is None:
        primes = sieve(max_z)
    m_est = compute_m_constant(max_z, primes)
    chain = np.sort(np.array(_prime_power_chain_z(max_z, primes), dtype=float))
    value = math.fsum([m_est.value, *(1.0 / chain)])
    tail = m_est.tail_bound + 3.0 / math.sqrt(max_z)
    return ConstantEstimate("W2", value, tail, m_est.terms_used + len(chain))


@dataclass(frozen=True)
class Theorem3Report:
    difference: float
    residual: float
    bound: float
    passed: bool

    def to_json(self) -> dict:
        return {"theorem": "3", **asdict(self), "pass": self.passed}


def verify_theorem3(w1: ConstantEstimate, w2: ConstantEstimate) -> Theorem3Report:
    """Check ``W2 - W1 == gamma`` up to the combined tail bounds."""
    diff = w2.value - w1.value
    residual = abs(diff - EULER_GAMMA)
    bound = w1.tail_bound + w2.tail_bound
    return Theorem3Report(float(diff), float(residual), float(bound), bool(residual <= bound + 10 * EPS))
