"""Small numeric helpers: compensated summation, integer roots, accurate prefix sums."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EPS = float(np.finfo(float).eps)


@dataclass
class CompensatedSum:
    """Neumaier running sum.

    ``total`` is the rounded running sum and ``comp`` the accumulated
    low-order correction; ``value`` combines them.  ``count`` and ``abs_sum``
    feed the error bound reported by :meth:`error_bound`.
    """

    total: float = 0.0
    comp: float = 0.0
    count: int = 0
    abs_sum: float = 0.0

    def add(self, x: float) -> None:
        t = self.total + x
        if abs(self.total) >= abs(x):
            self.comp += (self.total - t) + x
        else:
            self.comp += (x - t) + self.total
        self.total = t
        self.count += 1
        self.abs_sum += abs(x)

    @property
    def value(self) -> float:
        return self.total + self.comp

    def error_bound(self) -> float:
        # Loose worst case: count * eps per accumulated magnitude, plus the
        # per-term evaluation error of the addends themselves.
        return (self.count + 2) * EPS * self.abs_sum

    def to_list(self) -> list:
        return [self.total, self.comp, self.count, self.abs_sum]

    @classmethod
    def from_list(cls, data) -> "CompensatedSum":
        total, comp, count, abs_sum = data
        return cls(float(total), float(comp), int(count), float(abs_sum))


def iroot(x: int, k: int) -> int:
    """Largest integer ``r`` with ``r**k <= x`` (x >= 0, k >= 1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x < 2 or k == 1:
        return x
    if k == 2:
        return math.isqrt(x)
    if x.bit_length() < 1000:
        r = int(round(x ** (1.0 / k)))
    else:
        r = 1 << (x.bit_length() // k)
    # float guess is within a few units; settle exactly
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def ilog(x: int, base: int) -> int:
    """Largest ``e`` with ``base**e <= x``, i.e. floor(log x / log base) computed exactly."""
    if x < 1 or base < 2:
        raise ValueError("need x >= 1 and base >= 2")
    e, p = 0, base
    while p <= x:
        p *= base
        e += 1
    return e


def accurate_cumsum(values: np.ndarray, block: int = 1024) -> np.ndarray:
    """Prefix sums with a leading zero, accurate to a few ulps of the total.

    Block totals are carried with ``math.fsum``; only the within-block
    partial sums use plain float addition.
    """
    values = np.asarray(values, dtype=float)
    n = len(values)
    out = np.empty(n + 1)
    out[0] = 0.0
    partials: list[float] = []
    base = 0.0
    for start in range(0, n, block):
        blk = values[start:start + block]
        out[start + 1:start + 1 + len(blk)] = base + np.cumsum(blk)
        partials.append(math.fsum(blk))
        base = math.fsum(partials)
        out[start + len(blk)] = base
    return out
