"""Prime sources: a one-shot numpy sieve and an unbounded segmented generator."""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np


def sieve(limit: int) -> np.ndarray:
    """All primes ``<= limit`` as an int64 array."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    is_prime[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if is_prime[p]:
            is_prime[p * p::2 * p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def segment_primes(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primes in ``[lo, hi)``; ``base`` must hold every prime ``<= sqrt(hi - 1)``."""
    lo = max(lo, 2)
    if hi <= lo:
        return np.array([], dtype=np.int64)
    mask = np.ones(hi - lo, dtype=bool)
    for p in base:
        p = int(p)
        if p * p >= hi:
            break
        start = max(p * p, ((lo + p - 1) // p) * p)
        mask[start - lo::p] = False
    return np.flatnonzero(mask).astype(np.int64) + lo


class PrimeSource:
    """Incremental segmented sieve yielding primes ``>= start`` in order, without a horizon.

    >>> src = PrimeSource(10)
    >>> [next(src) for _ in range(4)]
    [11, 13, 17, 19]
    """

    def __init__(self, start: int = 2, segment: int = 1 << 15, max_segment: int = 1 << 20):
        self._lo = max(int(start), 2)
        self._segment = segment
        self._max_segment = max_segment
        self._base = np.array([], dtype=np.int64)
        self._base_limit = 1
        self._buf: list[int] = []
        self._pos = 0

    def _refill(self) -> None:
        while True:
            hi = self._lo + self._segment
            need = math.isqrt(hi - 1)
            if need > self._base_limit:
                self._base_limit = max(need, 2 * self._base_limit)
                self._base = sieve(self._base_limit)
            chunk = segment_primes(self._lo, hi, self._base)
            self._lo = hi
            self._segment = min(2 * self._segment, self._max_segment)
            if len(chunk):
                self._buf = chunk.tolist()
                self._pos = 0
                return

    def __iter__(self) -> Iterator[int]:
        return self

    def __next__(self) -> int:
        if self._pos >= len(self._buf):
            self._refill()
        p = self._buf[self._pos]
        self._pos += 1
        return p


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True
