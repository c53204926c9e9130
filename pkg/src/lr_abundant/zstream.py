"""The sorted stream of prime-power partial sums ``z = q + q^2 + ... + q^k``.

Elements come out ordered by increasing ``z``; equal values are broken by
emitting the larger prime first (the only known coincidence is
``5 + 25 == 2 + 4 + 8 + 16 == 30``).  Primes are seeded lazily from an
incremental sieve, so the stream has no fixed horizon.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterator

from .primes import PrimeSource

#: Width of the exact integer used for ``z``; values at or above ``2**Z_BITS`` are errors.
Z_BITS = 128


class ZRangeError(OverflowError):
    """A chain value ``z(q, k)`` does not fit the configured integer width."""

    def __init__(self, q: int, k: int, bits: int = Z_BITS):
        super().__init__(f"z({q}, {k}) does not fit in {bits} bits")
        self.q = q
        self.k = k
        self.bits = bits


def z_value(q: int, k: int, bits: int = Z_BITS) -> int:
    """``q + q**2 + ... + q**k`` exactly; raises :class:`ZRangeError` past ``bits``."""
    if k < 1:
        raise ValueError(f"exponent must be >= 1, got {k}")
    if q < 2:
        raise ValueError(f"q must be a prime >= 2, got {q}")
    z = q * (q ** k - 1) // (q - 1)
    if z.bit_length() > bits:
        raise ZRangeError(q, k, bits)
    return z


def delta(q: int, k: int) -> float:
    """``log(1 + 1/z(q, k))``, the gain in ``log rho`` from raising q's exponent to k."""
    return math.log1p(1.0 / z_value(q, k))


@dataclass(frozen=True, slots=True)
class ZElement:
    q: int
    k: int
    z: int
    ordinal: int = 0

    @property
    def delta(self) -> float:
        return math.log1p(1.0 / self.z)

    def sort_key(self) -> tuple[int, int]:
        return (self.z, -self.q)


class ZStream:
    """Iterator over Z in order ``(z ascending, q descending)``.

    The heap holds exactly one pending ``(z, -q, k)`` entry for every prime
    below ``next_prime``.  Before each pop every prime ``<=`` the current
    minimum is seeded, which is enough because ``z(p, 1) == p``.
    """

    def __init__(self, bits: int = Z_BITS):
        self.bits = bits
        self._heap: list[tuple[int, int, int]] = []
        self._primes = PrimeSource(2)
        self.next_prime = next(self._primes)
        self.emitted = 0

    def _seed(self) -> None:
        heap = self._heap
        while not heap or self.next_prime <= heap[0][0]:
            p = self.next_prime
            z = z_value(p, 1, self.bits)
            heapq.heappush(heap, (z, -p, 1))
            self.next_prime = next(self._primes)

    def peek(self) -> ZElement:
        self._seed()
        z, negq, k = self._heap[0]
        return ZElement(-negq, k, z, self.emitted + 1)

    def __iter__(self) -> Iterator[ZElement]:
        return self

    def __next__(self) -> ZElement:
        self._seed()
        heap = self._heap
        z, negq, k = heap[0]
        q = -negq
        # compute the successor before mutating, so an overflow leaves the stream intact
        succ = z_value(q, k + 1, self.bits)
        heapq.heapreplace(heap, (succ, negq, k + 1))
        self.emitted += 1
        return ZElement(q, k, z, self.emitted)

    def take(self, n: int) -> list[ZElement]:
        return [next(self) for _ in range(n)]

    # -- persistence -------------------------------------------------------

    def to_state(self) -> dict:
        pending = sorted((-negq, k, z) for z, negq, k in self._heap)
        return {
            "pending": [[q, k, str(z)] for q, k, z in pending],
            "next_prime": self.next_prime,
            "emitted": self.emitted,
            "bits": self.bits,
        }

    @classmethod
    def from_state(cls, state: dict) -> "ZStream":
        self = cls.__new__(cls)
        self.bits = int(state.get("bits", Z_BITS))
        self._heap = [(int(z), -int(q), int(k)) for q, k, z in state["pending"]]
        heapq.heapify(self._heap)
        self.next_prime = int(state["next_prime"])
        self._primes = PrimeSource(self.next_prime + 1)
        self.emitted = int(state["emitted"])
        for z, negq, k in self._heap:
            if z != z_value(-negq, k, self.bits):
                raise ValueError(f"inconsistent pending entry q={-negq} k={k} z={z}")
        return self


def enumerate_z(limit: int, primes) -> list[tuple[int, int, int]]:
    """Every ``(q, k, z)`` with ``z <= limit`` by direct double loop, in stream order.

    ``primes`` must cover every prime ``<= limit``.
    """
    out = []
    for q in primes:
        q = int(q)
        if q > limit:
            break
        k, z = 1, q
        while z <= limit:
            out.append((q, k, z))
            k += 1
            z += q ** k
    out.sort(key=lambda t: (t[2], -t[0]))
    return out
