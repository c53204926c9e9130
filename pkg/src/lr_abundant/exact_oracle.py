"""Exact rational ground truth for ``sigma(n)/n`` and brute-force maximization over S_m.

S_m is the set of integers whose prime exponents sum to ``m``.  The search
assigns exponents to the first ``m`` primes only: a prime outside them can be
swapped for an unused smaller one, which strictly raises ``sigma(n)/n``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Mapping

from .primes import sieve

#: Largest m for which the full weak-composition enumeration is allowed.
MAX_ENUMERATION_M = 12

ExponentMap = Mapping[int, int]


def _check_exponents(e: ExponentMap) -> None:
    for p, a in e.items():
        if a < 1:
            raise ValueError(f"exponent of {p} must be >= 1, got {a}")


def sigma_prime_power(p: int, a: int) -> int:
    """``1 + p + ... + p^a``."""
    return (p ** (a + 1) - 1) // (p - 1)


def materialize(e: ExponentMap) -> int:
    """The integer ``prod p^a``; the empty map gives 1."""
    _check_exponents(e)
    n = 1
    for p, a in e.items():
        n *= p ** a
    return n


def sigma_over_n_exact(e: ExponentMap) -> Fraction:
    """``sigma(n)/n`` as a reduced fraction, via multiplicativity of sigma."""
    if not e:
        raise ValueError("exponent map must be non-empty")
    _check_exponents(e)
    num, den = 1, 1
    for p, a in e.items():
        num *= sigma_prime_power(p, a)
        den *= p ** a
    return Fraction(num, den)


def render(e: ExponentMap, max_digits: int = 40) -> str:
    """Factorization string such as ``2^3·3^2·5·7``, followed by the decimal value when short."""
    if not e:
        return "1"
    parts = [str(p) if a == 1 else f"{p}^{a}" for p, a in sorted(e.items())]
    text = "·".join(parts)
    n = materialize(e)
    if n < 10 ** max_digits:
        text += f" = {n}"
    return text


@lru_cache(maxsize=None)
def _enumerate(m: int) -> tuple[tuple[tuple[tuple[int, int], ...], ...], Fraction, int]:
    """All maximizers of ``sigma(n)/n`` over S_m, the max, and the candidate count."""
    if not 1 <= m <= MAX_ENUMERATION_M:
        raise ValueError(f"m must be in [1, {MAX_ENUMERATION_M}], got {m}")
    primes = [int(p) for p in sieve(64)[:m]]
    sig = [[sigma_prime_power(p, a) for a in range(m + 1)] for p in primes]
    pw = [[p ** a for a in range(m + 1)] for p in primes]

    best_num, best_den = 0, 1
    best: list[tuple[int, ...]] = []
    count = 0
    exps = [0] * m

    # num/den is the running (unreduced) sigma(n)/n with den == n exactly
    def walk(i: int, left: int, num: int, den: int) -> None:
        nonlocal best_num, best_den, best, count
        if i == m - 1:
            exps[i] = left
            num *= sig[i][left]
            den *= pw[i][left]
            count += 1
            lhs, rhs = num * best_den, best_num * den
            if lhs > rhs:
                best_num, best_den = num, den
                best = [tuple(exps)]
            elif lhs == rhs:
                best.append(tuple(exps))
            return
        for a in range(left + 1):
            exps[i] = a
            walk(i + 1, left - a, num * sig[i][a], den * pw[i][a])

    walk(0, m, 1, 1)
    maps = []
    for vec in best:
        maps.append(tuple((p, a) for p, a in zip(primes, vec) if a))
    # smallest n first
    maps.sort(key=lambda items: materialize(dict(items)))
    return tuple(maps), Fraction(best_num, best_den), count


def brute_force_max_rho(m: int) -> tuple[dict[int, int], Fraction]:
    """A maximizer of ``sigma(n)/n`` over S_m with its exact value; ties go to the smallest n."""
    maps, value, _ = _enumerate(m)
    return dict(maps[0]), value


def maximizers(m: int) -> list[dict[int, int]]:
    """Every maximizer over S_m, smallest n first."""
    maps, _, _ = _enumerate(m)
    return [dict(items) for items in maps]


def candidate_count(m: int) -> int:
    """Number of exponent vectors examined; equals ``C(2m-1, m-1)``."""
    count = _enumerate(m)[2]
    assert count == comb(2 * m - 1, m - 1)
    return count
