"""Sieve-backed Chebyshev functions and executable checks of the LR-number bounds.

All three counting functions are step functions of ``floor(x)``:

* ``theta(x)  = sum_{p <= x} log p``
* ``psi(x)    = sum_{p^k <= x} log p``
* ``psi_Z(x)  = sum_{z in Z, z <= x} log z``  (repeated values counted twice)

Each is stored as a sorted breakpoint array plus an accurate prefix sum, so a
query is one ``searchsorted``.  The ``check_*`` functions return a
:class:`BoundReport`; reports over many instances are combined with
:meth:`BoundReport.merge`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from ._numeric import EPS, accurate_cumsum, ilog, iroot
from .constants import ConstantEstimate
from .lr_engine import LRState
from .primes import sieve
from .zstream import z_value

DEFAULT_LIMIT = 10 ** 7
DUSART_X0 = 3_594_641
MERTENS_SHIFT = 0.8666


class SieveRangeError(ValueError):
    """A query went past the sieve limit."""


class SieveTables:
    def __init__(self, limit: int = DEFAULT_LIMIT, primes: Optional[np.ndarray] = None):
        self.limit = int(limit)
        if primes is None:
            primes = sieve(self.limit)
        self.primes = primes[primes <= self.limit]
        logp = np.log(self.primes.astype(float))
        self._theta = accurate_cumsum(logp)

        powers, plogs, zs = [self.primes], [logp], [self.primes]
        for p, lp in zip(self.primes.tolist(), logp.tolist()):
            if p * p > self.limit:
                break
            pk, z = p * p, p + p * p
            while pk <= self.limit:
                powers.append(np.array([pk]))
                plogs.append(np.array([lp]))
                pk *= p
            k = 2
            while z <= self.limit:
                zs.append(np.array([z]))
                k += 1
                z += p ** k
        powers_arr = np.concatenate(powers)
        order = np.argsort(powers_arr, kind="stable")
        self._pp = powers_arr[order]
        self._psi = accurate_cumsum(np.concatenate(plogs)[order])

        z_arr = np.sort(np.concatenate(zs), kind="stable")
        self._z = z_arr
        self._psi_z = accurate_cumsum(np.log(z_arr.astype(float)))
        self._recip = accurate_cumsum(1.0 / self.primes.astype(float))

    def _floor(self, x) -> int:
        n = x if isinstance(x, (int, np.integer)) else math.floor(x)
        if n > self.limit:
            raise SieveRangeError(f"x={x} exceeds sieve limit {self.limit}")
        return int(n)

    def pi(self, x) -> int:
        return int(np.searchsorted(self.primes, self._floor(x), side="right"))

    def theta(self, x) -> float:
        return float(self._theta[self.pi(x)])

    def psi(self, x) -> float:
        return float(self._psi[np.searchsorted(self._pp, self._floor(x), side="right")])

    def psi_Z(self, x) -> float:
        return float(self._psi_z[np.searchsorted(self._z, self._floor(x), side="right")])

    def prime_recip_sum(self, x) -> float:
        """``sum_{p <= x} 1/p``."""
        return float(self._recip[self.pi(x)])


# ---------------------------------------------------------------------------
# y_k roots


@dataclass(frozen=True)
class YkValue:
    z: int
    k: int
    y: float
    lo: float
    hi: float

    @property
    def residual(self) -> float:
        return float(_poly(np.array([self.y]), np.array([self.k]))[0] - self.z)


def _poly(y: np.ndarray, ks: np.ndarray) -> np.ndarray:
    """``y + y^2 + ... + y^k`` for matching arrays of ``y`` and ``k``."""
    j = np.arange(1, int(ks.max()) + 1)
    terms = np.where(j[None, :] <= ks[:, None], y[:, None] ** j[None, :], 0.0)
    return terms.sum(axis=1)


def _brackets(z: int, ks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    hi = np.array([float(z) ** (1.0 / k) for k in ks.tolist()])
    return hi - 1.0, hi


def solve_y_all(z: int, ks, rtol: float = 1e-12) -> np.ndarray:
    """Positive roots of ``y + ... + y^k = z`` for each ``k`` in ``ks``, by bisection.

    The search starts from the bracket ``(z^(1/k) - 1, z^(1/k))``.
    """
    if z < 2:
        raise ValueError("z must be >= 2")
    ks = np.asarray(ks, dtype=np.int64)
    lo, hi = _brackets(z, ks)
    lo = np.maximum(lo, 0.0)
    for _ in range(200):
        if np.all(hi - lo <= rtol * hi):
            break
        mid = 0.5 * (lo + hi)
        below = _poly(mid, ks) < z
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def solve_y_k(z_m: int, k: int) -> YkValue:
    if k < 2:
        raise ValueError("k must be >= 2")
    ks = np.array([k])
    y = float(solve_y_all(z_m, ks)[0])
    lo, hi = _brackets(z_m, ks)
    return YkValue(int(z_m), k, y, float(lo[0]), float(hi[0]))


def threshold_counts(z: int, K: int, tables: SieveTables) -> list[int]:
    """``c[k]`` = number of primes ``p`` with ``z(p, k) <= z``, i.e. ``p <= y_k``, for k = 1..K.

    The float root only gives the starting index; the boundary prime is
    settled with exact integer arithmetic.
    """
    counts = [0, tables.pi(z)]
    if K >= 2:
        ys = solve_y_all(z, np.arange(2, K + 1))
        primes = tables.primes
        for k, y in zip(range(2, K + 1), ys.tolist()):
            c = int(np.searchsorted(primes, math.floor(y), side="right"))
            while c > 0 and z_value(int(primes[c - 1]), k) > z:
                c -= 1
            while c < len(primes) and z_value(int(primes[c]), k) <= z:
                c += 1
            counts.append(c)
    return counts


# ---------------------------------------------------------------------------
# reports


@dataclass
class BoundReport:
    theorem: str
    lo: Optional[int] = None
    hi: Optional[int] = None
    checked: int = 0
    worst_slack: float = math.inf
    witness: Optional[dict] = None
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, at: int, slack: float, ok: bool, **detail) -> None:
        self.checked += 1
        self.lo = at if self.lo is None else min(self.lo, at)
        self.hi = at if self.hi is None else max(self.hi, at)
        info = {"at": at, "slack": slack, **detail}
        if not ok:
            self.failures.append(info)
        if slack < self.worst_slack or self.witness is None:
            self.worst_slack = min(self.worst_slack, slack)
            self.witness = info

    def merge(self, other: "BoundReport") -> "BoundReport":
        if other.checked == 0:
            return self
        self.checked += other.checked
        self.lo = other.lo if self.lo is None else min(self.lo, other.lo)
        self.hi = other.hi if self.hi is None else max(self.hi, other.hi)
        self.failures.extend(other.failures)
        if other.worst_slack < self.worst_slack:
            self.worst_slack = other.worst_slack
            self.witness = other.witness
        return self

    def to_json(self, max_failures: int = 20) -> dict:
        witness = self.failures[0] if self.failures else self.witness
        return {
            "theorem": self.theorem,
            "range": [self.lo, self.hi],
            "pass": self.passed,
            "worst_slack": self.worst_slack,
            "witness": witness,
            "checked": self.checked,
            "failures": self.failures[:max_failures],
            "failure_count": len(self.failures),
        }


def _tol(*values: float) -> float:
    # rounding allowance for comparing sums of logs built in different orders
    return 64 * EPS * sum(abs(v) for v in values) + 1e-300


# ---------------------------------------------------------------------------
# checkers


def check_lemma1(z: int, m: Optional[int] = None) -> BoundReport:
    """``z^(1/k) - 1 < y_k < z^(1/k)`` for ``2 <= k <= floor(log2 z)``.

    The bracket ends are checked directly through the sign of the polynomial,
    and the solved root must land strictly inside.
    """
    rep = BoundReport("lemma1")
    K = ilog(z, 2)
    if K < 2:
        return rep
    ks = np.arange(2, K + 1)
    lo, hi = _brackets(z, ks)
    f_lo = _poly(np.maximum(lo, 0.0), ks) - z
    f_hi = _poly(hi, ks) - z
    ys = solve_y_all(z, ks)
    res = _poly(ys, ks) - z
    for i, k in enumerate(ks.tolist()):
        y = float(ys[i])
        slack = min(y - lo[i], hi[i] - y)
        ok = (f_lo[i] < 0 < f_hi[i] and lo[i] < y < hi[i] and abs(res[i]) <= 1e-9 * z)
        rep.record(m if m is not None else z, float(slack), bool(ok), z=int(z), k=k, y=y)
    return rep


def _explicit_limit(state: LRState) -> int:
    return iroot(state.z_m, 2) + 1


def check_lemma2(state: LRState, tables: SieveTables) -> BoundReport:
    """``floor(log z/log p) - 1 <= k_p <= floor(log z/log p)`` for every prime ``p < z_m``.

    Primes up to ``sqrt(z_m)`` are checked one by one.  Above that the floor
    is 1, so the only possible violation is an exponent above 1, found by
    scanning the exponent map.
    """
    rep = BoundReport("lemma2")
    z, m, exps = state.z_m, state.m, state.exponents
    cut = _explicit_limit(state)
    worst, ok_all, bad = math.inf, True, None
    for p in tables.primes[: tables.pi(min(cut, z - 1))].tolist():
        e = ilog(z, p)
        kp = exps.get(p, 0)
        slack = min(kp - (e - 1), e - kp)
        if slack < 0 and ok_all:
            ok_all, bad = False, {"p": p, "k_p": kp, "floor": e}
        worst = min(worst, slack)
    for p, kp in exps.items():
        if cut < p < z and kp > 1:
            slack = 1 - kp
            worst = min(worst, slack)
            if ok_all:
                ok_all, bad = False, {"p": p, "k_p": kp, "floor": 1}
    if worst == math.inf:
        worst = 0
    rep.record(m, float(worst), ok_all, z=z, **({"violation": bad} if bad else {}))
    return rep


def expected_exponents(state: LRState, tables: SieveTables) -> tuple[list[int], list[int]]:
    """Threshold prediction of the exponents of the primes ``<= y_2``.

    ``k_p = k`` for ``y_{k+1} < p <= y_k``, then lowered by one for a smaller
    prime that ties with the current element and so comes after it.
    Returns ``(counts, predicted)`` where ``predicted[i]`` belongs to ``primes[i]``.
    """
    z, q_m = state.z_m, state.last.q
    K = ilog(z, 2)
    counts = threshold_counts(z, K, tables)
    n_small = counts[2] if K >= 2 else 0
    predicted = []
    for i in range(n_small):
        p = int(tables.primes[i])
        kp = sum(1 for k in range(1, K + 1) if i < counts[k])
        if p < q_m and z_value(p, kp) == z:
            kp -= 1
        predicted.append(kp)
    return counts, predicted


def check_theorem2(state: LRState, tables: SieveTables) -> BoundReport:
    """Every exponent of ``n_m`` equals the ``y_k``-threshold prediction.

    Primes above ``y_2`` are predicted to have exponent 1 up to ``z_m`` and 0
    beyond; a tie can only lower a prime below the current ``q_m``, and every
    prime above ``y_2`` exceeds it (or is ``q_m`` itself), so no adjustment
    applies there.
    """
    rep = BoundReport("theorem2")
    z, m, exps = state.z_m, state.m, state.exponents
    counts, predicted = expected_exponents(state, tables)
    n_small = len(predicted)
    mismatch = None
    for i, kp in enumerate(predicted):
        p = int(tables.primes[i])
        if exps.get(p, 0) != kp:
            mismatch = {"p": p, "k_p": exps.get(p, 0), "predicted": kp}
            break
    if mismatch is None:
        p_small = int(tables.primes[n_small - 1]) if n_small else 1
        bulk = 0
        for p, kp in exps.items():
            if p > p_small:
                if p > z or kp != 1:
                    mismatch = {"p": p, "k_p": kp, "predicted": 1 if p <= z else 0}
                    break
                bulk += 1
        if mismatch is None and bulk != counts[1] - n_small:
            mismatch = {"bulk_count": bulk, "predicted_bulk": counts[1] - n_small}
    ok = mismatch is None
    rep.record(m, 0.0 if ok else -1.0, ok, z=z, **({"mismatch": mismatch} if mismatch else {}))
    return rep


def check_theorem4(state: LRState, w1: ConstantEstimate) -> BoundReport:
    """``S - W1 < log rho(n_m) < S - W1 + 1/(2 z_m)`` with ``S = sum 1/z_i``.

    W1 is only known up to its tail bound, so the lower side uses the
    interval's smallest value and the upper side its largest.
    """
    rep = BoundReport("theorem4")
    s_recip = state.sum_recip_z.value
    log_rho = state.sum_delta.value
    z = state.z_m
    lower = s_recip - w1.lower
    upper = s_recip - w1.upper + 1.0 / (2 * z)
    tol = state.sum_recip_z.error_bound() + state.sum_delta.error_bound() + _tol(s_recip, w1.value)
    slack = min(log_rho - lower, upper - log_rho) - tol
    detail = {"z": z, "log_rho": log_rho, "lower": lower, "upper": upper}
    if slack <= 0:
        # the sandwich may still hold at W1's midpoint; if so the W1 interval is too wide to decide
        mid = min(log_rho - (s_recip - w1.value), s_recip - w1.value + 1.0 / (2 * z) - log_rho) - tol
        detail["indeterminate"] = mid > 0
    rep.record(state.m, float(slack), slack > 0, **detail)
    return rep


def theorem6_sides(z: int, tables: SieveTables) -> dict:
    K = ilog(z, 2)
    base = tables.theta(z) + math.fsum(k * tables.theta(iroot(z, k)) for k in range(2, K + 1))
    lz = math.log(z)
    return {
        "psi_Z": tables.psi_Z(z),
        "lower": base - lz * lz / math.log(2),
        "upper": base + 2 * lz * math.log(lz) / math.log(2),
        # report-only: distance from the asymptotic main term theta + 2 sqrt(z)
        "residual_sqrt": tables.psi_Z(z) - tables.theta(z) - 2 * math.sqrt(z),
    }


def check_theorem6(z: int, tables: SieveTables, m: Optional[int] = None) -> BoundReport:
    """Both sides of the ``psi_Z`` sandwich around ``theta(z) + sum k theta(z^(1/k))``."""
    rep = BoundReport("theorem6")
    s = theorem6_sides(z, tables)
    tol = _tol(s["psi_Z"], s["upper"])
    slack = min(s["psi_Z"] - s["lower"] + tol, s["upper"] - s["psi_Z"] - tol)
    ok = s["lower"] <= s["psi_Z"] + tol and s["psi_Z"] < s["upper"] - tol
    rep.record(m if m is not None else z, float(slack), bool(ok), z=int(z), **s)
    return rep


def check_theorem7(state: LRState, tables: SieveTables) -> BoundReport:
    """``psi(z_m) - log z_m log log z_m < log n_m <= psi(z_m)``."""
    rep = BoundReport("theorem7")
    z = state.z_m
    log_n = state.sum_log_q.value
    psi = tables.psi(z)
    lz = math.log(z)
    lower = psi - lz * math.log(lz)
    tol = state.sum_log_q.error_bound() + _tol(psi, log_n)
    lower_ok = bool(lower < log_n - tol)
    upper_ok = bool(log_n <= psi + tol)
    slack = min(log_n - lower, psi - log_n + tol)
    rep.record(state.m, float(slack), lower_ok and upper_ok, z=z, log_n=log_n,
               psi=psi, lower=lower, lower_ok=lower_ok, upper_ok=upper_ok)
    return rep


def check_dusart(tables: SieveTables, lo: int = DUSART_X0, hi: Optional[int] = None,
                 points: int = 10_000, exhaustive: bool = False) -> BoundReport:
    """``|theta(x) - x| < 0.2 x / log^2 x`` on an integer grid in ``[lo, hi]``.

    With ``exhaustive`` the check also runs just below and at every prime in
    the range, which is where ``|theta(x) - x|`` peaks.
    """
    hi = tables.limit if hi is None else hi
    if lo < DUSART_X0:
        raise ValueError(f"the inequality is only claimed for x >= {DUSART_X0}")
    if hi > tables.limit:
        raise SieveRangeError(f"hi={hi} exceeds sieve limit {tables.limit}")
    xs = np.unique(np.linspace(lo, hi, points).round().astype(np.int64))
    if exhaustive:
        ps = tables.primes[(tables.primes >= lo) & (tables.primes <= hi)]
        xs = np.unique(np.concatenate([xs, ps, ps - 1]))
        xs = xs[xs >= lo]
    idx = np.searchsorted(tables.primes, xs, side="right")
    th = tables._theta[idx]
    x = xs.astype(float)
    bound = 0.2 * x / np.log(x) ** 2
    slack = bound - np.abs(th - x)
    rep = BoundReport("dusart")
    bad = np.flatnonzero(slack <= 0)
    for i in bad[:100].tolist():
        rep.failures.append({"at": int(xs[i]), "slack": float(slack[i]), "theta": float(th[i])})
    j = int(np.argmin(slack))
    rep.checked = len(xs)
    rep.lo, rep.hi = int(xs[0]), int(xs[-1])
    rep.worst_slack = float(slack[j])
    rep.witness = {"at": int(xs[j]), "slack": float(slack[j]), "theta": float(th[j]), "bound": float(bound[j])}
    return rep


def check_mertens_shift(tables: SieveTables, shift: float = MERTENS_SHIFT) -> BoundReport:
    """``sum_{q <= y} 1/q < log log y + shift`` for all real ``y`` in ``[2, limit]``.

    The left side is constant between primes while the right side grows, so
    checking at each prime covers the whole interval.
    """
    p = tables.primes.astype(float)
    lhs = tables._recip[1:]
    slack = np.log(np.log(p)) + shift - lhs
    rep = BoundReport("mertens_shift")
    for i in np.flatnonzero(slack <= 0)[:100].tolist():
        rep.failures.append({"at": int(p[i]), "slack": float(slack[i])})
    j = int(np.argmin(slack))
    rep.checked = len(p)
    rep.lo, rep.hi = 2, tables.limit
    rep.worst_slack = float(slack[j])
    rep.witness = {"at": int(p[j]), "slack": float(slack[j])}
    return rep


def psi_Z_by_thresholds(x: int, tables: SieveTables) -> float:
    """``theta(x) + sum_{k >= 2} sum_{q <= y_k(x)} log z(q, k)``, independent of the Z table."""
    K = ilog(x, 2)
    counts = threshold_counts(x, K, tables)
    parts = [tables.theta(x)]
    for k in range(2, K + 1):
        for q in tables.primes[: counts[k]].tolist():
            parts.append(math.log(z_value(q, k)))
    return math.fsum(parts)


# ---------------------------------------------------------------------------
# suites

SUITE_IDS = ("lemma1", "lemma2", "theorem2", "theorem4", "theorem6", "theorem7")


def run_suite(
    theorems: Iterable[str],
    m_max: int,
    tables: SieveTables,
    w1: Optional[ConstantEstimate] = None,
    sample_m: Iterable[int] = (),
) -> dict[str, BoundReport]:
    """Walk the LR sequence to ``max(m_max, samples)`` and run the selected checks.

    Every ``m <= m_max`` is checked; the extra ``sample_m`` values (beyond
    ``m_max``) are checked too but only by the cheap per-state checks
    (Lemma 1, Theorems 4, 6 and 7).
    """
    from .lr_engine import Engine

    theorems = [t for t in theorems]
    unknown = set(theorems) - set(SUITE_IDS)
    if unknown:
        raise ValueError(f"unknown check ids: {sorted(unknown)}")
    if "theorem4" in theorems and w1 is None:
        raise ValueError("theorem4 needs a W1 estimate")
    samples = {m for m in sample_m if m > m_max}
    top = max([m_max, *samples])
    reports = {t: BoundReport(t) for t in theorems}
    engine = Engine()
    for state in engine.states(top):
        m = state.m
        full = m <= m_max
        if not full and m not in samples:
            continue
        z = state.z_m
        if "theorem7" in reports:
            reports["theorem7"].merge(check_theorem7(state, tables))
        if not full:
            continue
        if "lemma1" in reports:
            reports["lemma1"].merge(check_lemma1(z, m))
        if "lemma2" in reports:
            reports["lemma2"].merge(check_lemma2(state, tables))
        if "theorem2" in reports:
            reports["theorem2"].merge(check_theorem2(state, tables))
        if "theorem4" in reports:
            reports["theorem4"].merge(check_theorem4(state, w1))
        if "theorem6" in reports and m >= 2:
            reports["theorem6"].merge(check_theorem6(z, tables, m))
    return reports
