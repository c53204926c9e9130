"""Incremental construction of the LR numbers ``n_m`` and their Robin verdicts.

``n_m`` is never materialized on the hot path: the engine keeps the prime
exponent map and three compensated log-domain accumulators

* ``sum_delta``   = sum of ``log(1 + 1/z_i)`` = ``log rho(n_m)``
* ``sum_log_q``   = sum of ``log q_i``         = ``log n_m``
* ``sum_recip_z`` = sum of ``1/z_i``
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from ._numeric import EPS, CompensatedSum
from .constants import EULER_GAMMA
from .zstream import ZElement, ZStream

EXP_GAMMA = math.exp(EULER_GAMMA)
ROBIN_THRESHOLD = 5040

HOLDS = "holds"
FAILS = "fails"
BELOW_THRESHOLD = "below_threshold"

CSV_FIELDS = ("m", "q", "k", "z", "delta", "rho", "log_n", "G", "verdict")


class ContractError(ValueError):
    """An element was fed to the engine out of stream order."""


@dataclass
class LRState:
    m: int = 0
    exponents: dict[int, int] = field(default_factory=dict)
    last: Optional[ZElement] = None
    sum_delta: CompensatedSum = field(default_factory=CompensatedSum)
    sum_log_q: CompensatedSum = field(default_factory=CompensatedSum)
    sum_recip_z: CompensatedSum = field(default_factory=CompensatedSum)

    def extend(self, e: ZElement) -> "LRState":
        """Consume the next stream element in place and return ``self``."""
        have = self.exponents.get(e.q, 0)
        if e.k != have + 1:
            raise ContractError(f"element (q={e.q}, k={e.k}) does not follow exponent {have}")
        if e.ordinal and e.ordinal != self.m + 1:
            raise ContractError(f"element ordinal {e.ordinal} does not follow m={self.m}")
        if self.last is not None and (e.z, -e.q) < (self.last.z, -self.last.q):
            raise ContractError(f"element z={e.z} precedes previous z={self.last.z}")
        self.exponents[e.q] = e.k
        self.m += 1
        self.last = e
        self.sum_delta.add(math.log1p(1.0 / e.z))
        self.sum_log_q.add(math.log(e.q))
        self.sum_recip_z.add(1.0 / e.z)
        return self

    def snapshot(self) -> "LRState":
        return copy.deepcopy(self)

    @property
    def log_rho(self) -> float:
        return self.sum_delta.value

    @property
    def log_n(self) -> float:
        return self.sum_log_q.value

    @property
    def z_m(self) -> int:
        if self.last is None:
            raise ValueError("empty state has no z_m")
        return self.last.z

    def to_dict(self) -> dict:
        last = self.last
        return {
            "m": self.m,
            "exponents": sorted([p, k] for p, k in self.exponents.items()),
            "last": None if last is None else [last.q, last.k, str(last.z), last.ordinal],
            "sum_delta": self.sum_delta.to_list(),
            "sum_log_q": self.sum_log_q.to_list(),
            "sum_recip_z": self.sum_recip_z.to_list(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LRState":
        last = d.get("last")
        state = cls(
            m=int(d["m"]),
            exponents={int(p): int(k) for p, k in d["exponents"]},
            last=None if last is None else ZElement(int(last[0]), int(last[1]), int(last[2]), int(last[3])),
            sum_delta=CompensatedSum.from_list(d["sum_delta"]),
            sum_log_q=CompensatedSum.from_list(d["sum_log_q"]),
            sum_recip_z=CompensatedSum.from_list(d["sum_recip_z"]),
        )
        if sum(state.exponents.values()) != state.m:
            raise ValueError("exponent sum does not match m")
        return state


def extend(state: LRState, e: ZElement) -> LRState:
    """Functional form of :meth:`LRState.extend`: returns a new state."""
    return state.snapshot().extend(e)


def rho(state: LRState) -> float:
    if state.m < 1:
        raise ValueError("rho needs m >= 1")
    return math.exp(state.sum_delta.value)


def g_value(state: LRState) -> float:
    """``rho(n) / log log n``; negative for ``n = 2`` where ``log n < 1``."""
    if state.m < 1:
        raise ValueError("G needs m >= 1")
    loglog = math.log(state.sum_log_q.value)
    if abs(loglog) < 64 * EPS:
        raise ZeroDivisionError("log log n is numerically zero")
    return math.exp(state.sum_delta.value) / loglog


def exceeds_threshold(state: LRState) -> bool:
    """``n_m > 5040``, decided on exact integers whenever the log is close."""
    if state.sum_log_q.value > math.log(ROBIN_THRESHOLD) + 1e-6:
        return True
    n = 1
    for p, k in state.exponents.items():
        n *= p ** k
    return n > ROBIN_THRESHOLD


@dataclass(frozen=True)
class RobinVerdict:
    status: str
    margin: Optional[float] = None
    error_bound: float = 0.0
    indeterminate: bool = False

    @property
    def holds(self) -> bool:
        return self.status == HOLDS


def robin_check(state: LRState) -> RobinVerdict:
    """Compare ``rho(n_m)`` with ``e^gamma log log n_m`` for ``n_m > 5040``.

    A margin whose magnitude does not clear the rounding bound is reported as
    a failure with ``indeterminate=True``.
    """
    if state.m < 1:
        raise ValueError("robin_check needs m >= 1")
    if not exceeds_threshold(state):
        return RobinVerdict(BELOW_THRESHOLD)
    log_n = state.sum_log_q.value
    loglog = math.log(log_n)
    r = math.exp(state.sum_delta.value)
    bound_side = EXP_GAMMA * loglog
    margin = bound_side - r
    err = (
        EXP_GAMMA * state.sum_log_q.error_bound() / log_n
        + r * state.sum_delta.error_bound()
        + 8 * EPS * (abs(bound_side) + r)
    )
    if margin > err:
        return RobinVerdict(HOLDS, margin, err)
    return RobinVerdict(FAILS, margin, err, indeterminate=abs(margin) <= err)


@dataclass(frozen=True)
class LRRecord:
    m: int
    q: int
    k: int
    z: int
    delta: float
    rho: float
    log_n: float
    G: float
    verdict: str

    def as_dict(self) -> dict:
        return {f: getattr(self, f) for f in CSV_FIELDS}

    def formatted(self, decimals: int = 4) -> list[str]:
        d = decimals
        return [str(self.m), str(self.q), str(self.k), str(self.z),
                f"{self.delta:.{d}f}", f"{self.rho:.{d}f}", f"{self.log_n:.{d}f}",
                f"{self.G:.{d}f}", self.verdict]


def record_for(state: LRState) -> LRRecord:
    e = state.last
    return LRRecord(
        m=state.m, q=e.q, k=e.k, z=e.z, delta=e.delta,
        rho=rho(state), log_n=state.sum_log_q.value, G=g_value(state),
        verdict=robin_check(state).status,
    )


class Engine:
    """A stream and the LR state it feeds, advanced together."""

    def __init__(self, stream: Optional[ZStream] = None, state: Optional[LRState] = None):
        self.stream = stream if stream is not None else ZStream()
        self.state = state if state is not None else LRState()
        if self.stream.emitted != self.state.m:
            raise ValueError("stream and state are out of step")

    def step(self) -> LRRecord:
        self.state.extend(next(self.stream))
        return record_for(self.state)

    def states(self, count: int) -> Iterable[LRState]:
        """Advance until ``m == count``, yielding the (live) state after each step."""
        while self.state.m < count:
            self.state.extend(next(self.stream))
            yield self.state


@dataclass
class RunSummary:
    count: int = 0
    first_m: int = 0
    max_g: Optional[float] = None
    max_g_m: Optional[int] = None
    above_threshold: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def run(
    count: int,
    sink: Optional[Callable[[LRRecord], None]] = None,
    checkpoint_every: Optional[int] = None,
    checkpoint_path=None,
    engine: Optional[Engine] = None,
) -> RunSummary:
    """Advance ``engine`` (fresh by default) until ``m == count``.

    Every record goes to ``sink``; checkpoints are written every
    ``checkpoint_every`` steps and once more at the end when a path is given.
    The summary tracks the largest ``G`` among ``n_m > 5040`` and any Robin
    failures.
    """
    from .checkpoint import save_checkpoint

    if count < 1:
        raise ValueError("count must be >= 1")
    engine = engine if engine is not None else Engine()
    summary = RunSummary(first_m=engine.state.m + 1)
    while engine.state.m < count:
        rec = engine.step()
        summary.count += 1
        if sink is not None:
            sink(rec)
        if rec.verdict != BELOW_THRESHOLD:
            summary.above_threshold += 1
            if summary.max_g is None or rec.G > summary.max_g:
                summary.max_g, summary.max_g_m = rec.G, rec.m
            if rec.verdict == FAILS:
                summary.failures.append(rec)
        if checkpoint_path and checkpoint_every and engine.state.m % checkpoint_every == 0:
            save_checkpoint(checkpoint_path, engine)
    if checkpoint_path:
        save_checkpoint(checkpoint_path, engine)
    return summary
