import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lr_abundant._numeric import accurate_cumsum, ilog, iroot
from lr_abundant.chebyshev import (BoundReport, SieveRangeError, SieveTables, check_dusart,
                                   check_lemma1, check_lemma2, check_mertens_shift, check_theorem2,
                                   check_theorem4, check_theorem6, check_theorem7,
                                   expected_exponents, psi_Z_by_thresholds, run_suite, solve_y_k)
from lr_abundant.lr_engine import Engine
from lr_abundant.primes import is_prime
from lr_abundant.zstream import ZStream


def direct_theta(x):
    return math.fsum(math.log(p) for p in range(2, int(x) + 1) if is_prime(p))


def direct_psi(x):
    total = []
    for p in range(2, int(x) + 1):
        if is_prime(p):
            pk = p
            while pk <= x:
                total.append(math.log(p))
                pk *= p
    return math.fsum(total)


def stream_psi_Z(x):
    stream, logs = ZStream(), []
    while stream.peek().z <= x:
        logs.append(math.log(next(stream).z))
    return math.fsum(logs)


def state_at(m):
    engine = Engine()
    for _ in engine.states(m):
        pass
    return engine.state


def test_theta_psi_examples(small_tables):
    assert small_tables.theta(10) == pytest.approx(math.log(210), rel=1e-15)
    assert small_tables.theta(10) == pytest.approx(5.3471, abs=5e-5)
    assert small_tables.psi(10) == pytest.approx(math.log(2520), rel=1e-15)
    assert small_tables.psi(10) == pytest.approx(7.8320, abs=5e-5)
    assert small_tables.theta(2) == pytest.approx(math.log(2))
    assert small_tables.theta(1.5) == 0.0


@pytest.mark.parametrize("x", [2, 3, 17.9, 100, 997, 5000])
def test_theta_psi_direct(small_tables, x):
    assert small_tables.theta(x) == pytest.approx(direct_theta(x), rel=1e-14)
    assert small_tables.psi(x) == pytest.approx(direct_psi(x), rel=1e-14)


def test_psi_Z_examples(small_tables):
    expected = math.fsum(math.log(z) for z in (2, 3, 5, 6, 7, 11, 12, 13, 14))
    assert small_tables.psi_Z(14) == pytest.approx(expected, rel=1e-15)
    assert small_tables.psi_Z(14) == pytest.approx(17.2257, abs=5e-5)
    assert small_tables.psi_Z(2) == pytest.approx(math.log(2))
    # z = 30 arrives twice (5 + 25 and 2 + 4 + 8 + 16)
    assert small_tables.psi_Z(30) - small_tables.psi_Z(29) == pytest.approx(2 * math.log(30))


@pytest.mark.parametrize("x", [30, 1000, 25_000])
def test_psi_Z_against_stream(small_tables, x):
    assert small_tables.psi_Z(x) == pytest.approx(stream_psi_Z(x), rel=1e-13)
    assert psi_Z_by_thresholds(x, small_tables) == pytest.approx(stream_psi_Z(x), rel=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=200_000))
def test_psi_is_sum_of_theta_roots(x):
    tables = _shared_small()
    rhs = math.fsum(tables.theta(iroot(x, k)) for k in range(1, ilog(x, 2) + 1))
    assert tables.psi(x) == pytest.approx(rhs, rel=1e-13, abs=1e-13)


_SMALL = {}


def _shared_small():
    if "t" not in _SMALL:
        _SMALL["t"] = SieveTables(200_000)
    return _SMALL["t"]


def test_range_errors(small_tables):
    with pytest.raises(SieveRangeError):
        small_tables.theta(200_001)
    with pytest.raises(SieveRangeError):
        small_tables.psi_Z(10 ** 6)


def test_accurate_cumsum():
    vals = np.log(np.arange(2, 100_000, dtype=float))
    pref = accurate_cumsum(vals, block=100)
    assert pref[0] == 0.0
    assert pref[-1] == math.fsum(vals)
    assert pref[5000] == pytest.approx(math.fsum(vals[:5000]), rel=1e-15)


def test_iroot_ilog():
    assert iroot(10 ** 6, 3) == 100 and iroot(10 ** 6 - 1, 3) == 99
    assert iroot(2 ** 196, 7) == 2 ** 28 and iroot(2 ** 196 - 1, 7) == 2 ** 28 - 1
    assert ilog(14, 2) == 3 and ilog(16, 2) == 4 and ilog(14, 3) == 2


@pytest.mark.parametrize("z,k,y", [(30, 2, 5.0), (12, 2, 3.0)])
def test_solve_y_exact_roots(z, k, y):
    v = solve_y_k(z, k)
    assert v.y == pytest.approx(y, rel=1e-12)
    quad = (-1 + math.sqrt(1 + 4 * z)) / 2
    assert v.y == pytest.approx(quad, rel=1e-12)


def test_solve_y_bracket():
    v = solve_y_k(7, 3)
    assert 7 ** (1 / 3) - 1 < v.y < 7 ** (1 / 3)
    assert abs(v.residual) <= 1e-9 * 7


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=4, max_value=10 ** 9), st.integers(min_value=2, max_value=29))
def test_lemma1_bracket_property(z, k):
    if 2 ** k > z:
        return
    v = solve_y_k(z, k)
    assert v.lo < v.y < v.hi
    assert abs(v.residual) <= 1e-9 * z


def test_check_lemma1_small():
    rep = check_lemma1(14)
    assert rep.passed and rep.checked == 2  # k = 2, 3
    assert check_lemma1(3).checked == 0


def test_lemma2_examples(small_tables):
    s9 = state_at(9)
    assert s9.exponents[2] == 3 == ilog(14, 2)
    assert s9.exponents[3] == 2 == ilog(14, 3)
    assert check_lemma2(s9, small_tables).passed
    assert check_lemma2(state_at(1), small_tables).passed


def test_lemma2_detects_violation(small_tables):
    s = state_at(9).snapshot()
    s.exponents[2] = 1
    rep = check_lemma2(s, small_tables)
    assert not rep.passed
    assert rep.failures[0]["violation"]["p"] == 2


def test_theorem2_at_29(small_tables):
    s13 = state_at(13)
    assert solve_y_k(29, 2).y == pytest.approx((-1 + math.sqrt(117)) / 2, rel=1e-12)  # about 4.908
    counts, predicted = expected_exponents(s13, small_tables)
    assert predicted == [3, 2]  # primes 2, 3
    assert counts[1] - counts[2] == 8  # 5..29 all get exponent 1
    assert check_theorem2(s13, small_tables).passed


def test_theorem2_tie_clause(small_tables):
    s14, s15 = state_at(14), state_at(15)
    assert s14.exponents[5] == 2 and s14.exponents[2] == 3
    assert s15.exponents[2] == 4
    _, predicted = expected_exponents(s14, small_tables)
    assert predicted[0] == 3  # lowered from 4 by the tie with (5, 2)
    assert check_theorem2(s14, small_tables).passed
    assert check_theorem2(s15, small_tables).passed


def test_theorem2_small_m(small_tables):
    s2 = state_at(2)
    assert solve_y_k(3, 2).y < 2
    assert check_theorem2(s2, small_tables).passed


def test_theorem2_detects_violation(small_tables):
    s = state_at(40).snapshot()
    s.exponents[131] = 1  # z_40 = 126
    assert not check_theorem2(s, small_tables).passed
    t = state_at(40).snapshot()
    t.exponents[97] = 2
    assert not check_theorem2(t, small_tables).passed


def test_theorem4_m1(w1):
    rep = check_theorem4(state_at(1), w1)
    assert rep.passed
    wit = rep.witness
    assert wit["lower"] == pytest.approx(0.2979, abs=1e-4)
    assert wit["log_rho"] == pytest.approx(0.4055, abs=1e-4)
    assert wit["upper"] == pytest.approx(0.5479, abs=1e-4)


@pytest.mark.parametrize("m", [2, 5, 20, 1000])
def test_theorem4_sandwich(w1, m):
    assert check_theorem4(state_at(m), w1).passed


@pytest.mark.parametrize("m", [2, 9])
def test_theorem6(small_tables, m):
    s = state_at(m)
    assert check_theorem6(s.z_m, small_tables, m).passed


def test_theorem6_large(tables):
    rep = check_theorem6(999_983, tables)
    assert rep.passed and rep.worst_slack > 0
    assert "residual_sqrt" in rep.witness


def test_theorem7_m20(small_tables):
    s = state_at(20)
    rep = check_theorem7(s, small_tables)
    assert rep.passed
    assert small_tables.psi(43) == pytest.approx(direct_psi(43), rel=1e-14)
    assert small_tables.psi(43) == pytest.approx(43.689, abs=1e-3)
    assert rep.witness["lower"] == pytest.approx(38.71, abs=1e-2)


def test_theorem7_m1_lower_bound_is_false(small_tables):
    # at z = 2, log log z < 0 lifts the lower bound above psi(2) = log n_1
    rep = check_theorem7(state_at(1), small_tables)
    wit = rep.failures[0]
    assert wit["upper_ok"] and not wit["lower_ok"]
    assert wit["psi"] == pytest.approx(math.log(2)) and wit["log_n"] == pytest.approx(math.log(2))


def test_theorem7_m1000(small_tables):
    assert check_theorem7(state_at(1000), small_tables).passed


def test_suite_small(small_tables, w1):
    reps = run_suite(["lemma1", "lemma2", "theorem2", "theorem4", "theorem6", "theorem7"],
                     500, small_tables, w1, sample_m=[5000])
    for name in ("lemma1", "lemma2", "theorem2", "theorem4", "theorem6"):
        assert reps[name].passed, reps[name].to_json()
    assert reps["theorem6"].lo == 2
    assert reps["theorem7"].hi == 5000
    assert [f["at"] for f in reps["theorem7"].failures] == [1]


def test_suite_rejects_unknown(small_tables):
    with pytest.raises(ValueError):
        run_suite(["theorem9"], 10, small_tables)


def test_dusart_points(tables):
    assert check_dusart(tables, 3_594_641, 3_594_641, points=1).passed
    rep = check_dusart(tables, 5_000_000, 5_000_000, points=1)
    assert rep.passed and rep.checked == 1


def test_dusart_lower_guard(tables):
    with pytest.raises(ValueError):
        check_dusart(tables, 1000)


def test_mertens_shift(tables):
    rep = check_mertens_shift(tables)
    assert rep.passed
    # tightest at y = 2: 1/2 < log log 2 + 0.8666
    assert rep.witness["at"] == 2
    assert rep.worst_slack == pytest.approx(math.log(math.log(2)) + 0.8666 - 0.5)


def test_report_json_schema():
    rep = BoundReport("x")
    rep.record(1, 0.5, True)
    rep.record(2, -0.1, False, note="bad")
    out = rep.to_json()
    assert {"theorem", "range", "pass", "worst_slack", "witness"} <= set(out)
    assert out["pass"] is False and out["range"] == [1, 2]
    assert out["witness"]["at"] == 2
    json.dumps(out)


def test_report_merge():
    a, b = BoundReport("x"), BoundReport("x")
    a.record(1, 0.3, True)
    b.record(5, 0.1, True)
    a.merge(b)
    assert a.checked == 2 and a.worst_slack == 0.1 and (a.lo, a.hi) == (1, 5)
