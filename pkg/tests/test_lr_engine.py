import math
from fractions import Fraction

import pytest

from lr_abundant.checkpoint import CheckpointError, engine_from_dict, engine_to_dict, load_checkpoint
from lr_abundant.exact_oracle import materialize, sigma_over_n_exact
from lr_abundant.lr_engine import (BELOW_THRESHOLD, EXP_GAMMA, HOLDS, ContractError, Engine,
                                   LRState, extend, g_value, record_for, rho, robin_check, run)
from lr_abundant.zstream import ZElement, ZStream

from table1 import ROWS, table_n


def state_at(m):
    engine = Engine()
    for _ in engine.states(m):
        pass
    return engine.state


@pytest.mark.parametrize("row", ROWS, ids=lambda r: f"m{r[0]}")
def test_table1_row(row):
    m, q, k, z, dlt, n, r, log_n, g = row
    state = state_at(m)
    rec = record_for(state)
    assert (rec.q, rec.k, rec.z) == (q, k, z)
    assert materialize(state.exponents) == table_n(m)
    assert rec.delta == pytest.approx(dlt, abs=5e-5)
    assert rec.rho == pytest.approx(r, abs=5e-5)
    assert rec.log_n == pytest.approx(log_n, abs=5e-5)
    if m == 1:
        assert rec.G == pytest.approx(1.5 / math.log(math.log(2)), rel=1e-14)
        assert rec.G == pytest.approx(-4.0927, abs=1e-4)
    else:
        assert rec.G == pytest.approx(g, abs=5e-5)


def test_extend_from_60_to_420():
    state = state_at(4)
    assert state.exponents == {2: 2, 3: 1, 5: 1}
    state.extend(ZElement(7, 1, 7, 5))
    assert materialize(state.exponents) == 420
    assert state.log_n == pytest.approx(6.0403, abs=5e-5)


def test_extend_at_tie():
    state = state_at(13)
    state.extend(ZElement(5, 2, 30, 14))
    assert state.exponents[5] == 2 and state.exponents[2] == 3
    assert rho(state) == pytest.approx(5.4249, abs=5e-5)


def test_extend_empty():
    state = LRState().extend(ZElement(2, 1, 2, 1))
    assert state.exponents == {2: 1}
    assert state.sum_delta.value == pytest.approx(math.log(1.5), rel=1e-15)
    assert state.sum_log_q.value == pytest.approx(math.log(2), rel=1e-15)
    assert rho(state) == pytest.approx(1.5, rel=1e-15)


def test_functional_extend_leaves_input_alone():
    base = state_at(3)
    nxt = extend(base, ZElement(2, 2, 6, 4))
    assert base.m == 3 and nxt.m == 4
    assert base.exponents == {2: 1, 3: 1, 5: 1}


@pytest.mark.parametrize("elem", [
    ZElement(2, 4, 30, 5),   # skips k = 3
    ZElement(3, 1, 3, 5),    # repeats an exponent
    ZElement(2, 2, 6, 9),    # wrong ordinal
])
def test_extend_rejects_out_of_order(elem):
    with pytest.raises(ContractError):
        state_at(4).extend(elem)


def test_extend_rejects_decreasing_z():
    state = state_at(5)
    state.extend(ZElement(13, 1, 13, 0))
    with pytest.raises(ContractError):
        state.extend(ZElement(11, 1, 11, 0))


@pytest.mark.parametrize("m,expected", [(2, 2.0), (9, 4.3636)])
def test_rho_table(m, expected):
    assert rho(state_at(m)) == pytest.approx(expected, abs=5e-5)


@pytest.mark.parametrize("m,expected", [(3, 1.9606), (20, 1.6988)])
def test_g_table(m, expected):
    assert g_value(state_at(m)) == pytest.approx(expected, abs=5e-5)


def test_robin_verdicts():
    assert robin_check(state_at(6)).status == BELOW_THRESHOLD
    v7 = robin_check(state_at(7))
    assert v7.status == HOLDS and v7.margin > 0
    assert v7.margin == pytest.approx(EXP_GAMMA * math.log(math.log(13860)) - 208 / 55, rel=1e-12)
    assert robin_check(state_at(9)).status == HOLDS


def test_threshold_flips_exactly_at_m7():
    engine = Engine()
    for s in engine.states(8):
        above = materialize(s.exponents) > 5040
        assert (robin_check(s).status != BELOW_THRESHOLD) == above
        assert above == (s.m >= 7)


def test_exp_gamma_constant():
    assert EXP_GAMMA == pytest.approx(1.7810724, abs=5e-8)


def test_invariants_over_prefix(states_upto_1000):
    prev = None
    for s in states_upto_1000:
        assert sum(s.exponents.values()) == s.m
        exps = [s.exponents[p] for p in sorted(s.exponents)]
        assert all(a >= b for a, b in zip(exps, exps[1:]))
        if prev is not None:
            assert rho(s) > rho(prev)
        prev = s


def test_exact_agreement_first_hundred(states_upto_1000):
    for s in states_upto_1000[:100]:
        exact = sigma_over_n_exact(s.exponents)
        assert abs(rho(s) - float(exact)) / float(exact) <= 1e-12
        assert s.sum_log_q.value == pytest.approx(math.log(materialize(s.exponents)), rel=1e-12)


def test_error_bound_is_small_and_positive():
    s = state_at(10_000)
    v = robin_check(s)
    assert 0 < v.error_bound < 1e-8
    assert v.margin > 1000 * v.error_bound


def test_run_count_one():
    recs = []
    summary = run(1, recs.append)
    assert len(recs) == 1 and recs[0].m == 1 and recs[0].z == 2
    assert summary.max_g is None and summary.above_threshold == 0


def test_run_twenty_summary():
    recs = []
    summary = run(20, recs.append)
    assert [r.m for r in recs] == list(range(1, 21))
    assert summary.max_g_m == 9
    assert round(summary.max_g, 4) == 1.7119
    assert summary.ok and summary.above_threshold == 14


def test_run_rejects_zero():
    with pytest.raises(ValueError):
        run(0)


def test_resume_matches_cold_run(tmp_path):
    path = tmp_path / "ck.json"
    cold = []
    run(20, cold.append)
    run(10, None, checkpoint_path=path)
    warm = []
    run(20, warm.append, engine=load_checkpoint(path))
    assert warm == cold[10:]


def test_periodic_checkpoints(tmp_path):
    path = tmp_path / "ck.json"
    seen = []

    def sink(rec):
        if rec.m in (7, 8):
            seen.append(load_checkpoint(path).state.m if path.exists() else None)

    run(12, sink, checkpoint_every=5, checkpoint_path=path)
    assert seen == [5, 5]
    assert load_checkpoint(path).state.m == 12


def test_checkpoint_round_trip_is_exact():
    engine = Engine()
    for _ in engine.states(500):
        pass
    clone = engine_from_dict(engine_to_dict(engine))
    assert clone.state.to_dict() == engine.state.to_dict()
    for _ in range(300):
        assert clone.step() == engine.step()


def test_checkpoint_version_is_enforced():
    data = engine_to_dict(Engine())
    data["version"] = 99
    with pytest.raises(CheckpointError):
        engine_from_dict(data)


def test_engine_rejects_mismatched_parts():
    stream = ZStream()
    stream.take(3)
    with pytest.raises(ValueError):
        Engine(stream, LRState())


def test_rho_against_divisor_sum():
    for m in (5, 9, 11):
        s = state_at(m)
        n = materialize(s.exponents)
        sigma = sum(d + (n // d if d * d != n else 0) for d in range(1, math.isqrt(n) + 1) if n % d == 0)
        assert sigma_over_n_exact(s.exponents) == Fraction(sigma, n)
        assert rho(s) == pytest.approx(sigma / n, rel=1e-13)
