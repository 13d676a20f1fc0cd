import math

import numpy as np
import pytest

from convexdist.events import CountLower, CountUpper, Explicit, HatPreimage
from convexdist.lab import (
    LdiExperiment,
    LdiRow,
    estimate_probability,
    in_parallel_set,
    run_convergence,
    run_iid_ldi,
    run_ldi,
    wilson,
)
from convexdist.measures import AlphabetRegion, CountingMeasure, FiniteAlphabet
from convexdist.samplers import Binomial, Hat, Poisson, ProcessSpec, trial_rng

M = CountingMeasure
G = FiniteAlphabet.uniform(10)
B = AlphabetRegion(range(4))


def test_wilson_interval_properties():
    p, lo, hi = wilson(0, 100, 0.99)
    assert p == 0 and lo == 0 and 0 < hi < 0.1
    p, lo, hi = wilson(100, 100, 0.99)
    assert p == 1 and hi == 1 and lo > 0.9
    p, lo, hi = wilson(37, 100, 0.99)
    assert lo < p < hi


def test_fair_coin_estimate():
    p, lo, hi = estimate_probability(lambda i: trial_rng(4, 0, i).random(), lambda u: u < 0.5, 10_000)
    assert lo <= 0.5 <= hi
    with pytest.raises(ValueError):
        estimate_probability(lambda i: i, bool, 0)


def test_bound_values_and_row_logic():
    row = LdiRow(2.0, 0.5, 0.45, 0.55, 0.5, 0.45, 0.55, math.exp(-1))
    assert row.bound == pytest.approx(math.exp(-1))
    assert row.product_hi == pytest.approx(0.3025)
    assert not row.violated
    assert LdiRow(1.0, 1, 0.99, 1, 1, 0.99, 1, math.exp(-0.25)).violated


def test_parallel_set_contains_event():
    A = CountUpper(B, 1)
    xi = M({0: 1, 5: 2})
    for kind in ("poisson_pi", "binomial"):
        assert in_parallel_set(xi, A, 0.0, kind, n=10)
    far = M({0: 3, 1: 3})
    assert not in_parallel_set(far, A, 0.5, "poisson_pi")
    assert in_parallel_set(far, A, 10.0, "poisson_pi")


def _exp(**kw):
    base = dict(process=ProcessSpec(G, Binomial(30, 0.5)), event=CountUpper(B, 6),
                distance_kind="binomial", s_grid=(0.0, 0.5, 1.0, 2.0, 3.0), trials=600, seed=3)
    base.update(kw)
    return LdiExperiment(**base)


def test_small_binomial_run():
    run = run_ldi(_exp())
    rows = run.rows
    assert [r.s for r in rows] == [0.0, 0.5, 1.0, 2.0, 3.0]
    assert not any(r.violated for r in rows)
    assert rows[0].bound == 1.0
    assert rows[3].bound == pytest.approx(math.exp(-1))
    # escape probability falls as s grows, and the event probability is shared
    outs = [r.p_notAs for r in rows]
    assert all(a >= b for a, b in zip(outs, outs[1:]))
    assert len({r.p_A for r in rows}) == 1


def test_whole_space_event():
    run = run_ldi(_exp(event=CountLower(B, 0), trials=200))
    assert all(r.p_A == 1.0 and r.p_notAs == 0.0 for r in run.rows)


def test_poisson_run():
    exp = _exp(process=ProcessSpec(G, Poisson(8.0)), event=CountUpper(B, 3), distance_kind="poisson_pi")
    assert not any(r.violated for r in run_ldi(exp).rows)


def test_run_is_deterministic_and_worker_independent():
    a = run_ldi(_exp(trials=200))
    b = run_ldi(_exp(trials=200), workers=2)
    assert np.array_equal(a.in_event, b.in_event)
    assert np.array_equal(a.distances, b.distances)


def test_experiment_validation():
    with pytest.raises(ValueError):
        _exp(distance_kind="classical")
    with pytest.raises(ValueError):
        _exp(process=ProcessSpec(G, Poisson(2.0)))
    with pytest.raises(ValueError):
        _exp(s_grid=(-1.0,))
    with pytest.raises(ValueError):
        _exp(trials=0)
    with pytest.raises(ValueError):
        _exp(confidence=1.0)


def test_iid_run_agrees_with_projection():
    spec = ProcessSpec(G, Hat(12, 0.5))
    event = HatPreimage(CountUpper(B, 2), 12)
    run = run_iid_ldi(event, spec, (0.5, 1.0, 2.0), 300, seed=8)
    assert run.extra["indicator_mismatches"] == 0
    assert run.extra["max_abs_difference"] <= 1e-9
    assert not any(r.violated for r in run.rows)


def test_convergence_rows():
    xi = M({4: 1, 5: 1})
    rows = run_convergence(xi, CountLower(AlphabetRegion([0, 1]), 3), [1280, 20, 80, 320])
    assert [r.n for r in rows] == [20, 80, 320, 1280]
    gaps = [r.gap for r in rows]
    assert all(g >= -1e-12 for g in gaps)
    assert all(r.gap <= r.bound + 1e-9 for r in rows)
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    with pytest.raises(ValueError):
        run_convergence(xi, Explicit([xi]), [2])
