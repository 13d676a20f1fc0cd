import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexdist.events import (
    CountLower,
    CountUpper,
    EnumerationCapError,
    Explicit,
    HatEventSet,
    HatPreimage,
    InfeasibleEventError,
    Representative,
    arrangements,
    event_contains,
    prune_dominated,
    representative_reduction,
    sub_multisets,
)
from convexdist.measures import DELTA, AlphabetRegion, CountingMeasure, HatVector, multiset_difference
from convexdist.solver import min_norm_point

M = CountingMeasure
SYMBOLS = range(5)
MAX_ADDED = 3


def all_nu(xi):
    """Every nu on SYMBOLS with at most MAX_ADDED points beyond xi."""
    ranges = [range(xi[s] + MAX_ADDED + 1) for s in SYMBOLS]
    for counts in itertools.product(*ranges):
        added = sum(max(0, c - xi[s]) for s, c in zip(SYMBOLS, counts))
        if added <= MAX_ADDED:
            yield M({s: c for s, c in zip(SYMBOLS, counts) if c})


def brute_force_reps(xi, A):
    """Least nu(E) for every reachable D = xi \\ nu, by exhaustive search over nu."""
    best = {}
    for nu in all_nu(xi):
        if event_contains(A, nu):
            d = multiset_difference(xi, nu)
            best[d] = min(best.get(d, math.inf), nu.mass)
    return best


def pareto(xi, best):
    out = set()
    for d, m in best.items():
        e = max(0, m - xi.mass)
        dominated = any(
            d2 != d and d2 <= d and max(0, m2 - xi.mass) <= e for d2, m2 in best.items()
        ) or any(d2 == d and m2 < m for d2, m2 in best.items())
        if not dominated:
            out.add((d, e))
    return out


def value_from(xi, pairs, n=None):
    atoms = xi.atoms
    rows = []
    for d, m in pairs:
        row = [d[p] / math.sqrt(c) for p, c in atoms]
        if n is not None:
            free = n - xi.mass
            row.append(max(0, m - xi.mass) / math.sqrt(free) if free else 0.0)
        rows.append(row)
    V = np.array(rows, dtype=float).reshape(len(rows), len(atoms) + (n is not None))
    if V.shape[1] == 0 or np.any(~V.any(axis=1)):
        return 0.0
    return min_norm_point(V).norm


xis = st.dictionaries(st.sampled_from(list(SYMBOLS)), st.integers(1, 2), min_size=1, max_size=3).map(M)
regions = st.sets(st.sampled_from(list(SYMBOLS)), min_size=1, max_size=4).map(AlphabetRegion)


@settings(max_examples=30, deadline=None)
@given(xis, regions, st.integers(0, 4))
def test_count_upper_matches_exhaustive_search(xi, B, k):
    A = CountUpper(B, k)
    reps = representative_reduction(xi, A)
    brute = brute_force_reps(xi, A)
    assert {(r.dropped, r.excess(xi)) for r in reps} == pareto(xi, brute)
    for r in reps:
        assert brute[r.dropped] == r.min_mass
    assert value_from(xi, [(r.dropped, r.min_mass) for r in reps]) == pytest.approx(
        value_from(xi, brute.items()), abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(xis, regions, st.integers(1, 3))
def test_count_lower_matches_exhaustive_search(xi, B, extra):
    from convexdist.measures import count

    k = count(xi, B) + extra  # at most MAX_ADDED new points are ever needed
    A = CountLower(B, k)
    reps = representative_reduction(xi, A)
    brute = brute_force_reps(xi, A)
    assert {(r.dropped, r.excess(xi)) for r in reps} == pareto(xi, brute)
    for n in (xi.mass + extra, xi.mass + 7):
        assert value_from(xi, [(r.dropped, r.min_mass) for r in reps], n) == pytest.approx(
            value_from(xi, brute.items(), n), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(xis, st.lists(st.dictionaries(st.sampled_from(list(SYMBOLS)), st.integers(1, 3), max_size=3).map(M),
                     min_size=1, max_size=6))
def test_explicit_pruning_preserves_values(xi, members):
    A = Explicit(members)
    full = [(multiset_difference(xi, nu), nu.mass) for nu in A.measures]
    reps = representative_reduction(xi, A)
    assert len(reps) <= len(full)
    kept = [(r.dropped, r.min_mass) for r in reps]
    n_big = max(nu.mass for nu in A.measures) + xi.mass + 1
    for n in (None, n_big):
        assert value_from(xi, kept, n) == pytest.approx(value_from(xi, full, n), abs=1e-9)


def test_reduction_examples():
    xi = M({0: 1, 1: 1, 2: 1, 3: 1})
    reps = representative_reduction(xi, CountUpper(AlphabetRegion(range(4)), 2))
    assert len(reps) == math.comb(4, 2)
    assert all(r.dropped.mass == 2 and r.min_mass == 2 for r in reps)

    reps = representative_reduction(M({4: 1, 5: 1}), CountLower(AlphabetRegion([0, 1]), 3))
    by_size = sorted((r.dropped.mass, r.min_mass) for r in reps)
    assert by_size == [(0, 5), (1, 4), (1, 4), (2, 3)]

    xi = M("ab")
    assert representative_reduction(xi, Explicit([xi + M("z")])) == [Representative(M(), 3)]


def test_prune_dominated_rule():
    xi = M({"a": 2, "b": 1})
    reps = [Representative(M("a"), 3), Representative(M({"a": 2}), 1), Representative(M("a"), 2)]
    assert prune_dominated(xi, reps) == [Representative(M("a"), 2)]
    # smaller drop with larger excess is kept next to it
    reps = [Representative(M(), 5), Representative(M("b"), 2)]
    assert len(prune_dominated(xi, reps)) == 2


def test_enumeration_cap():
    xi = M({0: 20})
    with pytest.raises(EnumerationCapError):
        representative_reduction(xi, CountUpper(AlphabetRegion([0]), 3))
    # the cap only concerns the enumerated part of xi
    assert len(representative_reduction(xi, CountUpper(AlphabetRegion([1]), 0))) == 1
    assert len(representative_reduction(xi, CountUpper(AlphabetRegion([0]), 3), cap=25)) == 1


def test_infeasible_lower_event_on_empty_region():
    with pytest.raises(InfeasibleEventError):
        representative_reduction(M("a"), CountLower(AlphabetRegion([]), 1))


def test_event_contains():
    B = AlphabetRegion("ab")
    assert event_contains(CountUpper(B, 1), M("ac"))
    assert not event_contains(CountUpper(B, 1), M("abc"))
    assert event_contains(CountLower(B, 2), M("aab"))
    assert not event_contains(CountLower(B, 2), M("ac"))
    assert event_contains(Explicit([M("a")]), M("a"))
    assert not event_contains(Explicit([M("a")]), M("aa"))


def test_sub_multisets():
    xi = M({"a": 2, "b": 1})
    assert len(list(sub_multisets(xi))) == 6
    assert sorted(d.to_text() for d in sub_multisets(xi, 2)) == ["a:1,b:1", "a:2"]
    assert list(sub_multisets(xi, 4)) == []


def test_hat_events():
    A = HatEventSet.from_seeds([HatVector(["a", DELTA])])
    assert A.n == 2 and A.contains(HatVector([DELTA, "a"]))
    assert A.projected() == Explicit([M("a")])
    with pytest.raises(ValueError):
        HatEventSet([HatVector(["a", DELTA])])  # not permutation closed
    pre = HatPreimage(CountUpper(AlphabetRegion("a"), 0), 2)
    assert pre.contains(HatVector("bb")) and not pre.contains(HatVector("ab"))
    assert sorted(y.to_text() for y in arrangements(M("a"), 2)) == sorted(["a,*", "*,a"])
    assert list(arrangements(M("aaa"), 2)) == []
