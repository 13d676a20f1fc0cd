import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from convexdist.solver import ConvergenceError, min_norm_point, sphere_grid_oracle


def segment_min_norm(a, b):
    """Closed-form nearest point to 0 on the segment [a, b]."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    d = b - a
    dd = float(d @ d)
    t = 0.0 if dd == 0 else float(np.clip(-(a @ d) / dd, 0, 1))
    return float(np.linalg.norm(a + t * d))


def test_two_unit_vectors():
    r = min_norm_point([[1, 0], [0, 1]])
    assert r.norm == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert r.norm == pytest.approx(segment_min_norm([1, 0], [0, 1]), abs=1e-12)
    assert np.allclose(r.coeffs, [0.5, 0.5])
    assert sphere_grid_oracle([[1, 0], [0, 1]], 10**4) == pytest.approx(0.7071, abs=1e-4)


def test_single_vertex():
    assert min_norm_point([[1, 1]]).norm == pytest.approx(math.sqrt(2))
    assert sphere_grid_oracle([[1, 1]], 2000, refinements=30) == pytest.approx(math.sqrt(2), abs=1e-6)


def test_zero_vertex():
    r = min_norm_point([[1, 2], [0, 0], [3, 1]])
    assert r.norm == 0.0 and r.coeffs[1] == 1.0
    assert sphere_grid_oracle([[1, 2], [0, 0]], 10) == 0.0


def test_classical_example_vertices():
    # incidence vectors {(1,0),(1,1)}: nearest point (1,0)
    r = min_norm_point([[1, 1], [1, 0]])
    assert r.norm == pytest.approx(1.0)
    assert sphere_grid_oracle([[1, 1], [1, 0]], 2000, refinements=20) == pytest.approx(1.0, abs=1e-6)


def test_input_validation():
    with pytest.raises(ValueError):
        min_norm_point(np.zeros((0, 2)))
    with pytest.raises(ValueError):
        min_norm_point([[1, -1]])
    with pytest.raises(ValueError):
        sphere_grid_oracle(np.ones((2, 7)), 3)


def test_iteration_cap():
    rng = np.random.default_rng(3)
    V = rng.random((40, 6)) + 0.1
    with pytest.raises(ConvergenceError):
        min_norm_point(V, max_iter=1)


def test_deterministic_under_vertex_reordering():
    rng = np.random.default_rng(5)
    V = rng.integers(0, 3, (12, 4)).astype(float)
    r1 = min_norm_point(V)
    perm = rng.permutation(len(V))
    r2 = min_norm_point(V[perm])
    assert r1.norm == r2.norm
    assert np.array_equal(r1.point, r2.point)


vertex_sets = st.integers(1, 4).flatmap(
    lambda d: arrays(np.float64, st.tuples(st.integers(1, 12), st.just(d)),
                     elements=st.sampled_from([0.0, 0.5, 1.0, 1 / math.sqrt(2), 1 / math.sqrt(3), 2.0]))
)


@settings(max_examples=60, deadline=None)
@given(vertex_sets)
def test_certificate(V):
    r = min_norm_point(V)
    assert r.coeffs.min() >= 0
    assert r.coeffs.sum() == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(r.coeffs @ V, r.point, atol=1e-12)
    worst = float(r.norm**2 - np.min(V @ r.point))
    assert worst <= 1e-9 * (1 + r.norm**2)


@settings(max_examples=40, deadline=None)
@given(vertex_sets)
def test_oracle_sandwich(V):
    value = min_norm_point(V).norm
    dim = V.shape[1]
    res = {1: 2, 2: 400, 3: 80, 4: 30}[dim]
    oracle = sphere_grid_oracle(V, res, refinements=40)
    assert oracle <= value + 1e-9
    assert value <= oracle + 2e-3


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 8), st.just(2)), elements=st.floats(0, 3)))
def test_two_dim_against_pairwise_segments(V):
    # in the plane the nearest point lies on a vertex or on a segment between two
    value = min_norm_point(V).norm
    brute = min(segment_min_norm(a, b) for a in V for b in V)
    assert value == pytest.approx(brute, abs=1e-9)
