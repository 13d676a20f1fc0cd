import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from convexdist.measures import DELTA, AlphabetRegion, CountingMeasure, FiniteAlphabet, HatVector, UnitCube, count
from convexdist.samplers import (
    Binomial,
    Hat,
    Poisson,
    ProcessSpec,
    mix64,
    sample,
    sample_binomial,
    sample_hat,
    sample_poisson,
    trial_rng,
    trial_seed,
)

G = FiniteAlphabet.uniform(10)
B = AlphabetRegion(range(4))


def test_degenerate_parameters():
    assert sample_binomial(ProcessSpec(G, Binomial(7, 0.0)), 1) == CountingMeasure()
    assert sample_binomial(ProcessSpec(G, Binomial(7, 1.0)), 1).mass == 7
    assert sample_binomial(ProcessSpec(G, Binomial(0, 0.5)), 1) == CountingMeasure()
    assert sample_poisson(ProcessSpec(G, Poisson(0.0)), 1) == CountingMeasure()
    assert sample_hat(ProcessSpec(G, Hat(5, 0.0)), 1) == HatVector([DELTA] * 5)
    full = sample_hat(ProcessSpec(G, Hat(5, 1.0)), 1)
    assert DELTA not in full.entries and full.n == 5


def test_parameter_validation():
    with pytest.raises(ValueError):
        Binomial(3, 1.5)
    with pytest.raises(ValueError):
        Binomial(-1, 0.5)
    with pytest.raises(ValueError):
        Hat(0, 0.5)
    with pytest.raises(ValueError):
        Poisson(-1.0)
    with pytest.raises(ValueError):
        Poisson(math.inf)
    with pytest.raises(TypeError):
        sample_hat(ProcessSpec(G, Binomial(3, 0.5)), 0)


def test_binomial_region_count_moments():
    n, t, draws = 50, 0.5, 4000
    spec = ProcessSpec(G, Binomial(n, t))
    c = np.array([count(sample_binomial(spec, trial_rng(9, 0, i)), B) for i in range(draws)])
    p = t * 0.4
    sd = math.sqrt(n * p * (1 - p) / draws)
    assert abs(c.mean() - n * p) < 4 * sd


def test_cube_points_lie_in_cube():
    spec = ProcessSpec(UnitCube(3), Poisson(20.0))
    xi = sample_poisson(spec, 3)
    for p, _ in xi.atoms:
        assert len(p) == 3 and all(0 <= c < 1 for c in p)


def test_seeding_is_deterministic_and_streams_differ():
    assert trial_seed(5, 1, 7) == trial_seed(5, 1, 7)
    seeds = {trial_seed(5, s, i) for s in (1, 2) for i in range(500)}
    assert len(seeds) == 1000
    spec = ProcessSpec(G, Binomial(30, 0.5))
    a = [sample(spec, trial_rng(11, 1, i)) for i in range(50)]
    b = [sample(spec, trial_rng(11, 1, i)) for i in range(49, -1, -1)][::-1]
    assert a == b


@given(st.integers(0, 2**64 - 1), st.integers(0, 1000))
def test_mix64_range(master, idx):
    assert 0 <= mix64(master, idx) < 2**64


def test_poisson_superposition():
    # two independent Poisson(3) and Poisson(5) samples add to a Poisson(8) count law
    g = FiniteAlphabet.uniform(4)
    s3, s5 = ProcessSpec(g, Poisson(3.0)), ProcessSpec(g, Poisson(5.0))
    draws = 4000
    tot = np.array([
        (sample_poisson(s3, trial_rng(1, 0, i)) + sample_poisson(s5, trial_rng(1, 1, i))).mass
        for i in range(draws)
    ])
    assert abs(tot.mean() - 8.0) < 4 * math.sqrt(8.0 / draws)
    assert abs(tot.var() - 8.0) < 0.8


def test_hat_projection_mass():
    spec = ProcessSpec(G, Hat(30, 0.5))
    for i in range(20):
        x = sample_hat(spec, trial_rng(2, 0, i))
        assert x.n == 30
        assert x.project().mass == sum(1 for p in x.entries if p is not DELTA)
