"""Binomial, hat-space and Poisson point process samplers with reproducible seeding.

Every trial gets its own generator, seeded by an avalanche mix of the master
seed, a stream id and the trial index, so a trial's sample does not depend
on which worker draws it or in what order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measures import DELTA, CountingMeasure, FiniteAlphabet, GroundSpace, HatVector, UnitCube

MASK64 = (1 << 64) - 1
GOLDEN64 = 0x9E3779B97F4A7C15


def mix64(master: int, index: int) -> int:
    """SplitMix64 finalizer applied to ``master + (index + 1) * golden``."""
    z = (master + (index + 1) * GOLDEN64) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_seed(master: int, stream: int, index: int) -> int:
    return mix64(mix64(master & MASK64, stream), index)


def trial_rng(master: int, stream: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(trial_seed(master, stream, index)))


@dataclass(frozen=True)
class Binomial:
    """``n`` independent ``mu``-points, each retained with probability ``t``."""

    n: int
    t: float

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"retention probability t = {self.t} not in [0, 1]")


@dataclass(frozen=True)
class Hat:
    """``n`` iid coordinates: DELTA with probability ``1 - t``, else a ``mu``-point."""

    n: int
    t: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"retention probability t = {self.t} not in [0, 1]")


@dataclass(frozen=True)
class Poisson:
    """Poisson process with intensity measure ``t * mu``."""

    t: float

    def __post_init__(self):
        if not (0.0 <= self.t < float("inf")):
            raise ValueError(f"intensity t = {self.t} must be finite and >= 0")


ProcessKind = Binomial | Hat | Poisson


@dataclass(frozen=True)
class ProcessSpec:
    ground: GroundSpace
    kind: ProcessKind

    def __post_init__(self):
        if not isinstance(self.ground, (FiniteAlphabet, UnitCube)):
            raise TypeError(f"unknown ground space {self.ground!r}")


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def sample_hat(spec: ProcessSpec, seed) -> HatVector:
    if not isinstance(spec.kind, Hat):
        raise TypeError("sample_hat needs a Hat process")
    rng = _rng(seed)
    n, t = spec.kind.n, spec.kind.t
    keep = rng.random(n) < t
    pts = iter(spec.ground.sample_points(rng, int(keep.sum())))
    return HatVector([next(pts) if k else DELTA for k in keep])


def sample_binomial(spec: ProcessSpec, seed) -> CountingMeasure:
    """Draw the retained count, then that many iid ``mu``-points."""
    if not isinstance(spec.kind, Binomial):
        raise TypeError("sample_binomial needs a Binomial process")
    rng = _rng(seed)
    k = int(rng.binomial(spec.kind.n, spec.kind.t))
    return CountingMeasure(spec.ground.sample_points(rng, k))


def sample_poisson(spec: ProcessSpec, seed) -> CountingMeasure:
    """Draw the total count from Poisson(t), then that many iid ``mu``-points."""
    if not isinstance(spec.kind, Poisson):
        raise TypeError("sample_poisson needs a Poisson process")
    rng = _rng(seed)
    k = int(rng.poisson(spec.kind.t))
    return CountingMeasure(spec.ground.sample_points(rng, k))


def sample(spec: ProcessSpec, seed) -> CountingMeasure | HatVector:
    if isinstance(spec.kind, Hat):
        return sample_hat(spec, seed)
    if isinstance(spec.kind, Binomial):
        return sample_binomial(spec, seed)
    return sample_poisson(spec, seed)
