"""Monte Carlo checks of the large deviation inequalities for convex distances.

The inequalities bound ``P(X in A) * P(X not in A_s)`` by ``exp(-s^2 / 4)``.
A Monte Carlo run can only falsify them, so a row is flagged as a violation
only when the product of the two *lower* confidence bounds already exceeds
the bound.

Trials are seeded per index (see :mod:`convexdist.samplers`) and evaluated in
contiguous chunks; chunk results are concatenated in index order, so output
does not depend on the number of worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.stats import binomtest

from .distances import convergence_gap_bound, d_T_binomial, d_T_classical, d_T_pi
from .events import EventSet, HatEventSet, HatPreimage, event_contains
from .measures import CountingMeasure, HatVector, project_hat
from .samplers import Binomial, Hat, Poisson, ProcessSpec, sample, trial_rng

MEMBERSHIP_SLACK = 1e-9
STREAM_EVENT = 1
STREAM_DISTANCE = 2

DISTANCE_KINDS = ("classical", "binomial", "poisson_pi")


def estimate_probability(
    source: Callable[[int], object],
    predicate: Callable[[object], bool],
    trials: int,
    confidence: float = 0.99,
) -> tuple[float, float, float]:
    """Hit frequency of ``predicate`` over ``source(0..trials-1)`` with a Wilson interval."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    hits = sum(bool(predicate(source(i))) for i in range(trials))
    return wilson(hits, trials, confidence)


def wilson(hits: int, trials: int, confidence: float) -> tuple[float, float, float]:
    ci = binomtest(hits, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return hits / trials, float(ci.low), float(ci.high)


@dataclass(frozen=True)
class LdiExperiment:
    process: ProcessSpec
    event: EventSet | HatEventSet | HatPreimage
    distance_kind: str
    s_grid: tuple[float, ...]
    trials: int
    seed: int
    confidence: float = 0.99

    def __post_init__(self):
        object.__setattr__(self, "s_grid", tuple(float(s) for s in self.s_grid))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(s < 0 or not math.isfinite(s) for s in self.s_grid) or not self.s_grid:
            raise ValueError("s_grid needs finite nonnegative values")
        if not 0 < self.confidence < 1:
            raise ValueError("confidence must lie in (0, 1)")
        if self.distance_kind not in DISTANCE_KINDS:
            raise ValueError(f"distance_kind must be one of {DISTANCE_KINDS}")
        kind = self.process.kind
        hat_event = isinstance(self.event, (HatEventSet, HatPreimage))
        if self.distance_kind == "classical":
            if not (isinstance(kind, Hat) and hat_event):
                raise ValueError("classical distance needs a Hat process and a hat event")
            if self.event.n != kind.n:
                raise ValueError("hat event length differs from the process n")
        else:
            if hat_event:
                raise ValueError(f"{self.distance_kind} distance needs a measure event")
            if self.distance_kind == "binomial" and isinstance(kind, Poisson):
                raise ValueError("binomial distance needs a Binomial or Hat process")


@dataclass(frozen=True)
class LdiRow:
    s: float
    p_A: float
    p_A_lo: float
    p_A_hi: float
    p_notAs: float
    p_notAs_lo: float
    p_notAs_hi: float
    bound: float

    @property
    def product_hi(self) -> float:
        return self.p_A_hi * self.p_notAs_hi

    @property
    def violated(self) -> bool:
        return self.p_A_lo * self.p_notAs_lo > self.bound


@dataclass
class LdiRun:
    rows: list[LdiRow]
    in_event: np.ndarray  # per trial, event stream
    distances: np.ndarray  # per trial, distance stream
    extra: dict = field(default_factory=dict)

    def indicators(self, s_grid: Sequence[float]) -> np.ndarray:
        """Per-trial parallel-set membership, shape (len(s_grid), trials)."""
        return np.array([parallel_indicator(self.distances, s) for s in s_grid])


def parallel_indicator(distances: np.ndarray, s: float) -> np.ndarray:
    return distances <= s + MEMBERSHIP_SLACK


def distance_of(sample_value, event, kind: str, n: int | None = None) -> float:
    """The chosen convex distance from one sample to the event."""
    if kind == "classical":
        # permutation invariant: evaluate on the sorted representative
        return d_T_classical(HatVector(sample_value).sorted(), event).value
    xi = project_hat(sample_value) if isinstance(sample_value, HatVector) else sample_value
    if kind == "poisson_pi":
        return d_T_pi(xi, event).value
    if kind == "binomial":
        return d_T_binomial(xi, event, n).value
    raise ValueError(f"unknown distance kind {kind!r}")


def in_parallel_set(xi, A, s: float, distance_kind: str, n: int | None = None) -> bool:
    """Whether the distance from ``xi`` to ``A`` is at most ``s`` (up to solver slack)."""
    return distance_of(xi, A, distance_kind, n) <= s + MEMBERSHIP_SLACK


def _contains(event, value) -> bool:
    if isinstance(event, (HatEventSet, HatPreimage)):
        return event.contains(value)
    xi = project_hat(value) if isinstance(value, HatVector) else value
    return event_contains(event, xi)


def _memo_key(value):
    if isinstance(value, HatVector):
        return value.sorted()
    return value


def _chunk(job):
    exp, stream, start, stop, kinds = job
    n = getattr(exp.process.kind, "n", None)
    memo: dict = {}
    out = []
    for i in range(start, stop):
        value = sample(exp.process, trial_rng(exp.seed, stream, i))
        if stream == STREAM_EVENT:
            out.append(_contains(exp.event, value))
            continue
        key = _memo_key(value)
        if key not in memo:
            row = []
            for kind, event in kinds:
                row.append(distance_of(value, event, kind, n))
            memo[key] = row
        out.append(memo[key])
    return out


def _run_stream(exp: LdiExperiment, stream: int, kinds, workers: int) -> list:
    trials = exp.trials
    if workers <= 1:
        return _chunk((exp, stream, 0, trials, kinds))
    bounds = np.linspace(0, trials, workers * 4 + 1).astype(int)
    jobs = [(exp, stream, int(a), int(b), kinds) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_chunk, jobs))
    return [v for part in parts for v in part]


def _rows(exp: LdiExperiment, in_event: np.ndarray, dist: np.ndarray) -> list[LdiRow]:
    hits_a = int(in_event.sum())
    p_a, lo_a, hi_a = wilson(hits_a, exp.trials, exp.confidence)
    rows = []
    for s in sorted(exp.s_grid):
        outside = int((~parallel_indicator(dist, s)).sum())
        p_o, lo_o, hi_o = wilson(outside, exp.trials, exp.confidence)
        rows.append(LdiRow(s, p_a, lo_a, hi_a, p_o, lo_o, hi_o, math.exp(-s * s / 4)))
    return rows


def run_ldi(exp: LdiExperiment, workers: int = 1) -> LdiRun:
    """Estimate both probabilities per ``s`` on independent trial streams."""
    kinds = [(exp.distance_kind, exp.event)]
    in_event = np.array(_run_stream(exp, STREAM_EVENT, kinds, workers), dtype=bool)
    dist = np.array([r[0] for r in _run_stream(exp, STREAM_DISTANCE, kinds, workers)])
    return LdiRun(_rows(exp, in_event, dist), in_event, dist)


def run_iid_ldi(
    event: HatEventSet | HatPreimage,
    spec: ProcessSpec,
    s_grid: Sequence[float],
    trials: int,
    seed: int,
    confidence: float = 0.99,
    workers: int = 1,
) -> LdiRun:
    """The iid-coordinate inequality with the classical distance on hat vectors.

    Each distance-stream trial also evaluates the binomial distance of the
    projected sample to the projected event; ``extra`` records the projected
    distances, the number of (trial, s) pairs where the two parallel-set
    indicators disagree, and the rows of the projected run.
    """
    exp = LdiExperiment(spec, event, "classical", tuple(s_grid), trials, seed, confidence)
    projected = event.projected()
    kinds = [("classical", event), ("binomial", projected)]
    in_event = np.array(_run_stream(exp, STREAM_EVENT, kinds, workers), dtype=bool)
    both = np.array(_run_stream(exp, STREAM_DISTANCE, kinds, workers), dtype=float).reshape(trials, 2)
    classical, proj = both[:, 0], both[:, 1]
    mismatches = sum(
        int((parallel_indicator(classical, s) != parallel_indicator(proj, s)).sum()) for s in exp.s_grid
    )
    proj_rows = _rows(exp, in_event, proj)
    run = LdiRun(_rows(exp, in_event, classical), in_event, classical)
    run.extra = {
        "projected_distances": proj,
        "indicator_mismatches": mismatches,
        "projected_rows": proj_rows,
        "max_abs_difference": float(np.max(np.abs(classical - proj))) if trials else 0.0,
    }
    return run


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    d_pi: float
    d_n: float
    bound: float

    @property
    def gap(self) -> float:
        return self.d_n - self.d_pi


def run_convergence(xi: CountingMeasure, A: EventSet, n_grid: Sequence[int]) -> list[ConvergenceRow]:
    """Binomial distance against its Poisson-type limit along growing ``n``."""
    if any(n <= xi.mass for n in n_grid):
        raise ValueError(f"every n must exceed xi(E) = {xi.mass}")
    d_pi = d_T_pi(xi, A).value
    return [
        ConvergenceRow(int(n), d_pi, d_T_binomial(xi, A, int(n)).value, convergence_gap_bound(xi, A, int(n)))
        for n in sorted(n_grid)
    ]
