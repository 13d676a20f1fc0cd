"""Convex distances on hat vectors and on counting measures.

All three distances are sup-min problems over nonnegative weights in a unit
ball and are solved as minimum-norm points:

* classical: vertices are the incidence vectors ``1(x_i != y_i)``;
* Poisson-type: vertices are ``D(x) / sqrt(xi(x))`` for each representative
  drop ``D``, after the substitution ``beta(x) = alpha(x) sqrt(xi(x))``;
* binomial-type: the same vertices with one appended coordinate
  ``(nu(E) - xi(E))_+ / sqrt(n - xi(E))`` carrying the ``(1 - |alpha|^2)^(1/2)``
  direction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .events import (
    DEFAULT_ENUMERATION_CAP,
    CountLower,
    CountUpper,
    EventSet,
    Explicit,
    HatEventSet,
    HatPreimage,
    InfeasibleEventError,
    Representative,
    arrangements,
    representative_reduction,
)
from .measures import DELTA, CountingMeasure, HatVector, WeightFunction, project_hat
from .solver import MAX_ORACLE_DIM, min_norm_point, sphere_grid_oracle

DEFAULT_TOL = 1e-9
MAX_CLASSICAL_VERTICES = 200_000


@dataclass(frozen=True)
class DistanceResult:
    value: float
    alpha_star: WeightFunction  # keyed by atoms of xi, or by coordinate for classical
    extra_weight: float
    coeffs: np.ndarray  # convex weights over ``vertices``
    duality_gap: float  # value minus the objective attained by alpha_star
    vertices: np.ndarray

    @property
    def certificate_norm(self) -> float:
        if self.vertices.shape[1] == 0:
            return 0.0
        return float(np.linalg.norm(self.coeffs @ self.vertices))


def _solve(vertices: np.ndarray, keys: Sequence, tol: float, extra: bool) -> DistanceResult:
    m, dim = vertices.shape
    if dim == 0 or np.any(~vertices.any(axis=1)):
        coeffs = np.zeros(m)
        coeffs[int(np.argmin(vertices.sum(axis=1)))] = 1.0
        return DistanceResult(0.0, WeightFunction(), 0.0, coeffs, 0.0, vertices)
    res = min_norm_point(vertices, tol=tol)
    direction = res.point / res.norm
    attained = float(np.min(vertices @ direction))
    weights = direction[: len(keys)]
    alpha = WeightFunction({k: float(w) for k, w in zip(keys, weights) if w > 0})
    return DistanceResult(
        value=res.norm,
        alpha_star=alpha,
        extra_weight=float(direction[-1]) if extra else 0.0,
        coeffs=res.coeffs,
        duality_gap=max(0.0, res.norm - attained),
        vertices=vertices,
    )


# --------------------------------------------------------------------------
# Classical distance on hat vectors
# --------------------------------------------------------------------------


def _preimage_incidences(x: Sequence, A: HatPreimage) -> list[tuple[int, ...]]:
    """Minimal incidence vectors of ``{y : pi(y) in A}`` seen from ``x``."""
    n = len(x)
    ev = A.event
    if isinstance(ev, Explicit):
        vecs = set()
        for nu in ev.measures:
            for y in arrangements(nu, n):
                vecs.add(tuple(int(a != b) for a, b in zip(x, y)))
                if len(vecs) > MAX_CLASSICAL_VERTICES:
                    raise ValueError("explicit preimage too large to enumerate")
        if not vecs:
            raise InfeasibleEventError("no member of the event fits in n coordinates")
        return sorted(vecs)
    in_b = [i for i, p in enumerate(x) if p is not DELTA and ev.region.contains(p)]
    if isinstance(ev, CountUpper):
        # move (#in B - k)_+ of the in-B coordinates to DELTA
        pool, r = in_b, max(0, len(in_b) - ev.k)
    elif isinstance(ev, CountLower):
        if ev.k > n:
            raise InfeasibleEventError("cannot place k points in n coordinates")
        if ev.k > len(in_b) and not ev.region.has_point_outside(()):
            raise InfeasibleEventError("count-lower event on an empty region")
        # move (k - #in B)_+ of the other coordinates into B
        pool = [i for i in range(n) if i not in set(in_b)]
        r = max(0, ev.k - len(in_b))
    else:
        raise TypeError(f"unknown event {ev!r}")
    if math.comb(len(pool), r) > MAX_CLASSICAL_VERTICES:
        raise ValueError("preimage incidence set too large to enumerate")
    out = []
    for chosen in itertools.combinations(pool, r):
        u = [0] * n
        for i in chosen:
            u[i] = 1
        out.append(tuple(u))
    return out


def d_T_classical(x: HatVector | Sequence, A: HatEventSet | HatPreimage, tol: float = DEFAULT_TOL) -> DistanceResult:
    """sup over unit ``alpha >= 0`` of inf over ``y in A`` of ``sum_i alpha_i 1(x_i != y_i)``."""
    x = tuple(x)
    n = len(x)
    if isinstance(A, HatEventSet):
        if A.n != n:
            raise ValueError(f"event vectors have length {A.n}, x has {n}")
        incid = sorted({tuple(int(a != b) for a, b in zip(x, y)) for y in A.vectors})
    elif isinstance(A, HatPreimage):
        if A.n != n:
            raise ValueError(f"event is over length {A.n}, x has {n}")
        incid = _preimage_incidences(x, A)
    else:
        raise TypeError(f"unknown hat event {A!r}")
    if not incid:
        raise ValueError("empty hat event")
    V = np.asarray(incid, dtype=float).reshape(len(incid), n)
    return _solve(V, list(range(n)), tol, extra=False)


# --------------------------------------------------------------------------
# Distances on counting measures
# --------------------------------------------------------------------------


def difference_vector(xi: CountingMeasure, D: CountingMeasure) -> np.ndarray:
    """``D(x) / sqrt(xi(x))`` over the atoms of ``xi``, in canonical order."""
    if not D <= xi:
        raise ValueError(f"{D!r} is not a sub-multiset of {xi!r}")
    return np.array([D[p] / math.sqrt(m) for p, m in xi.atoms], dtype=float)


def _vertices(xi: CountingMeasure, reps: list[Representative]) -> np.ndarray:
    V = np.empty((len(reps), len(xi)))
    for i, r in enumerate(reps):
        V[i] = difference_vector(xi, r.dropped)
    return V


def d_T_pi(
    xi: CountingMeasure,
    A: EventSet,
    tol: float = DEFAULT_TOL,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> DistanceResult:
    """sup over ``|alpha|_{2,xi} <= 1`` of inf over ``nu in A`` of the integral of alpha over xi \\ nu."""
    reps = representative_reduction(xi, A, cap=cap)
    V = _vertices(xi, reps)
    res = _solve(V, [p for p, _ in xi.atoms], tol, extra=False)
    return _rescale(res, xi)


def _rescale(res: DistanceResult, xi: CountingMeasure) -> DistanceResult:
    # beta(x) = alpha(x) sqrt(xi(x))  ->  alpha
    alpha = WeightFunction({p: b / math.sqrt(xi[p]) for p, b in res.alpha_star.items()})
    return DistanceResult(res.value, alpha, res.extra_weight, res.coeffs, res.duality_gap, res.vertices)


def binomial_offsets(xi: CountingMeasure, reps: list[Representative], n: int) -> np.ndarray:
    """Per-representative coefficient ``(min_mass - xi(E))_+ / sqrt(n - xi(E))``."""
    if xi.mass > n:
        raise InfeasibleEventError(f"xi(E) = {xi.mass} exceeds n = {n}")
    bad = [r for r in reps if r.min_mass > n]
    if bad:
        raise InfeasibleEventError(f"event needs nu(E) = {bad[0].min_mass} > n = {n}")
    free = n - xi.mass
    exc = np.array([r.excess(xi) for r in reps], dtype=float)
    if free == 0:
        return np.zeros(len(reps))  # every excess is 0 here since min_mass <= n
    return exc / math.sqrt(free)


def d_T_binomial(
    xi: CountingMeasure,
    A: EventSet,
    n: int,
    tol: float = DEFAULT_TOL,
    cap: int = DEFAULT_ENUMERATION_CAP,
    drop_infeasible: bool = False,
) -> DistanceResult:
    """Binomial-process convex distance with parameter ``n``.

    With ``drop_infeasible`` the event is intersected with ``{nu(E) <= n}``
    instead of raising when some representative needs more than ``n`` points.
    """
    reps = representative_reduction(xi, A, cap=cap)
    if drop_infeasible:
        reps = [r for r in reps if r.min_mass <= n]
        if not reps:
            raise InfeasibleEventError(f"no member of the event has at most {n} points")
    c = binomial_offsets(xi, reps, n)
    V = np.column_stack([_vertices(xi, reps), c])
    res = _solve(V, [p for p, _ in xi.atoms], tol, extra=True)
    return _rescale(res, xi)


def convergence_gap_bound(
    xi: CountingMeasure, A: EventSet, n: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> float:
    """Upper bound on ``d_T^n - d_T^pi``, which decays like ``(n - xi(E))^(-1/2)``."""
    if n <= xi.mass:
        raise ValueError(f"need n > xi(E) = {xi.mass}, got n = {n}")
    reps = representative_reduction(xi, A, cap=cap)
    worst = max(r.excess(xi) for r in reps)
    return worst / math.sqrt(n - xi.mass)


def check_projection_compatibility(
    x: HatVector, A: HatEventSet | HatPreimage, tol: float = DEFAULT_TOL
) -> tuple[float, float, float]:
    """Classical distance in the hat space against the binomial distance of the projections.

    For symmetric events the two values coincide.
    """
    lhs = d_T_classical(x, A, tol=tol).value
    rhs = d_T_binomial(project_hat(x), A.projected(), len(x), tol=tol, drop_infeasible=True).value
    return lhs, rhs, abs(lhs - rhs)


def oracle_settings(dim: int) -> tuple[int, int]:
    """(resolution, refinements) for :func:`sphere_grid_oracle` by dimension."""
    return {1: (2, 0), 2: (400, 40), 3: (80, 40), 4: (30, 40), 5: (14, 40), 6: (9, 40)}[dim]


def oracle_value(result: DistanceResult) -> float | None:
    """Brute-force value for a computed distance, or None above the oracle's dimension limit."""
    V = result.vertices
    if V.shape[1] == 0:
        return 0.0
    dim = V.shape[1]
    if dim > MAX_ORACLE_DIM:
        return None
    res, ref = oracle_settings(dim)
    return sphere_grid_oracle(V, res, refinements=ref)
