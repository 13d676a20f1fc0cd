"""Events in the space of counting measures and in the hat space.

Three event families are supported on counting measures: an explicit finite
list, ``{nu : nu(B) <= k}`` and ``{nu : nu(B) >= k}``. On hat vectors an event
is either an explicit symmetric set or the preimage under the projection of
one of the measure events.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .measures import (
    DELTA,
    CountingMeasure,
    HatVector,
    Region,
    count,
    multiset_difference,
    project_hat,
    symmetrize,
)


class EnumerationCapError(ValueError):
    """The reduction would enumerate sub-multisets of a measure that is too large."""


class InfeasibleEventError(ValueError):
    """The event has no member representable with the requested parameter n."""


@dataclass(frozen=True)
class Explicit:
    measures: tuple[CountingMeasure, ...]

    def __init__(self, measures: Iterable[CountingMeasure]):
        unique = sorted(set(measures), key=lambda m: (m.mass, m.to_text()))
        if not unique:
            raise ValueError("explicit event needs at least one measure")
        object.__setattr__(self, "measures", tuple(unique))


@dataclass(frozen=True)
class CountUpper:
    """``{nu : nu(region) <= k}``."""

    region: Region
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be nonnegative")


@dataclass(frozen=True)
class CountLower:
    """``{nu : nu(region) >= k}``."""

    region: Region
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be nonnegative")


EventSet = Explicit | CountUpper | CountLower


def event_contains(A: EventSet, nu: CountingMeasure) -> bool:
    if isinstance(A, Explicit):
        return nu in A.measures
    if isinstance(A, CountUpper):
        return count(nu, A.region) <= A.k
    if isinstance(A, CountLower):
        return count(nu, A.region) >= A.k
    raise TypeError(f"unknown event {A!r}")


# --------------------------------------------------------------------------
# Hat-space events
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class HatEventSet:
    """A finite permutation-closed set of hat vectors of common length ``n``."""

    vectors: tuple[HatVector, ...]

    def __init__(self, vectors: Iterable[HatVector], check: bool = True):
        vectors = tuple(sorted(set(vectors), key=HatVector.sort_key))
        if not vectors:
            raise ValueError("hat event needs at least one vector")
        if check and symmetrize(vectors) != vectors:
            raise ValueError("hat event set is not closed under permutations")
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "_members", frozenset(vectors))

    @classmethod
    def from_seeds(cls, seeds: Iterable[HatVector]) -> "HatEventSet":
        return cls(symmetrize(seeds), check=False)

    @property
    def n(self) -> int:
        return self.vectors[0].n

    def contains(self, y: HatVector) -> bool:
        return HatVector(y) in self._members

    def projected(self) -> Explicit:
        return Explicit(project_hat(y) for y in self.vectors)


@dataclass(frozen=True)
class HatPreimage:
    """All ``y`` in the hat space of length ``n`` whose projection lies in ``event``."""

    event: EventSet
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")

    def contains(self, y: HatVector) -> bool:
        return len(y) == self.n and event_contains(self.event, project_hat(y))

    def projected(self) -> EventSet:
        return self.event


HatEvent = HatEventSet | HatPreimage


def arrangements(nu: CountingMeasure, n: int) -> Iterator[HatVector]:
    """Distinct hat vectors of length ``n`` projecting to ``nu``."""
    if nu.mass > n:
        return
    base = list(nu.elements()) + [DELTA] * (n - nu.mass)
    seen = set()
    for perm in itertools.permutations(base):
        if perm not in seen:
            seen.add(perm)
            yield HatVector(perm)


# --------------------------------------------------------------------------
# Finite reduction of the infimum over an event
# --------------------------------------------------------------------------

DEFAULT_ENUMERATION_CAP = 16


@dataclass(frozen=True)
class Representative:
    """A value ``D = xi \\ nu`` reachable in the event, with the least ``nu(E)``."""

    dropped: CountingMeasure
    min_mass: int

    def excess(self, xi: CountingMeasure) -> int:
        return max(0, self.min_mass - xi.mass)


def sub_multisets(xi: CountingMeasure, size: int | None = None) -> Iterator[CountingMeasure]:
    """All sub-multisets of ``xi`` (of total mass ``size`` if given), canonical order."""
    atoms = xi.atoms

    def rec(i: int, left: int | None, acc: list):
        if i == len(atoms):
            if left is None or left == 0:
                yield CountingMeasure(dict(acc))
            return
        p, m = atoms[i]
        rest = sum(mm for _, mm in atoms[i + 1 :])
        lo, hi = 0, m
        if left is not None:
            lo, hi = max(0, left - rest), min(m, left)
        for c in range(lo, hi + 1):
            if c:
                acc.append((p, c))
            yield from rec(i + 1, None if left is None else left - c, acc)
            if c:
                acc.pop()

    if size is not None and not 0 <= size <= xi.mass:
        return
    yield from rec(0, size, [])


def _check_cap(mass: int, cap: int):
    if mass > cap:
        raise EnumerationCapError(f"enumeration over mass {mass} exceeds cap {cap}")


def prune_dominated(xi: CountingMeasure, reps: Iterable[Representative]) -> list[Representative]:
    """Drop representatives that can never be the unique minimizer for alpha >= 0.

    ``(D, m)`` is dominated by ``(D', m')`` when ``D' <= D`` pointwise and the
    mass excess over ``xi(E)`` of ``m'`` is no larger than that of ``m``.
    Of exact ties only the one with least ``min_mass`` (then canonical order)
    survives. The output is sorted canonically.
    """
    best: dict[CountingMeasure, int] = {}
    for r in reps:
        if r.dropped not in best or r.min_mass < best[r.dropped]:
            best[r.dropped] = r.min_mass
    cands = sorted(
        (Representative(d, m) for d, m in best.items()),
        key=lambda r: (r.excess(xi), r.dropped.mass, r.dropped.to_text(), r.min_mass),
    )
    kept: list[Representative] = []
    for r in cands:
        e = r.excess(xi)
        if any(k.dropped <= r.dropped and k.excess(xi) <= e for k in kept):
            continue
        kept.append(r)
    kept.sort(key=lambda r: (r.dropped.to_text(), r.min_mass))
    return kept


def representative_reduction(
    xi: CountingMeasure, A: EventSet, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[Representative]:
    """Finitely many representatives on which the infimum over ``A`` is attained.

    For every ``alpha >= 0`` and ``n``, the infimum over ``nu in A`` of the
    binomial-process objective equals the minimum over the returned list.
    Count events are enumerated structurally: for ``nu(B) <= k`` only drops of
    exactly ``(xi(B) - k)_+`` atoms inside ``B`` are needed; for
    ``nu(B) >= k`` only drops outside ``B`` matter, each one lowering the
    number of atoms that must be added inside ``B``. ``cap`` bounds the mass
    of the part of ``xi`` that is enumerated.
    """
    if isinstance(A, Explicit):
        reps = (Representative(multiset_difference(xi, nu), nu.mass) for nu in A.measures)
        return prune_dominated(xi, reps)

    inside = CountingMeasure({p: m for p, m in xi.atoms if A.region.contains(p)})
    outside = multiset_difference(xi, inside)
    if isinstance(A, CountUpper):
        _check_cap(inside.mass, cap)
        r = max(0, inside.mass - A.k)
        # equal-size drops with zero excess: already an antichain
        return [Representative(d, xi.mass - r) for d in sub_multisets(inside, r)]
    if isinstance(A, CountLower):
        _check_cap(outside.mass, cap)
        need = max(0, A.k - inside.mass)
        if need and not A.region.has_point_outside(()):
            raise InfeasibleEventError("count-lower event on an empty region")
        # excess need - s strictly falls as the drop size s grows: an antichain
        reps = [
            Representative(d, xi.mass - s + need)
            for s in range(0, min(need, outside.mass) + 1)
            for d in sub_multisets(outside, s)
        ]
        reps.sort(key=lambda r: (r.dropped.to_text(), r.min_mass))
        return reps
    raise TypeError(f"unknown event {A!r}")
