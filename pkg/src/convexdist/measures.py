"""Finite counting measures over a ground space, and the hat space E + {DELTA}.

Ground points are plain hashable values: alphabet symbols are ``int`` indices
(``str`` labels are accepted too, which keeps hand-written fixtures readable)
and unit-cube points are tuples of floats. Points are compared exactly as
stored.
"""

from __future__ import annotations

import enum
import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Iterator, Mapping, Sequence

import numpy as np

Point = Hashable


class Hat(enum.Enum):
    """The artificial point collecting deleted coordinates."""

    DELTA = "*"

    def __repr__(self) -> str:
        return "DELTA"


DELTA = Hat.DELTA


# --------------------------------------------------------------------------
# Ground spaces and regions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteAlphabet:
    """Symbols ``0..M-1`` with probability weights."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) < 1:
            raise ValueError("alphabet needs at least one symbol")
        if any(x < 0 for x in w):
            raise ValueError("alphabet weights must be nonnegative")
        if abs(math.fsum(w) - 1.0) > 1e-12:
            raise ValueError(f"alphabet weights sum to {math.fsum(w)!r}, not 1")

    @classmethod
    def uniform(cls, size: int) -> "FiniteAlphabet":
        return cls(tuple([1.0 / size] * size))

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def kind(self) -> str:
        return "alphabet"

    def mass(self, region: "Region") -> float:
        if not isinstance(region, AlphabetRegion):
            raise ValueError("alphabet ground space needs an AlphabetRegion")
        return math.fsum(self.weights[s] for s in region.symbols if 0 <= s < self.size)

    def sample_points(self, rng: np.random.Generator, k: int) -> list[int]:
        idx = rng.choice(self.size, size=k, p=np.asarray(self.weights))
        return [int(i) for i in idx]


@dataclass(frozen=True)
class UnitCube:
    """``[0, 1]^d`` with the uniform probability."""

    dimension: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("cube dimension must be >= 1")

    @property
    def kind(self) -> str:
        return "cube"

    def mass(self, region: "Region") -> float:
        if not isinstance(region, Box) or len(region.lo) != self.dimension:
            raise ValueError("cube ground space needs a Box of matching dimension")
        vol = 1.0
        for a, b in zip(region.lo, region.hi):
            vol *= max(0.0, min(b, 1.0) - max(a, 0.0))
        return vol

    def sample_points(self, rng: np.random.Generator, k: int) -> list[tuple[float, ...]]:
        pts = rng.random((k, self.dimension))
        return [tuple(float(c) for c in row) for row in pts]


GroundSpace = FiniteAlphabet | UnitCube


@dataclass(frozen=True)
class AlphabetRegion:
    symbols: frozenset

    def __init__(self, symbols: Iterable[Point]):
        object.__setattr__(self, "symbols", frozenset(symbols))

    def contains(self, point: Point) -> bool:
        if isinstance(point, tuple):
            raise ValueError(f"alphabet region cannot test cube point {point!r}")
        return point in self.symbols

    def has_point_outside(self, taken: Iterable[Point]) -> bool:
        return bool(self.symbols - set(taken))


@dataclass(frozen=True)
class Box:
    """Closed axis-aligned box ``[lo_1, hi_1] x ... x [lo_d, hi_d]``."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(a) for a in self.lo)
        hi = tuple(float(b) for b in self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if len(lo) != len(hi) or not lo:
            raise ValueError("box bounds must have equal, positive length")
        if any(a > b for a, b in zip(lo, hi)):
            raise ValueError("box bounds need lo <= hi")

    def contains(self, point: Point) -> bool:
        if not isinstance(point, tuple) or len(point) != len(self.lo):
            raise ValueError(f"box region cannot test point {point!r}")
        return all(a <= c <= b for a, c, b in zip(self.lo, point, self.hi))

    def has_point_outside(self, taken: Iterable[Point]) -> bool:
        if self.lo != self.hi:
            return True
        return self.lo not in set(taken)


Region = AlphabetRegion | Box


# --------------------------------------------------------------------------
# Counting measures
# --------------------------------------------------------------------------


def _point_key(p: Point):
    if p is DELTA:
        return (1,)
    return (0, p)


class CountingMeasure(Mapping):
    """Immutable finite counting measure, i.e. a multiset of ground points.

    Behaves as a read-only mapping ``point -> multiplicity`` that returns 0
    for points outside the support. Atoms are kept in sorted order so that
    equality, hashing and text serialization are canonical.
    """

    __slots__ = ("_atoms", "_map", "_hash")

    def __init__(self, data: Mapping[Point, int] | Iterable[Point] | None = None):
        if data is None:
            counts: Counter = Counter()
        elif isinstance(data, Mapping):
            counts = Counter()
            for p, m in data.items():
                m = int(m)
                if m < 0:
                    raise ValueError(f"negative multiplicity {m} at {p!r}")
                if m:
                    counts[p] += m
        else:
            counts = Counter(data)
        if DELTA in counts:
            raise ValueError("DELTA is not a ground point")
        self._atoms = tuple(sorted(counts.items(), key=lambda kv: _point_key(kv[0])))
        self._map = dict(self._atoms)
        self._hash = hash(self._atoms)

    def __getitem__(self, point: Point) -> int:
        return self._map.get(point, 0)

    def __iter__(self) -> Iterator[Point]:
        return (p for p, _ in self._atoms)

    def __len__(self) -> int:
        return len(self._atoms)

    def __contains__(self, point: object) -> bool:
        return point in self._map

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CountingMeasure):
            return self._atoms == other._atoms
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __le__(self, other: "CountingMeasure") -> bool:
        return all(m <= other[p] for p, m in self._atoms)

    def __add__(self, other: "CountingMeasure") -> "CountingMeasure":
        c = Counter(self._map)
        c.update(other._map)
        return CountingMeasure(c)

    def __sub__(self, other: "CountingMeasure") -> "CountingMeasure":
        return multiset_difference(self, other)

    def __repr__(self) -> str:
        return f"CountingMeasure({{{self.to_text()}}})"

    @property
    def atoms(self) -> tuple[tuple[Point, int], ...]:
        return self._atoms

    @property
    def mass(self) -> int:
        return sum(m for _, m in self._atoms)

    def elements(self) -> Iterator[Point]:
        for p, m in self._atoms:
            for _ in range(m):
                yield p

    def restrict(self, region: Region) -> "CountingMeasure":
        return CountingMeasure({p: m for p, m in self._atoms if region.contains(p)})

    def to_text(self) -> str:
        return ",".join(f"{format_point(p)}:{m}" for p, m in self._atoms)

    @classmethod
    def from_text(cls, text: str) -> "CountingMeasure":
        text = text.strip()
        if not text:
            return cls()
        data: Counter = Counter()
        for item in _split_top_level(text):
            head, sep, mult = item.rpartition(":")
            if not sep:
                raise ValueError(f"expected point:multiplicity, got {item!r}")
            m = int(mult)
            if m < 1:
                raise ValueError(f"multiplicity must be positive in {item!r}")
            data[parse_point(head)] += m
        return cls(data)


EMPTY = CountingMeasure()

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def format_point(p: Point) -> str:
    if p is DELTA:
        return DELTA.value
    if isinstance(p, tuple):
        return "(" + " ".join(f"{float(c):.17g}" for c in p) + ")"
    if isinstance(p, (int, np.integer)):
        return str(int(p))
    if isinstance(p, str) and _IDENT.match(p):
        return p
    raise ValueError(f"point {p!r} has no text form")


def parse_point(token: str) -> Any:
    token = token.strip()
    if token == DELTA.value:
        return DELTA
    if token.startswith("(") and token.endswith(")"):
        return tuple(float(c) for c in token[1:-1].split())
    if re.fullmatch(r"[+-]?\d+", token):
        return int(token)
    if _IDENT.match(token):
        return token
    raise ValueError(f"cannot parse point {token!r}")


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def multiset_difference(xi: CountingMeasure, nu: CountingMeasure) -> CountingMeasure:
    """Atom-wise positive part ``(xi(x) - nu(x))_+`` over the support of ``xi``."""
    return CountingMeasure({p: m - nu[p] for p, m in xi.atoms if m > nu[p]})


def count(xi: CountingMeasure, region: Region) -> int:
    return sum(m for p, m in xi.atoms if region.contains(p))


# --------------------------------------------------------------------------
# Weight functions
# --------------------------------------------------------------------------


class WeightFunction(Mapping):
    """Nonnegative function on ground points, zero off its stored keys."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[Any, float] | None = None):
        vals = {k: float(v) for k, v in (values or {}).items()}
        if any(v < 0 or not math.isfinite(v) for v in vals.values()):
            raise ValueError("weights must be finite and nonnegative")
        self._values = vals

    def __getitem__(self, point) -> float:
        return self._values.get(point, 0.0)

    def __iter__(self):
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __repr__(self) -> str:
        return f"WeightFunction({self._values!r})"


def integrate(alpha: Mapping[Point, float], xi: CountingMeasure) -> float:
    return math.fsum(alpha.get(p, 0.0) * m for p, m in xi.atoms)


def weighted_norm_sq(alpha: Mapping[Point, float], xi: CountingMeasure) -> float:
    return math.fsum(alpha.get(p, 0.0) ** 2 * m for p, m in xi.atoms)


# --------------------------------------------------------------------------
# Hat vectors
# --------------------------------------------------------------------------


@dataclass(frozen=True, order=False)
class HatVector:
    """A point of ``(E + {DELTA})^n``."""

    entries: tuple

    def __init__(self, entries: Sequence[Any]):
        entries = tuple(entries)
        if len(entries) < 1:
            raise ValueError("hat vector needs n >= 1 entries")
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def sort_key(self):
        return tuple(_point_key(p) for p in self.entries)

    def sorted(self) -> "HatVector":
        return HatVector(sorted(self.entries, key=_point_key))

    def project(self) -> CountingMeasure:
        return project_hat(self)

    def to_text(self) -> str:
        return ",".join(format_point(p) for p in self.entries)

    @classmethod
    def from_text(cls, text: str) -> "HatVector":
        return cls([parse_point(t) for t in _split_top_level(text)])

    def __repr__(self) -> str:
        return f"HatVector({self.to_text()})"


def project_hat(x: HatVector | Sequence[Any]) -> CountingMeasure:
    """Delete the DELTA coordinates and count what remains."""
    return CountingMeasure(p for p in x if p is not DELTA)


def symmetrize(vectors: Iterable[HatVector]) -> tuple[HatVector, ...]:
    """Orbit closure under coordinate permutations, sorted and deduplicated."""
    vectors = list(vectors)
    if not vectors:
        return ()
    n = vectors[0].n
    if any(v.n != n for v in vectors):
        raise ValueError("all hat vectors must share the same length")
    orbit = set()
    for v in vectors:
        orbit.update(itertools.permutations(v.entries))
    return tuple(sorted((HatVector(e) for e in orbit), key=HatVector.sort_key))
