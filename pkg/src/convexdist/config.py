"""Experiment configuration: a sectioned, typed TOML file.

Example::

    [ground]
    kind = "alphabet"
    size = 10

    [process]
    kind = "binomial"
    n = 30
    t = 0.5

    [event]
    kind = "count_upper"
    symbols = [0, 1, 2, 3]
    k = 6

    [experiment]
    distance = "binomial"
    s_grid = [0.5, 1.0, 1.5, 2.0, 3.0]
    trials = 10000
    seed = 20240601

Unknown sections or keys are rejected. ``parse(serialize(cfg)) == cfg``.
"""

from __future__ import annotations

import dataclasses
import hashlib
import sys
import typing
from dataclasses import dataclass, field
from typing import Any

import tomli_w

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .events import CountLower, CountUpper, EventSet, Explicit, HatEventSet, HatPreimage
from .measures import AlphabetRegion, Box, CountingMeasure, FiniteAlphabet, HatVector, UnitCube
from .samplers import Binomial, Hat, Poisson, ProcessSpec


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GroundSection:
    kind: str = "alphabet"
    size: int | None = None
    weights: tuple[float, ...] | None = None
    dimension: int | None = None


@dataclass(frozen=True)
class ProcessSection:
    kind: str = "binomial"
    n: int | None = None
    t: float | None = None


@dataclass(frozen=True)
class EventSection:
    kind: str = "count_upper"
    symbols: tuple[int, ...] | None = None
    lo: tuple[float, ...] | None = None
    hi: tuple[float, ...] | None = None
    k: int | None = None
    measures: tuple[str, ...] | None = None
    hat_vectors: tuple[str, ...] | None = None


@dataclass(frozen=True)
class PointSection:
    measure: str | None = None
    hat: str | None = None


@dataclass(frozen=True)
class ExperimentSection:
    distance: str | None = None
    distances: tuple[str, ...] | None = None
    n: int | None = None
    s_grid: tuple[float, ...] | None = None
    n_grid: tuple[int, ...] | None = None
    trials: int | None = None
    seed: int | None = None
    confidence: float | None = None


@dataclass(frozen=True)
class OutputSection:
    path: str | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    ground: GroundSection = field(default_factory=GroundSection)
    process: ProcessSection | None = None
    event: EventSection | None = None
    point: PointSection | None = None
    experiment: ExperimentSection = field(default_factory=ExperimentSection)
    output: OutputSection = field(default_factory=OutputSection)

    # -- build domain objects ------------------------------------------------

    def ground_space(self):
        g = self.ground
        if g.kind == "alphabet":
            if g.weights is not None:
                if g.size is not None and g.size != len(g.weights):
                    raise ConfigError("ground.size disagrees with len(ground.weights)")
                return FiniteAlphabet(g.weights)
            if g.size is None:
                raise ConfigError("alphabet ground space needs size or weights")
            return FiniteAlphabet.uniform(g.size)
        if g.kind == "cube":
            if g.dimension is None:
                raise ConfigError("cube ground space needs dimension")
            return UnitCube(g.dimension)
        raise ConfigError(f"unknown ground.kind {g.kind!r}")

    def process_spec(self) -> ProcessSpec:
        p = self.process
        if p is None:
            raise ConfigError("missing [process] section")
        try:
            if p.kind == "binomial":
                kind = Binomial(_need(p.n, "process.n"), _need(p.t, "process.t"))
            elif p.kind == "hat":
                kind = Hat(_need(p.n, "process.n"), _need(p.t, "process.t"))
            elif p.kind == "poisson":
                kind = Poisson(_need(p.t, "process.t"))
            else:
                raise ConfigError(f"unknown process.kind {p.kind!r}")
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return ProcessSpec(self.ground_space(), kind)

    def region(self):
        e = self.event
        if self.ground.kind == "alphabet":
            return AlphabetRegion(_need(e.symbols, "event.symbols"))
        return Box(_need(e.lo, "event.lo"), _need(e.hi, "event.hi"))

    def measure_event(self) -> EventSet:
        e = self.event
        if e is None:
            raise ConfigError("missing [event] section")
        if e.kind == "count_upper":
            return CountUpper(self.region(), _need(e.k, "event.k"))
        if e.kind == "count_lower":
            return CountLower(self.region(), _need(e.k, "event.k"))
        if e.kind == "explicit":
            return Explicit(CountingMeasure.from_text(m) for m in _need(e.measures, "event.measures"))
        if e.kind == "hat_explicit":
            return self.hat_event(None).projected()
        raise ConfigError(f"unknown event.kind {e.kind!r}")

    def hat_event(self, n: int | None):
        e = self.event
        if e is None:
            raise ConfigError("missing [event] section")
        if e.kind == "hat_explicit":
            seeds = [HatVector.from_text(v) for v in _need(e.hat_vectors, "event.hat_vectors")]
            event = HatEventSet.from_seeds(seeds)
            if n is not None and event.n != n:
                raise ConfigError(f"hat vectors have length {event.n}, expected {n}")
            return event
        if n is None:
            raise ConfigError("a hat-space preimage event needs n")
        return HatPreimage(self.measure_event(), n)

    def point_measure(self) -> CountingMeasure:
        if self.point is None or self.point.measure is None:
            raise ConfigError("missing point.measure")
        return CountingMeasure.from_text(self.point.measure)

    def point_hat(self) -> HatVector:
        if self.point is None or self.point.hat is None:
            raise ConfigError("missing point.hat")
        return HatVector.from_text(self.point.hat)

    def with_overrides(self, **kw) -> "ExperimentConfig":
        exp = {k: v for k, v in kw.items() if k in ("seed", "trials") and v is not None}
        cfg = self
        if exp:
            cfg = dataclasses.replace(cfg, experiment=dataclasses.replace(cfg.experiment, **exp))
        if kw.get("out") is not None:
            cfg = dataclasses.replace(cfg, output=OutputSection(kw["out"]))
        return cfg

    def digest(self) -> str:
        """SHA-256 of the serialized config, output path excluded."""
        body = serialize(dataclasses.replace(self, output=OutputSection()))
        return hashlib.sha256(body.encode()).hexdigest()


def _need(value, name: str):
    if value is None:
        raise ConfigError(f"missing {name}")
    return value


# --------------------------------------------------------------------------
# parse / serialize
# --------------------------------------------------------------------------

_SECTIONS = {f.name: f for f in dataclasses.fields(ExperimentConfig)}


def _section_class(name: str):
    hint = typing.get_type_hints(ExperimentConfig)[name]
    args = [a for a in typing.get_args(hint) if a is not type(None)] or [hint]
    return args[0]


def _coerce(value: Any, hint, where: str):
    args = [a for a in typing.get_args(hint) if a is not type(None)]
    target = args[0] if args else hint
    origin = typing.get_origin(target)
    if origin is tuple:
        if not isinstance(value, list):
            raise ConfigError(f"{where}: expected a list")
        elem = typing.get_args(target)[0]
        return tuple(_coerce(v, elem, where) for v in value)
    if target is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: expected a number, got {value!r}")
        return float(value)
    if target is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
        return value
    if target is str:
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string, got {value!r}")
        return value
    raise ConfigError(f"{where}: unsupported type")


def from_dict(data: dict) -> ExperimentConfig:
    kwargs = {}
    for name, body in data.items():
        if name not in _SECTIONS:
            raise ConfigError(f"unknown section [{name}]")
        if not isinstance(body, dict):
            raise ConfigError(f"[{name}] must be a table")
        cls = _section_class(name)
        hints = typing.get_type_hints(cls)
        unknown = set(body) - set(hints)
        if unknown:
            raise ConfigError(f"unknown key(s) in [{name}]: {', '.join(sorted(unknown))}")
        kwargs[name] = cls(**{k: _coerce(v, hints[k], f"{name}.{k}") for k, v in body.items()})
    return ExperimentConfig(**kwargs)


def to_dict(cfg: ExperimentConfig) -> dict:
    out = {}
    for f in dataclasses.fields(cfg):
        section = getattr(cfg, f.name)
        if section is None:
            continue
        body = {}
        for sf in dataclasses.fields(section):
            v = getattr(section, sf.name)
            if v is not None:
                body[sf.name] = list(v) if isinstance(v, tuple) else v
        out[f.name] = body
    return out


def parse(text: str) -> ExperimentConfig:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    return from_dict(data)


def serialize(cfg: ExperimentConfig) -> str:
    return tomli_w.dumps(to_dict(cfg))


def load(path) -> ExperimentConfig:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        return parse(raw.decode())
    except UnicodeDecodeError as exc:
        raise ConfigError(f"config is not UTF-8: {exc}") from exc
