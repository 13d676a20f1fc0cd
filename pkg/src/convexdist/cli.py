"""Command line interface: ``dist``, ``ldi``, ``converge`` and ``selftest``.

Exit codes: 0 ok, 1 violation found, 2 configuration error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time

from . import __version__
from .config import ConfigError, ExperimentConfig, load
from .distances import d_T_binomial, d_T_classical, d_T_pi, oracle_value
from .events import EnumerationCapError, InfeasibleEventError
from .lab import LdiExperiment, run_convergence, run_iid_ldi, run_ldi
from .solver import ConvergenceError

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

LDI_COLUMNS = ["s", "p_A", "p_A_hi", "p_notAs", "p_notAs_hi", "product_hi", "bound", "violated"]
CONVERGE_COLUMNS = ["n", "d_pi", "d_n", "gap", "bound"]
DIST_COLUMNS = ["distance", "value", "certificate_norm", "duality_gap", "extra_weight", "oracle"]


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, str)):
        return str(x)
    return f"{float(x):.12g}"


def render_csv(cfg: ExperimentConfig, columns: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(
        f"# convexdist {__version__} config_sha256={cfg.digest()} seed={fmt(cfg.experiment.seed)}\n"
    )
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def emit(cfg: ExperimentConfig, text: str):
    if cfg.output.path:
        with open(cfg.output.path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_dist(cfg: ExperimentConfig) -> int:
    exp = cfg.experiment
    kinds = exp.distances or ((exp.distance,) if exp.distance else ("poisson_pi",))
    rows = []
    for kind in kinds:
        if kind == "classical":
            x = cfg.point_hat()
            res = d_T_classical(x, cfg.hat_event(len(x)))
        elif kind == "poisson_pi":
            res = d_T_pi(cfg.point_measure(), cfg.measure_event())
        elif kind == "binomial":
            n = exp.n if exp.n is not None else (cfg.process.n if cfg.process else None)
            if n is None:
                raise ConfigError("binomial distance needs experiment.n")
            res = d_T_binomial(cfg.point_measure(), cfg.measure_event(), n)
        else:
            raise ConfigError(f"unknown distance {kind!r}")
        rows.append([kind, res.value, res.certificate_norm, res.duality_gap, res.extra_weight, oracle_value(res)])
    emit(cfg, render_csv(cfg, DIST_COLUMNS, rows))
    return EXIT_OK


def build_ldi(cfg: ExperimentConfig) -> LdiExperiment:
    exp = cfg.experiment
    spec = cfg.process_spec()
    kind = exp.distance or ("poisson_pi" if cfg.process.kind == "poisson" else "binomial")
    if kind == "classical":
        event = cfg.hat_event(spec.kind.n)
    else:
        event = cfg.measure_event()
    if exp.s_grid is None or exp.trials is None or exp.seed is None:
        raise ConfigError("ldi needs experiment.s_grid, experiment.trials and experiment.seed")
    try:
        return LdiExperiment(
            spec, event, kind, exp.s_grid, exp.trials, exp.seed,
            exp.confidence if exp.confidence is not None else 0.99,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def ldi_table(rows) -> list[list]:
    return [
        [r.s, r.p_A, r.p_A_hi, r.p_notAs, r.p_notAs_hi, r.product_hi, r.bound, r.violated]
        for r in rows
    ]


def cmd_ldi(cfg: ExperimentConfig, workers: int = 1) -> int:
    lexp = build_ldi(cfg)
    status = EXIT_OK
    if lexp.distance_kind == "classical":
        run = run_iid_ldi(lexp.event, lexp.process, lexp.s_grid, lexp.trials, lexp.seed, lexp.confidence, workers)
        if run.extra["indicator_mismatches"]:
            print(
                f"hat-space and projected indicators disagree on {run.extra['indicator_mismatches']} (trial, s) pairs",
                file=sys.stderr,
            )
            status = EXIT_VIOLATION
    else:
        run = run_ldi(lexp, workers=workers)
    emit(cfg, render_csv(cfg, LDI_COLUMNS, ldi_table(run.rows)))
    if any(r.violated for r in run.rows):
        print("inequality violated at s = " + ", ".join(fmt(r.s) for r in run.rows if r.violated), file=sys.stderr)
        status = EXIT_VIOLATION
    return status


def cmd_converge(cfg: ExperimentConfig) -> int:
    grid = cfg.experiment.n_grid
    if not grid:
        raise ConfigError("converge needs experiment.n_grid")
    rows = run_convergence(cfg.point_measure(), cfg.measure_event(), grid)
    emit(cfg, render_csv(cfg, CONVERGE_COLUMNS, [[r.n, r.d_pi, r.d_n, r.gap, r.bound] for r in rows]))
    bad = [r.n for r in rows if not (-1e-9 <= r.gap <= r.bound + 1e-9)]
    if bad:
        print(f"sandwich bound fails at n = {bad}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_selftest(full: bool = False) -> int:
    from .checks import oracle_suite, sampler_suite, projection_suite

    subsets, draws = (100, 100_000) if full else (15, 20_000)
    ok = True

    t0 = time.perf_counter()
    rep = projection_suite(subsets=subsets)
    passed = rep.max_gap <= 1e-8 and not rep.dominance_violations and not rep.sandwich_violations
    ok &= passed
    print(
        f"[{'PASS' if passed else 'FAIL'}] projection compatibility: {rep.cases} cases, "
        f"max gap {rep.max_gap:.3g}, dominance/sandwich failures "
        f"{rep.dominance_violations}/{rep.sandwich_violations} ({time.perf_counter() - t0:.1f}s)"
    )

    t0 = time.perf_counter()
    orc = oracle_suite(200)
    passed = not orc.failures
    ok &= passed
    print(
        f"[{'PASS' if passed else 'FAIL'}] oracle equivalence: {orc.checks} checks, solver - oracle in "
        f"[{orc.min_diff:.3g}, {orc.max_diff:.3g}] ({time.perf_counter() - t0:.1f}s)"
    )

    t0 = time.perf_counter()
    smp = sampler_suite(draws)
    for name, passed in smp.passed().items():
        ok &= passed
        print(f"[{'PASS' if passed else 'FAIL'}] sampler: {name}")
    print(f"       sampler battery with {draws} draws ({time.perf_counter() - t0:.1f}s)")
    return EXIT_OK if ok else EXIT_VIOLATION


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="convexdist", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("dist", "compute convex distances for a fixed configuration"),
        ("ldi", "Monte Carlo check of a large deviation inequality"),
        ("converge", "binomial distance against its Poisson-type limit along n"),
    ]:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("config", help="TOML experiment configuration")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--trials", type=int)
        sp.add_argument("--out", help="CSV output path (default: stdout)")
        if name == "ldi":
            sp.add_argument("--workers", type=int, default=1, help="worker processes for the trial loop")
    st = sub.add_parser("selftest", help="run the built-in validation batteries")
    st.add_argument("--full", action="store_true", help="acceptance-sized batteries")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.command == "selftest":
            return cmd_selftest(args.full)
        cfg = load(args.config).with_overrides(seed=args.seed, trials=args.trials, out=args.out)
        if args.command == "dist":
            return cmd_dist(cfg)
        if args.command == "ldi":
            return cmd_ldi(cfg, workers=args.workers)
        return cmd_converge(cfg)
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, InfeasibleEventError, EnumerationCapError, ValueError, TypeError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
