"""Reusable validation batteries: two-route distance agreement, oracle
agreement, and distributional checks of the samplers."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .distances import (
    check_projection_compatibility,
    convergence_gap_bound,
    d_T_binomial,
    d_T_pi,
    oracle_value,
)
from .events import CountLower, CountUpper, Explicit, HatEventSet, representative_reduction
from .measures import DELTA, AlphabetRegion, CountingMeasure, FiniteAlphabet, HatVector, count, project_hat
from .samplers import Binomial, Hat, Poisson, ProcessSpec, sample_binomial, sample_hat, sample_poisson, trial_rng

# --------------------------------------------------------------------------
# hat space vs counting measures
# --------------------------------------------------------------------------


@dataclass
class ProjectionReport:
    cases: int = 0
    max_gap: float = 0.0
    dominance_violations: int = 0
    sandwich_violations: int = 0
    worst_case: tuple | None = None


def projection_suite(
    alphabet_sizes=(2, 3),
    ns=(2, 3, 4),
    subsets: int = 100,
    seed: int = 0,
    max_seed_vectors: int = 3,
) -> ProjectionReport:
    """Classical hat-space distance against the binomial distance of the projections.

    For every alphabet size and ``n``: every ``x`` up to permutation, against
    the symmetrizations of ``subsets`` random seed sets. Also counts failures
    of ``d_pi <= d_n`` and of ``d_n - d_pi <= convergence_gap_bound``.
    """
    rep = ProjectionReport()
    rng = np.random.default_rng(seed)
    for m in alphabet_sizes:
        letters = list(range(m)) + [DELTA]
        for n in ns:
            xs = [HatVector(c) for c in itertools.combinations_with_replacement(letters, n)]
            space = list(itertools.product(letters, repeat=n))
            for _ in range(subsets):
                k = int(rng.integers(1, max_seed_vectors + 1))
                picks = rng.choice(len(space), size=k, replace=False)
                A = HatEventSet.from_seeds(HatVector(space[i]) for i in picks)
                proj = A.projected()
                for x in xs:
                    lhs, rhs, gap = check_projection_compatibility(x, A)
                    rep.cases += 1
                    if gap > rep.max_gap:
                        rep.max_gap, rep.worst_case = gap, (x, A.vectors[:4], lhs, rhs)
                    xi = project_hat(x)
                    d_pi = d_T_pi(xi, proj).value
                    if d_pi > rhs + 1e-9:
                        rep.dominance_violations += 1
                    if n > xi.mass:
                        if rhs - d_pi > convergence_gap_bound(xi, proj, n) + 1e-9:
                            rep.sandwich_violations += 1
                    elif abs(rhs - d_pi) > 1e-9:
                        rep.sandwich_violations += 1
    return rep


# --------------------------------------------------------------------------
# solver vs brute-force oracle
# --------------------------------------------------------------------------


@dataclass
class OracleReport:
    instances: int = 0
    checks: int = 0
    min_diff: float = math.inf  # solver value minus oracle value
    max_diff: float = -math.inf
    failures: list = field(default_factory=list)
    cases: list = field(default_factory=list)  # (xi, A, n, d_pi, d_n)


def random_instance(rng: np.random.Generator, max_mass: int = 5, max_atoms: int = 4, symbols: int = 6):
    """Random (xi, A, n) with xi(E) <= max_mass over at most max_atoms atoms."""
    n_atoms = int(rng.integers(1, max_atoms + 1))
    atoms = rng.choice(symbols, size=n_atoms, replace=False)
    mass = int(rng.integers(n_atoms, max(n_atoms, max_mass) + 1))
    mult = np.ones(n_atoms, dtype=int)
    for j in rng.integers(0, n_atoms, size=mass - n_atoms):
        mult[j] += 1
    xi = CountingMeasure({int(a): int(c) for a, c in zip(atoms, mult)})
    kind = int(rng.integers(0, 3))
    region = AlphabetRegion(int(s) for s in rng.choice(symbols, size=int(rng.integers(1, symbols)), replace=False))
    if kind == 0:
        A = CountUpper(region, int(rng.integers(0, max(1, count(xi, region)))))
    elif kind == 1:
        A = CountLower(region, int(rng.integers(count(xi, region) + 1, count(xi, region) + 4)))
    else:
        members = []
        for _ in range(int(rng.integers(1, 7))):
            sel = rng.choice(symbols, size=int(rng.integers(0, 5)))
            members.append(CountingMeasure(int(s) for s in sel))
        A = Explicit(members)
    n = xi.mass + int(rng.integers(1, 8))
    return xi, A, n


def oracle_suite(instances: int = 200, seed: int = 1, max_reps: int = 20) -> OracleReport:
    """Compare solver values with the sphere-grid oracle for both measure distances."""
    rep = OracleReport()
    rng = np.random.default_rng(seed)
    while rep.instances < instances:
        xi, A, n = random_instance(rng)
        reps = representative_reduction(xi, A)
        if len(reps) > max_reps:
            continue
        try:
            results = [d_T_pi(xi, A), d_T_binomial(xi, A, n)]
        except ValueError:
            continue
        rep.instances += 1
        rep.cases.append((xi, A, n, results[0].value, results[1].value))
        for r in results:
            o = oracle_value(r)
            diff = r.value - o
            rep.checks += 1
            rep.min_diff = min(rep.min_diff, diff)
            rep.max_diff = max(rep.max_diff, diff)
            if not (-1e-9 <= diff <= 2e-3):
                rep.failures.append((xi, A, n, r.value, o))
    return rep


# --------------------------------------------------------------------------
# samplers
# --------------------------------------------------------------------------


def chisquare_against(counts: np.ndarray, pmf, min_expected: float = 5.0) -> float:
    """Goodness-of-fit p-value of integer samples against a pmf on 0, 1, 2, ...

    Bins are merged from both tails until every expected count reaches
    ``min_expected``; the upper tail bin carries the remaining mass.
    """
    counts = np.asarray(counts, dtype=int)
    total = counts.size
    top = int(counts.max())
    ks = np.arange(top + 1)
    p = pmf(ks)
    p = np.append(p, max(0.0, 1.0 - p.sum()))
    obs = np.append(np.bincount(counts, minlength=top + 1), 0)
    exp = p * total
    bins_o, bins_e, acc_o, acc_e = [], [], 0.0, 0.0
    for o, e in zip(obs, exp):
        acc_o += o
        acc_e += e
        if acc_e >= min_expected:
            bins_o.append(acc_o)
            bins_e.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        bins_o[-1] += acc_o
        bins_e[-1] += acc_e
    bins_e = np.asarray(bins_e)
    bins_e *= total / bins_e.sum()
    if len(bins_o) < 2:
        return 1.0
    return float(stats.chisquare(bins_o, bins_e).pvalue)


def region_counts(spec: ProcessSpec, region, draws: int, seed: int, stream: int = 0) -> np.ndarray:
    kind = spec.kind
    out = np.empty(draws, dtype=int)
    for i in range(draws):
        rng = trial_rng(seed, stream, i)
        if isinstance(kind, Binomial):
            xi = sample_binomial(spec, rng)
        elif isinstance(kind, Poisson):
            xi = sample_poisson(spec, rng)
        else:
            xi = project_hat(sample_hat(spec, rng))
        out[i] = count(xi, region) if region is not None else xi.mass
    return out


def two_sample_chisquare(a: np.ndarray, b: np.ndarray, min_expected: float = 5.0) -> float:
    top = int(max(a.max(), b.max()))
    table = np.vstack([np.bincount(a, minlength=top + 1), np.bincount(b, minlength=top + 1)])
    # merge sparse columns into neighbours
    cols, acc = [], np.zeros(2)
    for j in range(table.shape[1]):
        acc = acc + table[:, j]
        if acc.sum() * min(a.size, b.size) / (a.size + b.size) >= min_expected:
            cols.append(acc)
            acc = np.zeros(2)
    if acc.sum():
        cols[-1] = cols[-1] + acc
    if len(cols) < 2:
        return 1.0
    return float(stats.chi2_contingency(np.array(cols).T)[1])


@dataclass
class SamplerReport:
    binomial_p: float
    poisson_p: float
    hat_vs_binomial_p: float
    poisson_corr: float
    tv_by_n: dict

    def passed(self, alpha: float = 1e-3) -> dict[str, bool]:
        tv = [self.tv_by_n[n] for n in sorted(self.tv_by_n)]
        return {
            "binomial counts": self.binomial_p > alpha,
            "poisson counts": self.poisson_p > alpha,
            "hat projection vs binomial": self.hat_vs_binomial_p > alpha,
            "poisson disjoint independence": abs(self.poisson_corr) < 0.01,
            "binomial -> poisson tv decreasing": all(x > y for x, y in zip(tv, tv[1:])),
        }


def total_variation(counts: np.ndarray, pmf) -> float:
    top = int(counts.max())
    ks = np.arange(top + 1)
    emp = np.bincount(counts, minlength=top + 1) / counts.size
    p = pmf(ks)
    return 0.5 * (np.abs(emp - p).sum() + max(0.0, 1.0 - p.sum()))


def sampler_suite(draws: int = 100_000, seed: int = 2, tv_grid=(10, 100, 1000), tv_t: float = 8.0) -> SamplerReport:
    g = FiniteAlphabet.uniform(10)
    B = AlphabetRegion(range(4))
    B2 = AlphabetRegion(range(4, 7))
    bin_spec = ProcessSpec(g, Binomial(50, 0.5))
    c_bin = region_counts(bin_spec, B, draws, seed, stream=11)
    p_bin = chisquare_against(c_bin, lambda k: stats.binom.pmf(k, 50, 0.5 * 0.4))

    poi_spec = ProcessSpec(g, Poisson(8.0))
    c1 = np.empty(draws, dtype=int)
    c2 = np.empty(draws, dtype=int)
    for i in range(draws):
        xi = sample_poisson(poi_spec, trial_rng(seed, 12, i))
        c1[i], c2[i] = count(xi, B), count(xi, B2)
    p_poi = chisquare_against(c1, lambda k: stats.poisson.pmf(k, 8.0 * 0.4))
    corr = float(np.corrcoef(c1, c2)[0, 1])

    hat_counts = region_counts(ProcessSpec(g, Hat(50, 0.5)), B, draws, seed, stream=13)
    p_two = two_sample_chisquare(hat_counts, c_bin)

    tv = {}
    for n in tv_grid:
        c = region_counts(ProcessSpec(g, Binomial(n, tv_t / n)), None, draws, seed, stream=14)
        tv[n] = total_variation(c, lambda k: stats.poisson.pmf(k, tv_t))
    return SamplerReport(p_bin, p_poi, p_two, corr, tv)
