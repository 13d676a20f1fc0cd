"""Minimum-norm point of a polytope and a brute-force sup-min oracle.

For nonnegative vectors ``v_1..v_m`` the value

    sup_{alpha >= 0, |alpha| <= 1}  min_i <alpha, v_i>

equals the Euclidean norm of the point of ``conv{v_i}`` nearest the origin,
and ``alpha* = mu* / |mu*|``. :func:`min_norm_point` computes ``mu*`` with
Wolfe's method; :func:`sphere_grid_oracle` evaluates the left-hand side
directly on a grid of unit vectors and is a lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class ConvergenceError(RuntimeError):
    """The solver hit its iteration cap before certifying optimality."""


@dataclass(frozen=True)
class MinNormResult:
    coeffs: np.ndarray  # convex weights, aligned with the input vertex order
    point: np.ndarray
    norm: float
    gap: float  # max_v (|mu|^2 - <mu, v>), the Wolfe optimality residual
    iterations: int


def _affine_minimizer(S: np.ndarray) -> np.ndarray:
    """Weights (summing to 1) of the min-norm point of the affine hull of rows of S."""
    k = S.shape[0]
    if k == 1:
        return np.ones(1)
    G = S @ S.T
    M = np.empty((k + 1, k + 1))
    M[0, 0] = 0.0
    M[0, 1:] = 1.0
    M[1:, 0] = 1.0
    M[1:, 1:] = G
    rhs = np.zeros(k + 1)
    rhs[0] = 1.0
    sol = np.linalg.lstsq(M, rhs, rcond=None)[0]
    w = sol[1:]
    return w / w.sum()


def min_norm_point(V, tol: float = 1e-9, max_iter: int | None = None) -> MinNormResult:
    """Nearest point to the origin in the convex hull of the rows of ``V``.

    Wolfe's algorithm: major cycles add the vertex most violating the
    optimality condition, minor (correction) cycles pull the iterate back
    into the hull whenever the affine minimizer of the current corral leaves
    it. Vertices are visited in lexicographic order for tie-breaking, so the
    result is deterministic.

    Stops when ``max_v |mu|^2 - <mu, v> <= tol * (1 + |mu|^2)``.
    """
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] == 0:
        raise ValueError("need a non-empty 2-d array of vertices")
    if np.any(V < 0):
        raise ValueError("vertices must be componentwise nonnegative")
    m, dim = V.shape
    if max_iter is None:
        max_iter = 10 * m * dim + 1000

    # canonical order; dedup exact repeats
    order = np.lexsort(V.T[::-1])
    W, first = np.unique(V[order], axis=0, return_index=True)
    orig_idx = order[first]

    norms = np.einsum("ij,ij->i", W, W)
    coeffs_out = np.zeros(m)
    if norms.min() == 0.0:
        j = int(np.argmin(norms))
        coeffs_out[orig_idx[j]] = 1.0
        return MinNormResult(coeffs_out, np.zeros(dim), 0.0, 0.0, 0)

    corral = [int(np.argmin(norms))]
    lam = np.ones(1)
    x = W[corral[0]].copy()
    it = 0
    while True:
        it += 1
        if it > max_iter:
            raise ConvergenceError(f"no convergence after {max_iter} iterations")
        xx = float(x @ x)
        dots = W @ x
        j = int(np.argmin(dots))
        if xx - dots[j] <= tol * (1.0 + xx):
            break
        if j in corral:
            # numerically stalled: the best vertex is already in the corral
            break
        corral.append(j)
        lam = np.append(lam, 0.0)
        while True:
            it += 1
            if it > max_iter:
                raise ConvergenceError(f"no convergence after {max_iter} iterations")
            S = W[corral]
            w = _affine_minimizer(S)
            if np.all(w > 1e-14):
                lam = w
                break
            neg = w <= 1e-14
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(neg, lam / (lam - w), np.inf)
            theta = min(1.0, float(np.min(ratios)))
            lam = lam + theta * (w - lam)
            keep = lam > 1e-14
            if keep.all():
                # guard against a zero step on a degenerate corral
                keep[int(np.argmin(lam))] = False
            corral = [c for c, k in zip(corral, keep) if k]
            lam = lam[keep]
            lam = lam / lam.sum()
        x = lam @ W[corral]

    xx = float(x @ x)
    gap = max(0.0, xx - float(np.min(W @ x)))
    for c, l in zip(corral, lam):
        coeffs_out[orig_idx[c]] += l
    return MinNormResult(coeffs_out, x, math.sqrt(xx), gap, it)


# --------------------------------------------------------------------------
# Brute-force oracle
# --------------------------------------------------------------------------

MAX_ORACLE_DIM = 6


def _angles_to_unit(theta: np.ndarray) -> np.ndarray:
    """Hyperspherical angles in [0, pi/2]^(d-1) -> unit vectors in the orthant."""
    npts, k = theta.shape
    out = np.empty((npts, k + 1))
    sin_prod = np.ones(npts)
    for i in range(k):
        out[:, i] = sin_prod * np.cos(theta[:, i])
        sin_prod = sin_prod * np.sin(theta[:, i])
    out[:, k] = sin_prod
    return np.clip(out, 0.0, None)


def _grid_values(V: np.ndarray, axes: list[np.ndarray], temp: float = 0.0, chunk: int = 200_000):
    """Best grid angle for min_v <alpha, v>, or for its softmin at ``temp > 0``.

    Returns (best exact value seen, angle selected, selection score).
    """
    best_exact = -np.inf
    sel_score, sel_theta = -np.inf, None
    mesh = np.array(np.meshgrid(*axes, indexing="ij")).reshape(len(axes), -1).T
    for start in range(0, mesh.shape[0], chunk):
        th = mesh[start : start + chunk]
        dots = _angles_to_unit(th) @ V.T
        exact = dots.min(axis=1)
        best_exact = max(best_exact, float(exact.max()))
        if temp > 0:
            score = exact - temp * np.log(np.exp(-(dots - exact[:, None]) / temp).sum(axis=1))
        else:
            score = exact
        i = int(np.argmax(score))
        if score[i] > sel_score:
            sel_score, sel_theta = float(score[i]), th[i].copy()
    return best_exact, sel_theta, sel_score


def sphere_grid_oracle(
    V, resolution: int, refinements: int = 0, window: int = 5
) -> float:
    """Grid lower bound for ``sup_{alpha >= 0, |alpha| = 1} min_i <alpha, v_i>``.

    Unit vectors of the nonnegative orthant are parametrized by ``d-1``
    hyperspherical angles in ``[0, pi/2]``, each sampled at ``resolution``
    points. With ``refinements > 0`` a local tensor grid of ``window`` points
    per angle is then laid around an incumbent, which moves while the
    softmin (temperature tied to the grid spacing) improves and otherwise
    halves the spacing, at most ``refinements`` times. The softmin only
    steers the search; the return value is the largest exact ``min_i``
    over all evaluated unit vectors, hence never above the true sup-min.
    """
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] == 0:
        raise ValueError("need a non-empty 2-d array of vectors")
    dim = V.shape[1]
    if dim > MAX_ORACLE_DIM:
        raise ValueError(f"oracle dimension {dim} exceeds {MAX_ORACLE_DIM}")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    if dim == 1:
        return float(V[:, 0].min())
    if np.any(np.all(V == 0, axis=1)):
        return 0.0
    half = math.pi / 2
    axes = [np.linspace(0.0, half, resolution) for _ in range(dim - 1)]
    best, theta, _ = _grid_values(V, axes)
    step = half / (resolution - 1)
    scale = float(np.linalg.norm(V, axis=1).max())
    offsets = np.linspace(-1.0, 1.0, window)
    shrinks = moves = 0
    while shrinks < refinements and moves < 50 * refinements:
        temp = 0.5 * step * scale
        _, _, here = _grid_values(V, [np.array([t]) for t in theta], temp)
        axes = [np.clip(t + step * offsets, 0.0, half) for t in theta]
        exact, th, score = _grid_values(V, axes, temp)
        best = max(best, exact)
        if score > here + 1e-15:
            theta = th
            moves += 1
        else:
            step /= 2
            shrinks += 1
    return max(best, 0.0)
