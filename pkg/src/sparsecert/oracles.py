"""Ground-truth references the certificates are validated against.

`brute_force_l0` enumerates every size-k support (the restricted ridge value
only drops as the support grows, so smaller supports are redundant) and is
the exact nonconvex optimum. `pwg_value` minimizes the continuous boolean
relaxation

    g(z) = 0.5 * y^T (X D(z) X^T / rho + I)^{-1} y,   z in [0,1]^p, sum z <= k,

by projected gradient descent; g is convex in z, every partial derivative is
nonpositive, and the returned feasible point upper-bounds the relaxation
optimum with a Frank-Wolfe gap estimate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .problem import ProblemInstance, DEFAULT_REL_TOL

DEFAULT_MAX_COMBINATIONS = 10**6


class CombinationBudgetError(ValueError):
    """Raised when C(p, k) exceeds the enumeration budget."""

    def __init__(self, combinations: int, budget: int):
        super().__init__(
            f"C(p, k) = {combinations} exceeds the enumeration budget {budget}"
        )
        self.combinations = combinations
        self.budget = budget


@dataclass
class BruteForceResult:
    value: float
    argmin_supports: list[tuple[int, ...]]  # lexicographic, ties within rel tol


@dataclass
class PwgValueResult:
    value: float
    z: np.ndarray
    iterations: int
    grad_norm_kkt: float  # Frank-Wolfe stationarity gap at the returned point
    trace: Optional[list[float]] = None  # per-iteration objective, if requested


def brute_force_l0(
    inst: ProblemInstance, max_combinations: int = DEFAULT_MAX_COMBINATIONS
) -> BruteForceResult:
    """Exact best-subset ridge value by enumerating all supports of size k."""
    total = math.comb(inst.p, inst.k)
    if total > max_combinations:
        raise CombinationBudgetError(total, max_combinations)
    X, y, rho = inst.X, inst.y, inst.rho
    yty = float(y @ y)
    tie_tol = DEFAULT_REL_TOL
    best = math.inf
    ties: list[tuple[float, tuple[int, ...]]] = []
    for sup in itertools.combinations(range(inst.p), inst.k):
        Xs = X[:, sup]
        gram = Xs.T @ Xs + rho * np.eye(inst.k)
        xty = Xs.T @ y
        cho = scipy.linalg.cho_factor(gram, lower=True)
        val = 0.5 * (yty - float(xty @ scipy.linalg.cho_solve(cho, xty)))
        if val < best:
            best = val
            slack = tie_tol * max(1.0, abs(best))
            ties = [(v, s) for v, s in ties if v <= best + slack]
        if val <= best + tie_tol * max(1.0, abs(best)):
            ties.append((val, sup))
    slack = tie_tol * max(1.0, abs(best))
    argmins = [s for v, s in ties if v <= best + slack]
    return BruteForceResult(value=best, argmin_supports=argmins)


def project_capped_simplex(v: np.ndarray, k: int) -> np.ndarray:
    """Euclidean projection onto {z in [0,1]^p : sum z <= k}.

    If clipping to the box already satisfies the cap, that is the projection;
    otherwise shift by the theta >= 0 with sum clip(v - theta, 0, 1) = k,
    found by bisection (the sum is nonincreasing in theta).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    v = np.asarray(v, dtype=float).reshape(-1)
    clipped = np.clip(v, 0.0, 1.0)
    if clipped.sum() <= k:
        return clipped
    lo, hi = 0.0, float(v.max())
    for _ in range(200):
        theta = 0.5 * (lo + hi)
        s = np.clip(v - theta, 0.0, 1.0).sum()
        if s > k:
            lo = theta
        else:
            hi = theta
        if hi - lo <= 1e-12:
            break
    theta = 0.5 * (lo + hi)
    return np.clip(v - theta, 0.0, 1.0)


def _relaxed_objective_and_scores(
    inst: ProblemInstance, z: np.ndarray
) -> tuple[float, np.ndarray]:
    """g(z) and the column scores X_j^T K(z)^{-1} y, via one SPD solve."""
    n = inst.n
    kernel = np.eye(n) + (inst.X * z) @ inst.X.T / inst.rho
    kernel = 0.5 * (kernel + kernel.T)
    cho = scipy.linalg.cho_factor(kernel, lower=True)
    ky = scipy.linalg.cho_solve(cho, inst.y)
    return 0.5 * float(inst.y @ ky), inst.X.T @ ky


def relaxed_objective(inst: ProblemInstance, z: np.ndarray) -> float:
    """g(z) = 0.5 * y^T (X D(z) X^T / rho + I)^{-1} y."""
    z = np.asarray(z, dtype=float).reshape(-1)
    if z.shape != (inst.p,):
        raise ValueError(f"z has length {z.shape[0]}, expected p={inst.p}")
    return _relaxed_objective_and_scores(inst, z)[0]


def relaxed_gradient(inst: ProblemInstance, z: np.ndarray) -> np.ndarray:
    """dg/dz_j = -(X_j^T K(z)^{-1} y)^2 / (2 rho); always <= 0."""
    z = np.asarray(z, dtype=float).reshape(-1)
    if z.shape != (inst.p,):
        raise ValueError(f"z has length {z.shape[0]}, expected p={inst.p}")
    _, scores = _relaxed_objective_and_scores(inst, z)
    return -(scores**2) / (2.0 * inst.rho)


def _frank_wolfe_gap(grad: np.ndarray, z: np.ndarray, k: int) -> float:
    """max over feasible w of grad^T (z - w). Since grad <= 0, the best w
    puts 1 on the k most negative gradient coordinates. Nonnegative for
    feasible z; clamped against cancellation at vertices."""
    order = np.argsort(grad)
    best = float(grad[order[:k]].sum())
    return max(float(grad @ z) - best, 0.0)


def pwg_value(
    inst: ProblemInstance,
    tol: float = 1e-10,
    max_iter: int = 5000,
    record_trace: bool = False,
) -> PwgValueResult:
    """Minimize the continuous relaxation over the capped simplex.

    Projected gradient descent from the uniform interior point z0 = (k/p)e,
    with a Barzilai-Borwein step safeguarded by Armijo backtracking (so the
    objective trace is monotone). Afterwards the binary point supported on
    the k largest coordinates of z is evaluated and kept if it is lower;
    near-exact instances optimize at a vertex and the snap removes the last
    sliver of first-order error. Stops when the iterate stops moving (inf
    norm below tol) or at max_iter.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    p, k = inst.p, inst.k
    z = np.full(p, k / p)
    val, scores = _relaxed_objective_and_scores(inst, z)
    grad = -(scores**2) / (2.0 * inst.rho)
    trace = [val] if record_trace else None
    step = 1.0
    iterations = 0
    for iterations in range(1, max_iter + 1):
        moved = False
        trial_step = step
        for _ in range(60):
            z_new = project_capped_simplex(z - trial_step * grad, k)
            delta = z_new - z
            decrease = float(grad @ delta)
            val_new, scores_new = _relaxed_objective_and_scores(inst, z_new)
            if val_new <= val + 1e-4 * decrease:
                moved = True
                break
            trial_step *= 0.5
        if not moved:
            break
        grad_new = -(scores_new**2) / (2.0 * inst.rho)
        # BB1 step for the next iteration, clamped to a sane range
        dg = grad_new - grad
        num = float(delta @ delta)
        den = float(delta @ dg)
        step = min(max(num / den, 1e-12), 1e12) if den > 0 else trial_step * 2.0
        z, val, grad = z_new, val_new, grad_new
        if trace is not None:
            trace.append(val)
        if float(np.abs(delta).max()) <= tol:
            break
    # vertex snap: binary point on the k largest coordinates
    top = np.argsort(-z)[:k]
    z_bin = np.zeros(p)
    z_bin[top] = 1.0
    val_bin, scores_bin = _relaxed_objective_and_scores(inst, z_bin)
    if val_bin < val:
        z, val = z_bin, val_bin
        grad = -(scores_bin**2) / (2.0 * inst.rho)
        if trace is not None:
            trace.append(val)
    gap = _frank_wolfe_gap(grad, z, k)
    return PwgValueResult(
        value=val, z=z, iterations=iterations, grad_norm_kkt=gap, trace=trace
    )
