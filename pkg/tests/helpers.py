"""Shared instance generators for the test suite."""

import numpy as np

from sparsecert import ProblemInstance


def noise_instance(rng, n=None, p=None, k=None, rho=None):
    """Pure-noise instance: Gaussian design, Gaussian response."""
    n = int(rng.integers(5, 16)) if n is None else n
    p = int(rng.integers(6, 13)) if p is None else p
    k = int(rng.integers(1, 4)) if k is None else k
    rho = float(rng.choice([0.1, 1.0, 10.0])) if rho is None else rho
    X = rng.standard_normal((n, p))
    y = rng.standard_normal(n)
    return ProblemInstance(X=X, y=y, rho=rho, k=k)


def planted_instance(rng, n=None, p=None, k=None, rho=None, amplitude=3.0, noise=0.3):
    """Sparse planted signal with a strong amplitude, so certificates often
    fire. Returns (instance, true support)."""
    n = int(rng.integers(5, 16)) if n is None else n
    p = int(rng.integers(6, 13)) if p is None else p
    k = int(rng.integers(1, 4)) if k is None else k
    rho = float(rng.choice([0.1, 1.0, 10.0])) if rho is None else rho
    X = rng.standard_normal((n, p))
    support = tuple(sorted(rng.choice(p, size=k, replace=False).tolist()))
    beta = np.zeros(p)
    beta[list(support)] = amplitude * rng.choice([-1.0, 1.0], size=k)
    y = X @ beta + noise * rng.standard_normal(n)
    return ProblemInstance(X=X, y=y, rho=rho, k=k), support


def mixed_instance(rng, **kwargs):
    """Half planted, half pure noise."""
    if rng.random() < 0.5:
        inst, _ = planted_instance(rng, **kwargs)
        return inst
    return noise_instance(rng, **kwargs)


def random_support(rng, inst):
    size = int(rng.integers(1, inst.k + 1))
    return tuple(sorted(rng.choice(inst.p, size=size, replace=False).tolist()))
