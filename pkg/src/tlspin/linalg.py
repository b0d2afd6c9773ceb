"""Small dense/sparse kernels shared by the operator modules.

Norm conventions: materialized operators are compared with the max-abs entry
norm; matrix-free operators fall back to a power-iteration estimate with a
seeded start, so every reported residual is reproducible.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .errors import SizeBudgetExceeded

# Global working tolerance (epsilon) for identity residuals.
GLOBAL_TOL = 1e-10

# Largest n**N for which chain operators are materialized in sparse form.
SPARSE_SIZE_BUDGET = 20000

# Largest n**N for which densification / dense eigensolves / dense ranks run.
DENSE_SIZE_BUDGET = 4096

# Singular values above RANK_RTOL * sigma_max count toward the numerical rank.
RANK_RTOL = 1e-8

_TINY = 1e-300


def max_abs(a) -> float:
    """Largest entry magnitude of a dense array or sparse matrix."""
    if sp.issparse(a):
        data = a.tocoo().data
        return float(np.max(np.abs(data))) if data.size else 0.0
    arr = np.asarray(a)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def rel_residual(diff, scale_terms: Iterable) -> float:
    """max-abs of ``diff`` relative to the largest entry among ``scale_terms``."""
    scale = max((max_abs(t) for t in scale_terms), default=0.0)
    return max_abs(diff) / max(scale, _TINY)


def require_finite(arr, label: str) -> None:
    a = np.asarray(arr)
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError(f"{label} contains NaN or Inf entries")


def as_complex_matrix(a, label: str = "matrix") -> np.ndarray:
    """Validated square complex matrix copy."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{label} must be square, got shape {m.shape}")
    require_finite(m, label)
    return m


def flip_operator(n: int) -> np.ndarray:
    """Permutation matrix exchanging the two factors of C^n (x) C^n."""
    p = np.zeros((n * n, n * n))
    for a in range(n):
        for b in range(n):
            p[a * n + b, b * n + a] = 1.0
    return p


def check_size_budget(dim: int, budget: int, what: str) -> None:
    if dim > budget:
        raise SizeBudgetExceeded(f"{what}: dimension {dim} exceeds budget {budget}")


def numerical_rank(a: np.ndarray, rtol: float = RANK_RTOL) -> int:
    """Count of singular values above rtol * sigma_max."""
    s = np.linalg.svd(np.asarray(a, dtype=complex), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def power_norm_estimate(applier, dim: int, iters: int = 20, seed: int = 0) -> float:
    """Power-iteration estimate of the dominant singular scale of a matvec.

    Forward-only iteration; used as the residual norm proxy for matrix-free
    chain operators when no materialized form is available.
    """
    rng = np.random.default_rng(seed)
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(iters):
        w = applier(v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        est = nw
        v = w / nw
    return float(est)
