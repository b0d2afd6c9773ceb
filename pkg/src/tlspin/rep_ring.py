"""Representation-ring combinatorics and graded-dimension checks.

All sequences here are exact integers: the irreducible dimensions p_k(n)
from the three-term recurrence n p_k = p_{k+1} + p_{k-1} (Chebyshev of the
second kind evaluated at n/2), the multiplicities nu_k(N) from the
Bratteli path recurrence, Catalan numbers, and the power-series
coefficients of 1/(1 - n t + t^2).  The numerical members - graded
dimensions of the quadratic-algebra quotients and the symmetrizer tower -
reproduce these integers via numerical rank computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .bform import BForm
from .errors import NormalizationFailure
from .linalg import DENSE_SIZE_BUDGET, RANK_RTOL, check_size_budget, numerical_rank, rel_residual
from .rmatrix import projectors, spectral_R
from .tl_rep import ChainOp

# Catalan numbers above this N are outside the artifact's integer budget.
CATALAN_MAX_N = 30


def dims_p(n: int, k_max: int) -> list[int]:
    """[p_0, ..., p_k_max] from the recurrence n p_k = p_{k+1} + p_{k-1}."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    out = [1]
    prev, cur = 0, 1
    for _ in range(k_max):
        prev, cur = cur, n * cur - prev
        out.append(cur)
    return out


def mult_nu(N: int) -> dict[int, int]:
    """{k: nu_k(N)} over k = N, N-2, ..., from the Bratteli path recurrence."""
    if N < 1:
        raise ValueError("N must be >= 1")
    nu = {1: 1}
    for _ in range(N - 1):
        nxt: dict[int, int] = {}
        for k, count in nu.items():
            for k2 in (k - 1, k + 1):
                if k2 >= 0:
                    nxt[k2] = nxt.get(k2, 0) + count
        nu = nxt
    return dict(sorted(nu.items()))


def catalan(N: int) -> int:
    """The N-th Catalan number (2N)! / (N! (N+1)!)."""
    if N < 0:
        raise ValueError("N must be >= 0")
    if N > CATALAN_MAX_N:
        raise OverflowError(f"catalan: N = {N} exceeds the integer budget {CATALAN_MAX_N}")
    return math.comb(2 * N, N) // (N + 1)


@dataclass(frozen=True)
class DecompositionRow:
    k: int
    p_k: int
    nu_k: int


@dataclass(frozen=True)
class DecompositionTable:
    """Double-decomposition bookkeeping for n^N local states.

    Row k pairs the nu_k(N)-dimensional standard module with the p_k(n)-
    dimensional symmetry-algebra module; sum nu_k p_k = n^N counts the full
    space and sum nu_k^2 = C_N counts the diagram algebra itself.
    """

    n: int
    N: int
    rows: tuple
    checks: dict

    def __post_init__(self) -> None:
        total = sum(r.p_k * r.nu_k for r in self.rows)
        square = sum(r.nu_k ** 2 for r in self.rows)
        if total != self.n ** self.N:
            raise ValueError(f"sum nu_k p_k = {total} != n^N = {self.n ** self.N}")
        if square != catalan(self.N):
            raise ValueError(f"sum nu_k^2 = {square} != C_N = {catalan(self.N)}")
        by_k = {r.k: r for r in self.rows}
        if by_k[self.N].nu_k != 1 or (0 in by_k and by_k[0].p_k != 1):
            raise ValueError("boundary rows violated: nu_N = 1 and p_0 = 1 expected")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "rows": [{"k": r.k, "p_k": r.p_k, "nu_k": r.nu_k} for r in self.rows],
            "checks": dict(self.checks),
        }


def decomposition_table(n: int, N: int) -> DecompositionTable:
    """All rows of matching parity with both invariant sums."""
    nu = mult_nu(N)
    p = dims_p(n, N)
    rows = tuple(DecompositionRow(k=k, p_k=p[k], nu_k=nu_k) for k, nu_k in nu.items())
    checks = {
        "sum_pk_nuk": sum(r.p_k * r.nu_k for r in rows),
        "catalan_check": sum(r.nu_k ** 2 for r in rows),
    }
    return DecompositionTable(n=n, N=N, rows=rows, checks=checks)


def poincare_series(n: int, K: int) -> list[int]:
    """Coefficients of 1/(1 - n t + t^2) up to order K by exact series division."""
    if K < 0:
        raise ValueError("K must be >= 0")
    denom = [1, -n, 1]
    coeffs = [1]
    for k in range(1, K + 1):
        acc = 0
        for j in range(1, min(k, 2) + 1):
            acc -= denom[j] * coeffs[k - j]
        coeffs.append(acc)
    return coeffs


def quantum_plane_dims(f: BForm, d_max: int = 3, *, rank_rtol: float = RANK_RTOL) -> dict:
    """Graded dimensions of the two quadratic-algebra quotients of T(V).

    ``sym``: quotient by the single relation spanned by the flattened b
    inverse (expected p_d(n) in degree d); ``ext``: quotient by the image
    of the complementary projector (expected 1, n, 1, 0, ...).
    """
    if d_max > 4:
        raise ValueError("graded dimensions are tabulated up to degree 4")
    n = f.n
    check_size_budget(n ** max(d_max, 0), DENSE_SIZE_BUDGET, "quantum_plane_dims")
    rel_sym = f.b_inv.ravel().reshape(-1, 1).astype(complex)
    p_plus, _ = projectors(f)
    u, s, _ = np.linalg.svd(p_plus.mat)
    r = int(np.sum(s > rank_rtol * s[0]))
    rel_ext = u[:, :r]
    out = {}
    for name, rel in (("sym", rel_sym), ("ext", rel_ext)):
        dims = []
        for d in range(d_max + 1):
            if d < 2:
                dims.append(n ** d)
                continue
            cols = [
                np.kron(np.kron(np.eye(n ** i), rel), np.eye(n ** (d - 2 - i)))
                for i in range(d - 1)
            ]
            stacked = np.hstack(cols)
            dims.append(n ** d - numerical_rank(stacked, rtol=rank_rtol))
        out[name] = dims
    return out


def symmetrizer(f: BForm, N: int, *, budget: int = DENSE_SIZE_BUDGET, tol: float = 1e-8) -> ChainOp:
    """Projector onto the top isotypic component of N sites.

    Recursion: starting from I - P_minus on two sites, multiply on the last
    bond by the Baxterized matrix at u = q^(N-1) and renormalize by
    lambda = tr(M^2)/tr(M) (the exact proportionality constant when M is a
    scalar multiple of a projector).  The result is idempotent with rank
    p_N(n).
    """
    n = f.n
    if N < 2:
        raise ValueError("symmetrizer tower starts at N = 2")
    check_size_budget(n ** N, budget, "symmetrizer")
    p_plus, _ = projectors(f)
    cur = p_plus.mat.copy()
    for m in range(3, N + 1):
        ext = np.kron(cur, np.eye(n, dtype=complex))
        rm = spectral_R(f, f.q ** (m - 1)).op.mat
        rme = np.kron(np.eye(n ** (m - 2), dtype=complex), rm)
        raw = ext @ rme @ ext
        trace = np.trace(raw)
        if abs(trace) <= 1e-12 * max(np.max(np.abs(raw)), 1e-300) * raw.shape[0]:
            raise NormalizationFailure(f"symmetrizer at {m} sites has vanishing trace")
        lam = np.trace(raw @ raw) / trace
        cur = raw / lam
    idem = rel_residual(cur @ cur - cur, [cur])
    if idem > tol:
        raise NormalizationFailure(f"normalized symmetrizer is not idempotent (residual {idem:.3e})")
    rank = numerical_rank(cur)
    expected = dims_p(n, N)[N]
    if rank != expected:
        raise NormalizationFailure(f"symmetrizer rank {rank} != p_N(n) = {expected}")
    return ChainOp(n=n, N=N, matrix=sp.csr_matrix(cur), label=f"P+^{N}")
