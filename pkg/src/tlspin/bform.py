"""The invertible matrix b and its derived deformation parameters.

Everything in this library is built from a single invertible n x n complex
matrix b: the Temperley-Lieb generator is the rank-one operator assembled
from b and its inverse, the loop parameter tau = tr(b^t b^{-1}) fixes the
deformation parameter q through q^2 + tau q + 1 = 0, and congruence
transformations b -> M b M^t relate gauge-equivalent models.

Two built-in families are provided:

* ``kls`` -- the 3 x 3 antidiagonal involution diag-flip(p, 1, 1/p), for
  which tau = p^2 + 1 + p^{-2} and b equals its own inverse;
* ``xxz`` -- the 2 x 2 matrix [[0, 1], [-q0, 0]] reproducing the spin-1/2
  anisotropic chain generator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateParameter, SingularMatrix
from .linalg import GLOBAL_TOL, as_complex_matrix, max_abs, require_finite

# Moduli closer than this are treated as a tie (both roots on the unit circle).
_MODULUS_TIE_TOL = 1e-9


@dataclass(frozen=True)
class BForm:
    """An invertible matrix b with its inverse and derived scalars.

    Instances are immutable; the arrays are marked read-only so a BForm can
    be shared freely between concurrent checks.
    """

    n: int
    b: np.ndarray
    b_inv: np.ndarray
    tau: complex
    q: complex
    p: complex | None = None
    family: str | None = None

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("local dimension n must be at least 2")
        if self.b.shape != (self.n, self.n) or self.b_inv.shape != (self.n, self.n):
            raise ValueError("b and b_inv must both be n x n")
        require_finite(self.b, "b")
        require_finite(self.b_inv, "b_inv")
        if not np.isfinite([self.tau.real, self.tau.imag, self.q.real, self.q.imag]).all():
            raise ValueError("tau and q must be finite")
        if self.q == 0:
            raise DegenerateParameter("q must be nonzero")
        resid = max_abs(self.b @ self.b_inv - np.eye(self.n))
        if resid > GLOBAL_TOL:
            raise SingularMatrix(f"b * b_inv deviates from identity by {resid:.3e}")
        if abs(self.q + 1 / self.q + self.tau) > 1e-12:
            raise ValueError("q is not a root of q^2 + tau*q + 1 = 0")
        self.b.setflags(write=False)
        self.b_inv.setflags(write=False)

    @property
    def nu(self) -> complex:
        """The scalar q + 1/q (equal to -tau)."""
        return self.q + 1 / self.q


def _q_from_tau(tau: complex, allow_unimodular_q: bool, tol: float) -> complex:
    if abs(tau - 2) <= tol or abs(tau + 2) <= tol:
        raise DegenerateParameter(f"tau = {tau} forces q = -+1, which is excluded")
    r1, r2 = np.roots([1.0, complex(tau), 1.0])
    m1, m2 = abs(r1), abs(r2)
    # The roots multiply to 1, so equal moduli means both sit on |q| = 1.
    if abs(m1 - m2) <= _MODULUS_TIE_TOL:
        if not allow_unimodular_q:
            raise DegenerateParameter(
                f"tau = {tau} puts q on the unit circle; pass allow_unimodular_q=True "
                "to accept a non-root-of-unity phase explicitly"
            )
        q = r1 if r1.imag >= 0 else r2
    else:
        q = r1 if m1 > m2 else r2
    return complex(q)


def make_bform(
    b,
    *,
    tol: float = GLOBAL_TOL,
    allow_unimodular_q: bool = False,
    family: str | None = None,
    p: complex | None = None,
    b_inv=None,
    q_root: complex | None = None,
) -> BForm:
    """Build a BForm from an arbitrary invertible matrix.

    The deformation parameter q is the root of q^2 + tau q + 1 = 0 with
    |q| > 1; when both roots lie on the unit circle the root with
    non-negative imaginary part is taken, and only if ``allow_unimodular_q``
    is set (such q are rejected by default since the construction assumes q
    is not a root of unity).

    ``b_inv`` and ``q_root`` may be supplied when the inverse or the root is
    known in closed form (the built-in families use both, which keeps
    structurally zero operator entries exactly zero); ``q_root`` must obey
    the same selection rule and is validated against tau.
    """
    mat = as_complex_matrix(b, "b")
    n = mat.shape[0]
    if n < 2:
        raise ValueError("local dimension n must be at least 2")
    s = np.linalg.svd(mat, compute_uv=False)
    if s[-1] <= tol * s[0]:
        raise SingularMatrix(
            f"b is singular at tolerance {tol:.1e} (sigma_min/sigma_max = {s[-1] / s[0]:.3e})"
        )
    inv = np.linalg.inv(mat) if b_inv is None else as_complex_matrix(b_inv, "b_inv")
    tau = complex(np.trace(mat.T @ inv))
    if q_root is not None:
        q = complex(q_root)
        if abs(q) < 1 - _MODULUS_TIE_TOL:
            raise ValueError("q_root violates the |q| > 1 selection rule")
        if abs(abs(q) - 1) <= _MODULUS_TIE_TOL and not allow_unimodular_q:
            raise DegenerateParameter("q_root on the unit circle needs allow_unimodular_q=True")
    else:
        q = _q_from_tau(tau, allow_unimodular_q, tol)
    return BForm(n=n, b=mat, b_inv=inv, tau=tau, q=q, p=p, family=family)


def builtin_bform(
    family: str,
    param,
    *,
    tol: float = GLOBAL_TOL,
    allow_unimodular_q: bool = False,
) -> BForm:
    """One of the built-in families: ``kls`` (n=3, parameter p) or ``xxz`` (n=2)."""
    if family == "kls":
        p = complex(param)
        if p == 0:
            raise DegenerateParameter("kls family requires p != 0")
        b = np.zeros((3, 3), dtype=complex)
        for i in (1, 2, 3):
            b[i - 1, 3 - i] = p ** (2 - i)
        # b is an involution, so pass the exact inverse.
        return make_bform(
            b, tol=tol, allow_unimodular_q=allow_unimodular_q, family="kls", p=p, b_inv=b.copy()
        )
    if family == "xxz":
        q0 = complex(param)
        if abs(q0) <= tol or abs(q0 - 1) <= tol or abs(q0 + 1) <= tol:
            raise DegenerateParameter("xxz family requires q != 0, +-1")
        b = np.array([[0, 1], [-q0, 0]], dtype=complex)
        inv = np.array([[0, -1 / q0], [1, 0]], dtype=complex)
        # the roots of the quadratic are exactly {q0, 1/q0}
        if abs(abs(q0) - 1) <= 1e-9:
            root = q0 if q0.imag >= 0 else 1 / q0
        else:
            root = q0 if abs(q0) > 1 else 1 / q0
        return make_bform(
            b, tol=tol, allow_unimodular_q=allow_unimodular_q, family="xxz", b_inv=inv, q_root=root
        )
    raise ValueError(f"unknown family {family!r} (expected 'kls' or 'xxz')")


def gauge_transform(f: BForm, m, *, tol: float = GLOBAL_TOL) -> BForm:
    """BForm built from the congruence M b M^t.

    Trace cyclicity makes tau (hence q) exactly invariant, so both scalars
    are carried over rather than recomputed through the transformed inverse;
    the two-site generator transforms by conjugation with M (x) M.
    """
    mat = as_complex_matrix(m, "M")
    if mat.shape != (f.n, f.n):
        raise ValueError(f"M must be {f.n} x {f.n}")
    s = np.linalg.svd(mat, compute_uv=False)
    if s[-1] <= tol * s[0]:
        raise SingularMatrix("gauge matrix M is singular at the working tolerance")
    b2 = mat @ f.b @ mat.T
    s2 = np.linalg.svd(b2, compute_uv=False)
    if s2[-1] <= tol * s2[0]:
        raise SingularMatrix("transformed matrix is singular at the working tolerance")
    return BForm(n=f.n, b=b2, b_inv=np.linalg.inv(b2), tau=f.tau, q=f.q)


def parse_b_matrix(obj: dict) -> np.ndarray:
    """Parse the b-matrix JSON object {"n": int, "entries": [[[re,im],...],...]}."""
    if not isinstance(obj, dict) or "n" not in obj or "entries" not in obj:
        raise ValueError("b-matrix object must have 'n' and 'entries' fields")
    n = obj["n"]
    if not isinstance(n, int) or n < 2:
        raise ValueError("'n' must be an integer >= 2")
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != n:
        raise ValueError(f"'entries' must be a list of {n} rows")
    mat = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != n:
            raise ValueError(f"row {i} must have exactly {n} entries")
        for j, pair in enumerate(row):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ValueError(f"entry ({i},{j}) must be an [re, im] pair")
            mat[i, j] = complex(float(pair[0]), float(pair[1]))
    return mat


def b_matrix_to_obj(f: BForm) -> dict:
    """Serialize the b matrix back to the JSON object form."""
    return {
        "n": f.n,
        "entries": [[[v.real, v.imag] for v in row] for row in f.b],
    }


def load_bform(path, **kwargs) -> BForm:
    """Read a b matrix from a JSON file and build the BForm."""
    with open(Path(path), "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    return make_bform(parse_b_matrix(obj), **kwargs)
