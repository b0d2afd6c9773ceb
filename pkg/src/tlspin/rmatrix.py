"""Braid-form R-matrix, its Baxterization, projectors, and identity checks.

The constant solution is R = q I + X; it obeys the quadratic characteristic
equation (R - q)(R + 1/q) = 0 and the braid relation, and splits into
complementary projectors R = q P_plus - (1/q) P_minus.  Promoting it with
the weight w(z) = z - 1/z gives the one-parameter family
R(u) = w(uq) I + w(u) X solving the spectral Yang-Baxter equation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bform import BForm
from .errors import DegenerateParameter, UnsupportedDimension, ZeroSpectralParameter
from .linalg import GLOBAL_TOL, rel_residual
from .reports import ResidualReport
from .tl_rep import LocalOp, local_X

# Candidate labels for the triple-term coefficient of the degree-3
# antisymmetrizer; see q_antisymmetrizer.
ANTISYM_CANDIDATES = ("q^-1", "q^-3")


def spectral_weight(z: complex) -> complex:
    """The Baxterization weight w(z) = z - 1/z."""
    if z == 0:
        raise ZeroSpectralParameter("weight undefined at z = 0")
    return z - 1 / z


@dataclass(frozen=True)
class SpectralR:
    """The Baxterized solution R(u) = w(uq) I + w(u) X at a fixed u."""

    bform: BForm
    u: complex
    op: LocalOp


def constant_R(f: BForm) -> LocalOp:
    """The constant braid solution R = q I + X."""
    x = local_X(f)
    return LocalOp(f.n, f.q * np.eye(f.n ** 2, dtype=complex) + x.mat, label="R")


def constant_R_inverse(f: BForm) -> LocalOp:
    """R^{-1} = (1/q) I + X, inverse of constant_R by the quadratic relation."""
    x = local_X(f)
    return LocalOp(f.n, (1 / f.q) * np.eye(f.n ** 2, dtype=complex) + x.mat, label="R_inv")


def projectors(f: BForm) -> tuple[LocalOp, LocalOp]:
    """Complementary idempotents (P_plus, P_minus) with R = q P_plus - (1/q) P_minus.

    P_minus = X / tau has rank one; P_plus = I - P_minus has rank n^2 - 1.
    """
    if abs(f.tau) <= GLOBAL_TOL:
        raise DegenerateParameter("projectors need tau != 0")
    x = local_X(f)
    p_minus = x.mat / f.tau
    p_plus = np.eye(f.n ** 2, dtype=complex) - p_minus
    return LocalOp(f.n, p_plus, label="P+"), LocalOp(f.n, p_minus, label="P-")


def spectral_R(f: BForm, u: complex) -> SpectralR:
    """Baxterized matrix w(uq) I + w(u) X; equals u R - (1/u) R^{-1}."""
    u = complex(u)
    if u == 0:
        raise ZeroSpectralParameter("spectral parameter u must be nonzero")
    x = local_X(f)
    mat = spectral_weight(u * f.q) * np.eye(f.n ** 2, dtype=complex) + spectral_weight(u) * x.mat
    return SpectralR(bform=f, u=u, op=LocalOp(f.n, mat, label=f"R(u={u:g})"))


def _pair_embeds(mat: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Dense placements of a two-site operator at sites (1,2) and (2,3) of three."""
    eye = np.eye(n, dtype=complex)
    return np.kron(mat, eye), np.kron(eye, mat)


def check_braid(f: BForm, *, tol: float = 1e-8) -> ResidualReport:
    """Residual of R12 R23 R12 - R23 R12 R23 on three sites."""
    r = constant_R(f).mat
    r12, r23 = _pair_embeds(r, f.n)
    lhs = r12 @ r23 @ r12
    rhs = r23 @ r12 @ r23
    report = ResidualReport(config={"family": f.family, "n": f.n})
    report.add("braid", rel_residual(lhs - rhs, [lhs, rhs]), tol)
    return report


def check_spectral_ybe(f: BForm, u: complex, v: complex, *, tol: float = 1e-8) -> ResidualReport:
    """Residual of R12(u) R23(uv) R12(v) - R23(v) R12(uv) R23(u)."""
    ru, ruv, rv = (spectral_R(f, z).op.mat for z in (u, u * v, v))
    ru12, ru23 = _pair_embeds(ru, f.n)
    ruv12, ruv23 = _pair_embeds(ruv, f.n)
    rv12, rv23 = _pair_embeds(rv, f.n)
    lhs = ru12 @ ruv23 @ rv12
    rhs = rv23 @ ruv12 @ ru23
    report = ResidualReport(config={"family": f.family, "n": f.n, "u": str(u), "v": str(v)})
    report.add("spectral_ybe", rel_residual(lhs - rhs, [lhs, rhs]), tol)
    return report


def check_tl_cubic(f: BForm, *, tol: float = 1e-8) -> ResidualReport:
    """Both cubic identities: the Baxterized product at (q^-1, q^-2, q^-1)
    and the constant form (R_i - q)(nu R_k - q^2)(R_i - q), in both site orders."""
    q = f.q
    n = f.n
    eye3 = np.eye(n ** 3, dtype=complex)
    report = ResidualReport(config={"family": f.family, "n": f.n})

    a = spectral_R(f, 1 / q).op.mat
    b = spectral_R(f, 1 / q ** 2).op.mat
    a12, a23 = _pair_embeds(a, n)
    b12, b23 = _pair_embeds(b, n)
    # residuals are relative to the largest factor entry (|q| > 1 inflates
    # absolute products)
    report.add("cubic_spectral_121", rel_residual(a12 @ b23 @ a12, [a12, b23]), tol)
    report.add("cubic_spectral_212", rel_residual(a23 @ b12 @ a23, [a23, b12]), tol)

    r = constant_R(f).mat
    r12, r23 = _pair_embeds(r, n)
    nu = f.nu
    for name, (ri, rk) in (("cubic_constant_121", (r12, r23)), ("cubic_constant_212", (r23, r12))):
        left = ri - q * eye3
        mid = nu * rk - q ** 2 * eye3
        report.add(name, rel_residual(left @ mid @ left, [left, mid]), tol)
    return report


@dataclass(frozen=True)
class AntisymmetrizerResult:
    """Outcome of the degree-3 antisymmetrizer vanishing scan."""

    op: np.ndarray
    residual: float
    coefficient_used: complex
    winner: str
    candidate_residuals: dict
    best_fit: complex
    report: ResidualReport


def q_antisymmetrizer(f: BForm, *, tol: float = 1e-8) -> AntisymmetrizerResult:
    """Determine which triple-term coefficient annihilates the antisymmetrizer.

    Builds A3(c) = I - q^-1 (R12 + R23) + q^-2 (R12 R23 + R23 R12) - c R12 R23 R12
    and evaluates the candidates c = q^-1, c = q^-3 and the least-squares
    best fit; the returned winner is the unique named candidate with
    relative residual <= tol (falling back to the best fit if none or both
    qualify).  The vanishing coefficient is resolved numerically rather than
    assumed.
    """
    q = f.q
    n = f.n
    r = constant_R(f).mat
    r12, r23 = _pair_embeds(r, n)
    eye = np.eye(n ** 3, dtype=complex)
    base = eye - (r12 + r23) / q + (r12 @ r23 + r23 @ r12) / q ** 2
    triple = r12 @ r23 @ r12

    candidates = {"q^-1": 1 / q, "q^-3": q ** -3}
    best_fit = complex(np.vdot(triple, base) / np.vdot(triple, triple))
    candidates["best-fit"] = best_fit

    scale_terms = [eye, (r12 + r23) / q, (r12 @ r23 + r23 @ r12) / q ** 2]
    residuals = {}
    for name, c in candidates.items():
        a3 = base - c * triple
        residuals[name] = rel_residual(a3, scale_terms + [c * triple])

    named_hits = [name for name in ANTISYM_CANDIDATES if residuals[name] <= tol]
    winner = named_hits[0] if len(named_hits) == 1 else "best-fit"
    coeff = candidates[winner]
    a3 = base - coeff * triple

    report = ResidualReport(config={"family": f.family, "n": f.n})
    report.add(f"antisym_vanishing[{winner}]", residuals[winner], tol)
    report.add("antisym_unique_named_candidate", float(abs(len(named_hits) - 1)), 0.0)
    return AntisymmetrizerResult(
        op=a3,
        residual=residuals[winner],
        coefficient_used=coeff,
        winner=winner,
        candidate_residuals=residuals,
        best_fit=best_fit,
        report=report,
    )


def check_unitarity(f: BForm, u: complex, *, tol: float = GLOBAL_TOL) -> ResidualReport:
    """Regression guard: R(u) R(1/u) against its closed scalar form."""
    w = spectral_weight
    q = f.q
    x = local_X(f).mat
    eye = np.eye(f.n ** 2, dtype=complex)
    lhs = spectral_R(f, u).op.mat @ spectral_R(f, 1 / u).op.mat
    coeff_x = w(u * q) * w(1 / u) + w(u) * w(q / u) + f.tau * w(u) * w(1 / u)
    rhs = w(u * q) * w(q / u) * eye + coeff_x * x
    report = ResidualReport(config={"family": f.family, "u": str(u)})
    report.add("spectral_unitarity", rel_residual(lhs - rhs, [lhs, rhs]), tol)
    return report


def weight_operator(n: int) -> np.ndarray:
    """Diagonal weight h = diag(1, 0, -1) for the 3-dimensional local space."""
    if n != 3:
        raise UnsupportedDimension("weight operator is defined for n = 3")
    return np.diag([1.0, 0.0, -1.0]).astype(complex)


def check_weight_symmetry(f: BForm, *, tol: float = 1e-12) -> ResidualReport:
    """[R, h (x) I + I (x) h] for the antidiagonal (kls) family."""
    h = weight_operator(f.n)
    eye = np.eye(f.n, dtype=complex)
    total = np.kron(h, eye) + np.kron(eye, h)
    r = constant_R(f).mat
    comm = r @ total - total @ r
    report = ResidualReport(config={"family": f.family})
    report.add("weight_symmetry_local", rel_residual(comm, [r @ total, total @ r]), tol)
    return report
