"""Open-chain Hamiltonian, spectra, and degeneracy bookkeeping.

The Hamiltonian is the sum of the two-site generators over all bonds.  Its
eigenvalue multiplicities are explained entirely by the double
decomposition: every cluster multiplicity is an integer combination of the
p_k(n), with each k used across clusters exactly nu_k(N) times.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bform import BForm
from .errors import ConvergenceFailure, NoConsistentAssignment
from .linalg import DENSE_SIZE_BUDGET, SPARSE_SIZE_BUDGET, check_size_budget, rel_residual
from .reports import ResidualReport, complex_to_pair
from .rep_ring import DecompositionTable
from .rmatrix import weight_operator
from .tl_rep import ChainOp, LocalOp, embed, local_X

CLUSTER_TOL_HERMITIAN = 1e-8
CLUSTER_TOL_GENERAL = 1e-6

HERMITICITY_TOL = 1e-12


def hamiltonian(f: BForm, N: int, *, budget: int = SPARSE_SIZE_BUDGET) -> ChainOp:
    """H = sum over bonds of the embedded two-site generator, in sparse form."""
    if N < 2:
        raise ValueError("chain needs N >= 2")
    check_size_budget(f.n ** N, budget, "hamiltonian")
    x = local_X(f)
    total = None
    for j in range(1, N):
        xj = embed(x, j, N, budget=budget)
        total = xj if total is None else total + xj
    return ChainOp(n=f.n, N=N, matrix=total.matrix, applier=total.applier, label="H")


@dataclass(frozen=True)
class Cluster:
    value: complex
    multiplicity: int


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues grouped into degenerate clusters.

    The raw (unclustered) eigenvalue list is kept alongside for the CSV
    hand-off; the JSON form carries clusters only.
    """

    n: int
    N: int
    clusters: tuple
    total: int
    hermitian: bool
    cluster_tol: float
    eigenvalues: tuple = ()

    def __post_init__(self) -> None:
        if sum(c.multiplicity for c in self.clusters) != self.total:
            raise ValueError("cluster multiplicities do not sum to the space dimension")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "hermitian": self.hermitian,
            "cluster_tol": self.cluster_tol,
            "total": self.total,
            "clusters": [
                {"value": complex_to_pair(c.value), "multiplicity": c.multiplicity}
                for c in self.clusters
            ],
        }


def _cluster_eigenvalues(values: np.ndarray, tol: float) -> list[Cluster]:
    order = np.lexsort((values.imag, values.real))
    ordered = values[order]
    groups: list[list[complex]] = []
    for lam in ordered:
        if groups:
            ref = np.mean(groups[-1])
            if abs(lam - ref) <= tol * (1 + abs(lam)):
                groups[-1].append(lam)
                continue
        groups.append([lam])
    clusters = [Cluster(value=complex(np.mean(g)), multiplicity=len(g)) for g in groups]
    clusters.sort(key=lambda c: (c.value.real, c.value.imag))
    return clusters


def spectrum(
    h: ChainOp,
    cluster_tol: float | None = None,
    *,
    budget: int = DENSE_SIZE_BUDGET,
) -> SpectrumReport:
    """Full eigenvalue list of a chain operator, greedily clustered.

    Uses the Hermitian solver when the operator is Hermitian at the working
    tolerance (tighter default clustering); the general solver otherwise.
    """
    check_size_budget(h.dim, budget, "spectrum")
    dense = h.to_dense(budget=budget)
    hermitian = h.is_hermitian(HERMITICITY_TOL)
    if cluster_tol is None:
        cluster_tol = CLUSTER_TOL_HERMITIAN if hermitian else CLUSTER_TOL_GENERAL
    try:
        if hermitian:
            values = np.linalg.eigvalsh(dense).astype(complex)
        else:
            values = np.linalg.eigvals(dense)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigensolver failed: {exc}") from exc
    clusters = tuple(_cluster_eigenvalues(values, cluster_tol))
    order = np.lexsort((values.imag, values.real))
    return SpectrumReport(
        n=h.n,
        N=h.N,
        clusters=clusters,
        total=h.dim,
        hermitian=hermitian,
        cluster_tol=cluster_tol,
        eigenvalues=tuple(complex(v) for v in values[order]),
    )


@dataclass(frozen=True)
class IsotypicAssignment:
    """Integer explanation of every cluster multiplicity.

    per_cluster[i] maps k -> a_k with multiplicity_i = sum a_k p_k(n);
    per_k totals the a_k over clusters and equals nu_k(N).
    """

    per_cluster: tuple
    per_k: dict

    def to_dict(self) -> dict:
        return {
            "per_cluster": [dict(sorted(d.items())) for d in self.per_cluster],
            "per_k": dict(sorted(self.per_k.items())),
        }


def _decompositions(target: int, dims: list[tuple[int, int]], caps: dict[int, int]):
    """All ways to write target = sum a_k p_k with 0 <= a_k <= caps[k]."""
    if not dims:
        if target == 0:
            yield {}
        return
    k, p = dims[0]
    for a in range(min(target // p, caps[k]) + 1):
        for rest in _decompositions(target - a * p, dims[1:], caps):
            if a:
                yield {k: a, **rest}
            else:
                yield rest


def check_isotypic(report: SpectrumReport, table: DecompositionTable) -> IsotypicAssignment:
    """Match cluster multiplicities against the decomposition table.

    Finds non-negative integers a[cluster, k] with every cluster multiplicity
    equal to sum_k a p_k(n) and the per-k totals equal to nu_k(N); exact
    backtracking over the (small) cluster list.
    """
    if (report.n, report.N) != (table.n, table.N):
        raise ValueError("spectrum and table describe different (n, N)")
    dims = sorted(((r.k, r.p_k) for r in table.rows), key=lambda t: -t[1])
    remaining = {r.k: r.nu_k for r in table.rows}
    clusters = list(report.clusters)
    assignment: list[dict] = []

    def solve(idx: int) -> bool:
        if idx == len(clusters):
            return all(v == 0 for v in remaining.values())
        target = clusters[idx].multiplicity
        for combo in _decompositions(target, dims, dict(remaining)):
            for k, a in combo.items():
                remaining[k] -= a
            assignment.append(combo)
            if solve(idx + 1):
                return True
            assignment.pop()
            for k, a in combo.items():
                remaining[k] += a
        return False

    if not solve(0):
        detail = ", ".join(f"{c.value:.6g} x{c.multiplicity}" for c in clusters)
        raise NoConsistentAssignment(
            f"no integer assignment for clusters [{detail}] against p_k/nu_k of (n={table.n}, N={table.N})"
        )
    per_k = {r.k: sum(d.get(r.k, 0) for d in assignment) for r in table.rows}
    return IsotypicAssignment(per_cluster=tuple(assignment), per_k=per_k)


def check_global_weight_symmetry(f: BForm, N: int, *, tol: float = 1e-10) -> ResidualReport:
    """[H, sum_j h_j] for the antidiagonal family's diagonal weight h."""
    h_local = weight_operator(f.n)
    eye = np.eye(f.n)
    # h at sites 1..N-1 via the left slot of each bond, site N via the last right slot
    weight = embed(LocalOp(f.n, np.kron(eye, h_local), label="h_r"), N - 1, N).matrix
    left = LocalOp(f.n, np.kron(h_local, eye), label="h_l")
    for j in range(1, N):
        weight = weight + embed(left, j, N).matrix
    hm = hamiltonian(f, N).matrix
    report = ResidualReport(config={"family": f.family, "N": N})
    report.add(
        "weight_symmetry_global",
        rel_residual(hm @ weight - weight @ hm, [hm @ weight, weight @ hm]),
        tol,
    )
    return report
