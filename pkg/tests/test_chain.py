"""Chain Hamiltonian assembly, spectra, and isotypic multiplicity matching."""

import numpy as np
import pytest

import tlspin as t
from tlspin.chain import Cluster, SpectrumReport


def dense_chain_oracle(f, N):
    """Independent dense assembly: sum of np.kron placements of the generator."""
    x = t.local_X(f).mat
    n = f.n
    total = np.zeros((n ** N, n ** N), dtype=complex)
    for j in range(1, N):
        term = np.eye(1, dtype=complex)
        for site in range(1, N + 1):
            if site == j:
                term = np.kron(term, x)
            elif site == j + 1:
                continue
            else:
                term = np.kron(term, np.eye(n, dtype=complex))
        total += term
    return total


def cluster_map(report):
    return {round(c.value.real, 6) + 1j * round(c.value.imag, 6): c.multiplicity for c in report.clusters}


class TestHamiltonian:
    def test_two_sites_is_generator(self, kls):
        h = t.hamiltonian(kls, 2)
        assert np.array_equal(h.matrix.toarray(), t.local_X(kls).mat)

    def test_kls_three_sites_real_symmetric(self, kls):
        h = t.hamiltonian(kls, 3)
        dense = h.matrix.toarray()
        assert dense.shape == (27, 27)
        assert np.max(np.abs(dense.imag)) == 0.0
        assert np.max(np.abs(dense - dense.T)) == 0.0
        assert h.is_hermitian()

    def test_matches_dense_oracle(self, kls, xxz):
        for f, N in ((kls, 3), (xxz, 3), (xxz, 4)):
            h = t.hamiltonian(f, N)
            assert np.max(np.abs(h.matrix.toarray() - dense_chain_oracle(f, N))) <= 1e-14

    def test_budget(self, xxz):
        t.hamiltonian(xxz, 14)  # 16384 fits the sparse budget
        with pytest.raises(t.SizeBudgetExceeded):
            t.hamiltonian(xxz, 15)


class TestSpectrum:
    def test_kls_two_sites(self, kls):
        rep = t.spectrum(t.hamiltonian(kls, 2))
        assert rep.hermitian
        assert cluster_map(rep) == {0: 8, 5.25: 1}

    def test_kls_three_sites(self, kls):
        rep = t.spectrum(t.hamiltonian(kls, 3))
        clusters = cluster_map(rep)
        assert clusters == {0: 21, 4.25: 3, 6.25: 3}

    def test_kls_cluster_values_tight(self, kls):
        rep = t.spectrum(t.hamiltonian(kls, 3))
        values = sorted(c.value.real for c in rep.clusters)
        for got, want in zip(values, (0.0, 4.25, 6.25)):
            assert abs(got - want) <= 1e-8

    def test_xxz_two_sites(self, xxz):
        rep = t.spectrum(t.hamiltonian(xxz, 2))
        clusters = cluster_map(rep)
        assert clusters[0] == 3
        (other,) = [v for v in clusters if v != 0]
        assert abs(other - (-10 / 3)) <= 1e-6
        assert clusters[other] == 1

    def test_two_sites_generic_b(self, random_bform):
        # {0 x (n^2-1), tau x 1} for every valid b; general solver path
        for seed in range(6):
            f = random_bform(70 + seed, 2 + seed % 3)
            rep = t.spectrum(t.hamiltonian(f, 2))
            mults = sorted(c.multiplicity for c in rep.clusters)
            assert mults == [1, f.n ** 2 - 1]
            tau_cluster = min(rep.clusters, key=lambda c: c.multiplicity)
            assert abs(tau_cluster.value - f.tau) <= 1e-6 * (1 + abs(f.tau))

    def test_non_hermitian_flagged(self):
        f = t.builtin_bform("kls", 1 + 0.5j)
        h = t.hamiltonian(f, 2)
        assert not h.is_hermitian()
        rep = t.spectrum(h)
        assert not rep.hermitian

    def test_total_conservation(self, kls):
        rep = t.spectrum(t.hamiltonian(kls, 4))
        assert rep.total == 81
        assert sum(c.multiplicity for c in rep.clusters) == 81

    def test_clusters_sorted(self, kls):
        rep = t.spectrum(t.hamiltonian(kls, 4))
        vals = [(c.value.real, c.value.imag) for c in rep.clusters]
        assert vals == sorted(vals)

    def test_raw_eigenvalues_consistent_with_clusters(self, kls):
        rep = t.spectrum(t.hamiltonian(kls, 3))
        assert len(rep.eigenvalues) == 27
        for c in rep.clusters:
            members = [
                v for v in rep.eigenvalues
                if abs(v - c.value) <= rep.cluster_tol * (1 + abs(v))
            ]
            assert len(members) == c.multiplicity

    def test_budget(self, xxz):
        h = t.hamiltonian(xxz, 13)
        with pytest.raises(t.SizeBudgetExceeded):
            t.spectrum(h)


class TestIsotypic:
    def test_kls_three_sites(self, kls):
        rep = t.spectrum(t.hamiltonian(kls, 3))
        table = t.decomposition_table(3, 3)
        asg = t.check_isotypic(rep, table)
        assert asg.per_k == {1: 2, 3: 1}
        by_mult = {c.multiplicity: d for c, d in zip(rep.clusters, asg.per_cluster)}
        assert by_mult[21] == {3: 1}
        assert by_mult[3] == {1: 1}

    def test_kls_two_sites(self, kls):
        rep = t.spectrum(t.hamiltonian(kls, 2))
        asg = t.check_isotypic(rep, t.decomposition_table(3, 2))
        assert asg.per_k == {0: 1, 2: 1}

    def test_kls_four_sites(self, kls):
        rep = t.spectrum(t.hamiltonian(kls, 4))
        asg = t.check_isotypic(rep, t.decomposition_table(3, 4))
        assert asg.per_k == {0: 2, 2: 3, 4: 1}
        # every cluster multiplicity decomposes over {1, 8, 55}
        for combo, cluster in zip(asg.per_cluster, rep.clusters):
            dims = {0: 1, 2: 8, 4: 55}
            assert sum(a * dims[k] for k, a in combo.items()) == cluster.multiplicity

    def test_xxz_five_sites(self, xxz):
        rep = t.spectrum(t.hamiltonian(xxz, 5))
        asg = t.check_isotypic(rep, t.decomposition_table(2, 5))
        assert asg.per_k == {k: v for k, v in t.mult_nu(5).items()}

    def test_longer_chains_recover_all_multiplicities(self, xxz, kls):
        for f, n, N in ((xxz, 2, 6), (xxz, 2, 8), (kls, 3, 5)):
            rep = t.spectrum(t.hamiltonian(f, N))
            asg = t.check_isotypic(rep, t.decomposition_table(n, N))
            assert asg.per_k == t.mult_nu(N)

    def test_non_hermitian_path(self):
        # complex p: general eigensolver, looser clustering, same bookkeeping
        f = t.builtin_bform("kls", 1 + 0.5j)
        rep = t.spectrum(t.hamiltonian(f, 3))
        assert not rep.hermitian
        asg = t.check_isotypic(rep, t.decomposition_table(3, 3))
        assert asg.per_k == {1: 2, 3: 1}
        zero_cluster = min(rep.clusters, key=lambda c: abs(c.value))
        assert zero_cluster.multiplicity == 21

    def test_mismatched_shapes_rejected(self, kls):
        rep = t.spectrum(t.hamiltonian(kls, 2))
        with pytest.raises(ValueError):
            t.check_isotypic(rep, t.decomposition_table(3, 3))

    def test_impossible_multiplicities(self):
        fake = SpectrumReport(
            n=3,
            N=2,
            clusters=(Cluster(0.0 + 0j, 2), Cluster(1.0 + 0j, 7)),
            total=9,
            hermitian=True,
            cluster_tol=1e-8,
        )
        with pytest.raises(t.NoConsistentAssignment):
            t.check_isotypic(fake, t.decomposition_table(3, 2))


class TestGlobalWeight:
    def test_kls_chains(self, kls):
        for N in (3, 4):
            assert t.check_global_weight_symmetry(kls, N).max_residual <= 1e-10
