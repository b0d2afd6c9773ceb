"""Constant and Baxterized braid matrices: algebraic identity checks."""

import numpy as np
import pytest

import tlspin as t
from tlspin.linalg import max_abs


def xxz_braid_literal(q):
    w = q - 1 / q
    return np.array([[q, 0, 0, 0], [0, w, 1, 0], [0, 1, 0, 0], [0, 0, 0, q]], dtype=complex)


class TestConstantR:
    def test_xxz_matches_literal(self, xxz):
        assert np.max(np.abs(t.constant_R(xxz).mat - xxz_braid_literal(3))) <= 1e-14

    def test_characteristic_equation(self, kls, xxz, random_bform):
        for f in (kls, xxz, random_bform(2, 3)):
            r = t.constant_R(f).mat
            eye = np.eye(f.n ** 2)
            resid = (r - f.q * eye) @ (r + eye / f.q)
            assert max_abs(resid) <= 1e-12 * max(1.0, max_abs(r) ** 2)

    def test_inverse_formula(self, kls):
        prod = t.constant_R(kls).mat @ t.constant_R_inverse(kls).mat
        assert max_abs(prod - np.eye(9)) <= 1e-12

    def test_spectrum_two_clusters(self, kls, xxz, random_bform):
        for f in (kls, xxz, random_bform(8, 3)):
            vals = np.linalg.eigvals(t.constant_R(f).mat)
            near_q = np.sum(np.abs(vals - f.q) <= 1e-8 * (1 + abs(f.q)))
            near_inv = np.sum(np.abs(vals + 1 / f.q) <= 1e-8 * (1 + abs(f.q)))
            assert near_q == f.n ** 2 - 1
            assert near_inv == 1


class TestProjectors:
    def test_kls_ranks(self, kls):
        p_plus, p_minus = t.projectors(kls)
        s_plus = np.linalg.svd(p_plus.mat, compute_uv=False)
        s_minus = np.linalg.svd(p_minus.mat, compute_uv=False)
        assert int(np.sum(s_plus > 1e-8 * s_plus[0])) == 8
        assert int(np.sum(s_minus > 1e-8 * s_minus[0])) == 1

    def test_xxz_ranks(self, xxz):
        p_plus, p_minus = t.projectors(xxz)
        assert np.linalg.matrix_rank(p_plus.mat, tol=1e-8) == 3
        assert np.linalg.matrix_rank(p_minus.mat, tol=1e-8) == 1

    def test_idempotent_orthogonal_complete(self, kls):
        p_plus, p_minus = t.projectors(kls)
        assert max_abs(p_plus.mat @ p_plus.mat - p_plus.mat) <= 1e-12
        assert max_abs(p_minus.mat @ p_minus.mat - p_minus.mat) <= 1e-12
        assert max_abs(p_plus.mat @ p_minus.mat) <= 1e-12
        assert max_abs(p_plus.mat + p_minus.mat - np.eye(9)) == 0.0

    def test_projector_resolution_of_R(self, kls):
        p_plus, p_minus = t.projectors(kls)
        resolved = kls.q * p_plus.mat - p_minus.mat / kls.q
        assert max_abs(t.constant_R(kls).mat - resolved) <= 1e-12

    def test_zero_tau_rejected(self):
        # q0 = i gives tau = 0 (only constructible with the unimodular opt-in)
        f = t.builtin_bform("xxz", 1j, allow_unimodular_q=True)
        assert abs(f.tau) <= 1e-15
        with pytest.raises(t.DegenerateParameter):
            t.projectors(f)


class TestSpectralR:
    def test_unit_parameter_is_scalar(self, kls):
        mat = t.spectral_R(kls, 1).op.mat
        w = kls.q - 1 / kls.q
        assert max_abs(mat - w * np.eye(9)) <= 1e-14

    def test_inverse_q_parameter_is_pure_generator(self, kls):
        mat = t.spectral_R(kls, 1 / kls.q).op.mat
        w = kls.q - 1 / kls.q
        assert max_abs(mat + w * t.local_X(kls).mat) <= 1e-12

    def test_two_construction_formulas_agree(self, kls):
        u = 2.0
        first = t.spectral_R(kls, u).op.mat
        second = u * t.constant_R(kls).mat - (1 / u) * t.constant_R_inverse(kls).mat
        assert max_abs(first - second) <= 1e-12

    def test_zero_parameter_rejected(self, kls):
        with pytest.raises(t.ZeroSpectralParameter):
            t.spectral_R(kls, 0)

    def test_unitarity_closed_form(self, kls, xxz):
        rng = np.random.default_rng(17)
        for f in (kls, xxz):
            for _ in range(5):
                u = rng.uniform(0.5, 2) * np.exp(1j * rng.uniform(0, 2 * np.pi))
                assert t.check_unitarity(f, u).passed


class TestBraidAndYangBaxter:
    def test_braid_builtin(self, kls, xxz):
        assert t.check_braid(kls).max_residual <= 1e-10
        assert t.check_braid(xxz).max_residual <= 1e-12

    def test_braid_random(self, random_bform):
        for seed in range(20):
            f = random_bform(300 + seed, 2 + seed % 3)
            assert t.check_braid(f).max_residual <= 1e-9

    def test_spectral_trivial_point(self, kls):
        assert t.check_spectral_ybe(kls, 1, 1).max_residual == 0.0

    def test_spectral_kls(self, kls):
        assert t.check_spectral_ybe(kls, 2, 0.7).max_residual <= 1e-9

    def test_spectral_xxz_unit_circle(self, xxz):
        rng = np.random.default_rng(23)
        for _ in range(20):
            u, v = np.exp(1j * rng.uniform(0, 2 * np.pi, 2))
            assert t.check_spectral_ybe(xxz, u, v).max_residual <= 1e-10


class TestCubicIdentities:
    def test_scalar_prefactor_identity(self, random_bform):
        # nu(q) q - q^2 = 1 underlies the constant cubic identity
        for seed in range(10):
            f = random_bform(seed, 3)
            assert abs(f.nu * f.q - f.q ** 2 - 1) <= 1e-10 * (1 + abs(f.q) ** 2)

    def test_kls(self, kls):
        report = t.check_tl_cubic(kls)
        assert report.max_residual <= 1e-8
        assert {c.name for c in report.checks} == {
            "cubic_spectral_121",
            "cubic_spectral_212",
            "cubic_constant_121",
            "cubic_constant_212",
        }

    def test_xxz(self, xxz):
        assert t.check_tl_cubic(xxz).max_residual <= 1e-10


class TestAntisymmetrizer:
    def test_winner_is_cubed_inverse_for_both_families(self, kls, xxz):
        for f in (kls, xxz):
            res = t.q_antisymmetrizer(f)
            assert res.winner == "q^-3"
            assert res.residual <= 1e-8
            assert res.candidate_residuals["q^-1"] > 1e-2
            assert abs(res.coefficient_used - f.q ** -3) == 0.0

    def test_same_winner_across_random_b(self, random_bform):
        for seed in range(10):
            f = random_bform(600 + seed, 2 + seed % 3)
            res = t.q_antisymmetrizer(f)
            assert res.winner == "q^-3"

    def test_best_fit_agrees_with_winner(self, kls):
        res = t.q_antisymmetrizer(kls)
        assert abs(res.best_fit - kls.q ** -3) <= 1e-8 * abs(kls.q ** -3)

    def test_proportional_idempotent(self, kls):
        # with the winning coefficient the operator vanishes, so its square
        # is proportional to it with any constant
        res = t.q_antisymmetrizer(kls)
        scale = max(1.0, max_abs(res.op))
        assert max_abs(res.op @ res.op) <= 1e-8 * scale
        assert res.residual <= 1e-8

    def test_report_flags_unique_candidate(self, kls):
        report = t.q_antisymmetrizer(kls).report
        assert report.passed


class TestWeightSymmetry:
    def test_kls_local(self, kls):
        report = t.check_weight_symmetry(kls)
        assert report.max_residual <= 1e-12

    def test_rejects_wrong_dimension(self, xxz):
        with pytest.raises(t.UnsupportedDimension):
            t.check_weight_symmetry(xxz)
