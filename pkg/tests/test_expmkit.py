import math

import numpy as np
import pytest

from commexp.errors import (
    CongruenceViolationError,
    IllConditionedError,
    SnapUnavailableError,
)
from commexp.expmkit import ExpMethod, expm, expm_affine, log_poly_recover
from commexp.families import intro_pair
from commexp.numkernel import CMat, combine_affine

from conftest import random_matrix, rel_residual

PI = math.pi
ENGINES = (ExpMethod.SPECTRAL_HERMITE, ExpMethod.PADE_SQUARING)


class TestExpmBasics:
    def test_zero(self):
        assert np.allclose(expm(np.zeros((3, 3))), np.eye(3), atol=1e-15)

    def test_nilpotent_truncates(self):
        n = np.array([[0, 1], [0, 0]], dtype=complex)
        for method in ENGINES:
            assert np.allclose(expm(n, method), np.eye(2) + n, atol=1e-14)

    def test_intro_exponentials(self):
        a, b = intro_pair()
        assert np.allclose(expm(a), np.eye(2), atol=1e-10)
        assert np.allclose(expm(b), -np.eye(2), atol=1e-10)
        assert np.allclose(expm(combine_affine(a, b, 1)), -np.eye(2), atol=1e-10)

    def test_exact_snap_returns_literal_units(self):
        a, b = intro_pair()
        assert np.array_equal(expm(a, ExpMethod.EXACT_PI_SNAP), np.eye(2))
        assert np.array_equal(expm(b, ExpMethod.EXACT_PI_SNAP), -np.eye(2))

    def test_exact_snap_mixed_parity_projectors(self):
        m = np.array([[1j * PI, 1], [0, 0]])
        got = expm(m, ExpMethod.EXACT_PI_SNAP)
        # closed form: entry (0,1) is (e^{i pi} - 1)/(i pi) = 2i/pi
        want = np.array([[-1, 2j / PI], [0, 1]])
        assert np.allclose(got, want, atol=1e-14)
        assert rel_residual(got, expm(m, ExpMethod.SPECTRAL_HERMITE)) < 1e-12

    def test_snap_unavailable_off_lattice(self):
        a, b = intro_pair()
        with pytest.raises(SnapUnavailableError):
            expm(combine_affine(a, b, 6), ExpMethod.EXACT_PI_SNAP)

    def test_snap_unavailable_defective(self):
        with pytest.raises(SnapUnavailableError):
            expm(np.array([[0, 1], [0, 0]]), ExpMethod.EXACT_PI_SNAP)

    def test_ill_conditioned_raises_then_auto_falls_back(self):
        lam = 8e-9  # eigenvalues +-8e-9: distinct clusters, eigenbasis cond ~1.2e8
        m = np.array([[0, 1], [lam * lam, 0]], dtype=complex)
        with pytest.raises(IllConditionedError):
            expm(m, ExpMethod.SPECTRAL_HERMITE)
        auto = expm(m)
        assert np.allclose(auto, np.eye(2) + m, atol=1e-12)

    def test_affine(self):
        a, b = intro_pair()
        assert np.allclose(expm_affine(a, CMat.zeros(2), 0.0), np.eye(2), atol=1e-15)
        assert np.allclose(expm_affine(a, b, 1), -np.eye(2), atol=1e-10)

    def test_theorem2_affine_closed_form(self):
        u = 2.088843015613044 + 7.461489285654254j
        a = np.array([[0, 1], [0, 0]], dtype=complex)
        b = np.array([[u, 0], [0, 0]], dtype=complex)
        for t in (0.5, 2, -3 + 1j):
            got = expm_affine(a, b, t)
            want = np.eye(2) + t * a + b
            assert rel_residual(got, want) < 1e-12


class TestEngineCrossChecks:
    def test_agreement_500(self, rng):
        worst = 0.0
        for _ in range(500):
            d = int(rng.integers(1, 4))
            m = random_matrix(rng, d, norm=5.0)
            e1 = expm(m, ExpMethod.SPECTRAL_HERMITE)
            e2 = expm(m, ExpMethod.PADE_SQUARING)
            worst = max(worst, rel_residual(e1, e2))
        assert worst <= 1e-9

    def test_inverse_identity(self, rng):
        for _ in range(100):
            d = int(rng.integers(1, 4))
            m = random_matrix(rng, d, norm=5.0)
            prod = expm(m) @ expm(-m)
            assert rel_residual(prod, np.eye(d)) <= 1e-8

    def test_det_exp_is_exp_trace(self, rng):
        for _ in range(100):
            d = int(rng.integers(1, 4))
            m = random_matrix(rng, d, norm=5.0)
            det = np.linalg.det(expm(m))
            want = np.exp(m.trace())
            assert abs(det - want) <= 1e-8 * max(1.0, abs(want))

    def test_commuting_product_rule(self, rng):
        for _ in range(60):
            d = int(rng.integers(2, 4))
            m = random_matrix(rng, d, norm=1.5)
            n = 0.3 * m @ m - 0.7 * m + 0.1 * np.eye(d)
            assert rel_residual(expm(m + n), expm(m) @ expm(n)) <= 1e-8

    def test_large_t_pi_scaled(self):
        # norms up to ~2.6e4; exact and spectral paths must agree with Pade
        a, b = intro_pair()
        for n in (10, 20):
            m = combine_affine(CMat(n * a.entries, pi_scaled=True), b, 1)
            m = CMat(n * (a.entries + b.entries), pi_scaled=True)
            exact = expm(m, ExpMethod.EXACT_PI_SNAP)
            spectral = expm(m, ExpMethod.SPECTRAL_HERMITE)
            assert np.array_equal(exact, (-1) ** n * np.eye(2))
            assert rel_residual(spectral, exact) <= 1e-9


class TestLogPolyRecover:
    def test_nilpotent(self):
        n = np.array([[0, 1], [0, 0]], dtype=complex)
        p = log_poly_recover(n)
        assert np.allclose(p.coefficients, [-1, 1])
        assert np.allclose(p.apply(np.eye(2) + n), n, atol=1e-14)

    def test_distinct_real_diagonal(self):
        p = log_poly_recover(np.diag([1.0, 2.0]))
        e1, e2 = math.e, math.e**2
        # line through (e, 1) and (e^2, 2)
        slope = 1 / (e2 - e1)
        assert p(e1) == pytest.approx(1, abs=1e-12)
        assert p(e2) == pytest.approx(2, abs=1e-12)
        assert p.coefficients[1] == pytest.approx(slope, abs=1e-12)

    def test_congruence_violation(self):
        with pytest.raises(CongruenceViolationError):
            log_poly_recover(np.diag([1j * PI, -1j * PI]))

    def test_round_trip_random(self, rng):
        # ||F|| <= 2 keeps every spectrum 2*i*pi-congruence free
        for _ in range(200):
            d = int(rng.integers(2, 4))
            f = random_matrix(rng, d, norm=2.0)
            p = log_poly_recover(f)
            assert rel_residual(p.apply(expm(f)), f) <= 1e-8

    def test_degree_below_dim(self, rng):
        f = random_matrix(rng, 3, norm=2.0)
        assert len(log_poly_recover(f).coefficients) <= 3
