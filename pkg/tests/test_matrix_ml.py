"""Tests for the clustered spectral decomposition and matrix Mittag-Leffler."""

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import rgamma

from fracstab import IllConditioned, MLParams, evaluate, ml_derivative
from fracstab.matrix_ml import as_real_matrix, decompose, gamma_scale, ml_apply


def series_oracle(A, alpha, beta, t, terms=300):
    """Direct summation of sum_k (t^alpha A)^k / Gamma(alpha k + beta)."""
    d = A.shape[0]
    out = np.zeros((d, d))
    P = np.eye(d)
    B = (t**alpha) * A
    for k in range(terms):
        out = out + rgamma(alpha * k + beta) * P
        P = P @ B
    return out


class TestDecompose:
    def test_diagonal_input(self):
        D = decompose(np.diag([-1.0, -2.0]))
        assert sorted(D.eigenvalues.real) == [-2.0, -1.0]
        assert_allclose(D.transform, np.eye(2))
        assert all(not b.nilpotent for b in D.blocks)

    def test_complex_pair(self):
        # characteristic polynomial x^2 + 2x + 2 -> -1 +/- i
        D = decompose([[0.0, 1.0], [-2.0, -2.0]])
        assert_allclose(np.sort_complex(D.eigenvalues), [-1 - 1j, -1 + 1j], atol=1e-12)

    def test_jordan_block(self):
        D = decompose([[-1.0, 1.0], [0.0, -1.0]])
        assert len(D.blocks) == 1
        b = D.blocks[0]
        assert b.size == 2
        assert b.eigenvalue == -1.0
        assert b.nilpotent

    def test_reassembly_invariant(self):
        rng = np.random.default_rng(42)
        for _ in range(10):
            A = rng.normal(size=(5, 5))
            D = decompose(A)
            resid = np.linalg.norm(D.transform @ D.block_matrix() @ D.transform_inv - A)
            assert resid <= 1e-8 * max(1.0, np.linalg.norm(A))

    def test_ill_conditioned_raises(self):
        # gap 1 with coupling 1e6: the decoupling transform needs cond ~ 1e6
        with pytest.raises(IllConditioned):
            decompose([[1.0, 1e6], [0.0, 2.0]], cond_cap=1e3)

    def test_validation(self):
        with pytest.raises(ValueError):
            as_real_matrix([[1.0, 2.0]])
        with pytest.raises(ValueError):
            as_real_matrix(np.full((2, 2), np.nan))
        with pytest.raises(ValueError):
            decompose(np.eye(2), cond_cap=0.5)


class TestGammaScale:
    def test_two_by_two_jordan(self):
        D = decompose([[-1.0, 1.0], [0.0, -1.0]])
        Dg = gamma_scale(D, 0.01)
        assert_allclose(Dg.blocks[0].offdiag[0, 1], 0.01, rtol=1e-12)
        assert Dg.blocks[0].eigenvalue == D.blocks[0].eigenvalue

    def test_diagonalizable_unchanged_blocks(self):
        D = decompose(np.diag([-1.0, -3.0]))
        Dg = gamma_scale(D, 0.37)
        for b, bg in zip(D.blocks, Dg.blocks):
            assert bg.eigenvalue == b.eigenvalue
            assert_allclose(bg.offdiag, b.offdiag)

    def test_three_by_three_block(self):
        A = -np.eye(3) + np.diag([1.0, 1.0], k=1)
        D = decompose(A)
        Dg = gamma_scale(D, 0.1)
        off = Dg.blocks[0].offdiag
        assert_allclose(off[0, 1], 0.1, atol=1e-14)
        assert_allclose(off[1, 2], 0.1, atol=1e-14)
        assert_allclose(off[0, 2], 0.0, atol=1e-14)

    def test_apply_agrees_after_scaling(self):
        A = np.array([[-1.0, 1.0], [0.0, -1.0]])
        p = MLParams(1.5, 1.0)
        F = ml_apply(decompose(A), p, 1.7)
        Fg = ml_apply(gamma_scale(decompose(A), 0.05), p, 1.7)
        assert_allclose(Fg, F, atol=1e-7)

    def test_gamma_validation(self):
        D = decompose(np.eye(2) * -1.0)
        with pytest.raises(ValueError):
            gamma_scale(D, 0.0)


class TestMlApply:
    def test_diagonal_reduces_to_scalar(self):
        p = MLParams(1.5, 1.0)
        F = ml_apply(decompose(np.diag([-1.0, -2.0])), p, 2.0)
        assert_allclose(F[0, 0], evaluate(p, -(2.0**1.5)).value.real, rtol=1e-12)
        assert_allclose(F[1, 1], evaluate(p, -2 * 2.0**1.5).value.real, rtol=1e-12)
        assert_allclose(F[0, 1], 0.0, atol=1e-14)

    def test_t_zero_gives_identity(self):
        for A in (np.diag([-1.0, -2.0]), np.array([[0.0, 1.0], [-2.0, -2.0]])):
            F = ml_apply(decompose(A), MLParams(1.5, 1.0), 0.0)
            assert_allclose(F, np.eye(2), atol=1e-14)

    def test_jordan_block_is_derivative(self):
        p = MLParams(1.5, 1.0)
        F = ml_apply(decompose([[-1.0, 1.0], [0.0, -1.0]]), p, 1.0)
        E = evaluate(p, -1.0).value.real
        Ep = ml_derivative(p, -1.0, 1, 1e-12).value.real
        assert_allclose(F, [[E, Ep], [0.0, E]], atol=1e-12)

    def test_series_oracle_random(self):
        rng = np.random.default_rng(7)
        p = MLParams(1.5, 1.0)
        for _ in range(5):
            d = rng.integers(2, 5)
            A = rng.normal(size=(d, d))
            rho = np.abs(np.linalg.eigvals(A)).max()
            t = (4.0 / max(rho, 0.5)) ** (1 / 1.5)
            F = ml_apply(decompose(A), p, t)
            assert_allclose(F, series_oracle(A, 1.5, 1.0, t), atol=1e-8)

    def test_similarity_invariance(self):
        rng = np.random.default_rng(3)
        p = MLParams(1.3, 1.0)
        A = rng.normal(size=(4, 4)) * 0.7
        S = np.eye(4) + 0.3 * rng.normal(size=(4, 4))
        B = np.linalg.solve(S, A @ S)
        FA = ml_apply(decompose(A), p, 1.1)
        FB = ml_apply(decompose(B), p, 1.1)
        assert_allclose(np.linalg.solve(S, FA @ S), FB, atol=1e-7)

    def test_real_output_residue(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            A = rng.normal(size=(4, 4))
            Fc = ml_apply(decompose(A), MLParams(1.5, 1.0), 1.3, keep_complex=True)
            norm = np.abs(Fc).max()
            assert np.abs(Fc.imag).max() <= 1e-9 * (1.0 + norm)

    def test_three_by_three_jordan_far_field(self):
        # t = 10 puts |z| = 31.6 in the asymptotic regime, so the block
        # formula runs on term-wise differentiated expansions up to order 2;
        # reference from a 60-digit mpmath summation of the matrix series
        A = -np.eye(3) + np.diag([1.0, 1.0], k=1)
        F = ml_apply(decompose(A), MLParams(1.5, 1.0), 10.0)
        ref = np.array(
            [
                [-0.015300515030893151, 0.005661834154587459, 0.18572356935413822],
                [0.0, -0.015300515030893151, 0.005661834154587459],
                [0.0, 0.0, -0.015300515030893151],
            ]
        )
        assert np.abs(F - ref).max() <= 1e-9

    def test_large_nilpotent_cluster_raises(self):
        A = -np.eye(5) + np.diag(np.ones(4), k=1)
        with pytest.raises(IllConditioned):
            ml_apply(decompose(A), MLParams(1.5, 1.0), 1.0)

    def test_large_zero_cluster_is_fine(self):
        F = ml_apply(decompose(np.zeros((6, 6))), MLParams(1.5, 1.0), 2.0)
        assert_allclose(F, np.eye(6), atol=1e-14)

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            ml_apply(decompose(np.eye(2)), MLParams(1.5, 1.0), -1.0)
