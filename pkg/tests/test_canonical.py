from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fermirep.basis import enumerate_basis, exterior_power
from fermirep.canonical import (
    canonical_decompose,
    from_antisymmetric_matrix,
    to_antisymmetric_matrix,
    xi_min_sq,
)
from fermirep.errors import DomainError
from fermirep.operators import WaveFunction, contract, projector
from fermirep.sampling import extreme_geminal

from conftest import random_geminal


def test_matrix_of_slater_geminal():
    M = to_antisymmetric_matrix(WaveFunction.from_labels(4, {(0, 1): 1.0}))
    expected = np.zeros((4, 4))
    expected[0, 1], expected[1, 0] = 1, -1
    assert np.array_equal(M, expected)


def test_matrix_of_extreme_geminal():
    M = to_antisymmetric_matrix(extreme_geminal(4))
    assert M[0, 1] == pytest.approx(sqrt(0.5))
    assert M[2, 3] == pytest.approx(sqrt(0.5))
    assert np.allclose(M, -M.T)


def test_matrix_frobenius_norm(rng):
    g = random_geminal(rng, 7)
    M = to_antisymmetric_matrix(g)
    assert np.linalg.norm(M) ** 2 == pytest.approx(2.0)
    assert np.allclose(from_antisymmetric_matrix(M).coeffs, g.coeffs)


def test_slater_geminal_is_canonical():
    f = canonical_decompose(WaveFunction.from_labels(5, {(0, 1): 1.0}))
    assert np.allclose(f.xi, [1.0])
    assert f.one_rank == 2
    assert xi_min_sq(f) == pytest.approx(1)


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_extreme_geminal_pairing(n):
    f = canonical_decompose(extreme_geminal(n))
    assert np.allclose(f.xi, sqrt(2 / n), atol=1e-12)
    assert f.one_rank == n
    assert xi_min_sq(f) == pytest.approx(2 / n, abs=1e-12)


def test_two_pair_geminal():
    g = WaveFunction.from_labels(4, {(0, 1): sqrt(0.8), (2, 3): sqrt(0.2)})
    f = canonical_decompose(g)
    assert np.allclose(f.xi ** 2, [0.8, 0.2], atol=1e-12)
    assert xi_min_sq(f) == pytest.approx(0.2, abs=1e-12)


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_random_geminals(rng, n):
    for _ in range(200):
        g = random_geminal(rng, n)
        f = canonical_decompose(g)
        M = to_antisymmetric_matrix(g)
        U = f.pair_orbitals
        assert f.one_rank % 2 == 0
        assert np.all(np.diff(f.xi) <= 1e-15)
        assert np.sum(f.xi ** 2) == pytest.approx(1, abs=1e-10)
        assert np.max(np.abs(U.conj().T @ U - np.eye(n))) <= 1e-10
        S = np.zeros((n, n))
        for k, x in enumerate(f.xi):
            S[2 * k, 2 * k + 1], S[2 * k + 1, 2 * k] = x, -x
        assert np.linalg.norm(M - U @ S @ U.T) <= 1e-9
        assert np.max(np.abs(f.reconstruct().coeffs - g.coeffs)) <= 1e-9
        # independent route: singular values of M come in equal pairs
        sv = np.linalg.svd(M, compute_uv=False)
        assert np.allclose(sv[0::2][: f.s], f.xi, atol=1e-10)
        assert np.allclose(sv[1::2][: f.s], f.xi, atol=1e-10)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_one_body_spectrum_from_pairing(rng, n):
    # L P_g has eigenvalues xi_k^2 / 2, each twice, and zeros elsewhere
    g = random_geminal(rng, n)
    f = canonical_decompose(g)
    w = np.sort(np.linalg.eigvalsh(contract(projector(g), 1).matrix))[::-1]
    expected = np.zeros(n)
    expected[: f.one_rank] = np.repeat(f.xi ** 2 / 2, 2)
    assert np.allclose(w, expected, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 8), st.integers(0, 2**32 - 1))
def test_invariant_under_orbital_rotation(n, seed):
    rng = np.random.default_rng(seed)
    g = random_geminal(rng, n)
    q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    rotated = WaveFunction(g.basis, exterior_power(q, 2) @ g.coeffs)
    assert np.allclose(canonical_decompose(rotated).xi, canonical_decompose(g).xi, atol=1e-10)


def test_reduced_rank_geminal():
    # rank 4 inside 7 orbitals, written in rotated orbitals
    rng = np.random.default_rng(3)
    q, _ = np.linalg.qr(rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7)))
    g0 = WaveFunction.from_labels(7, {(0, 1): sqrt(0.7), (2, 3): sqrt(0.3)})
    g = WaveFunction(g0.basis, exterior_power(q, 2) @ g0.coeffs)
    f = canonical_decompose(g)
    assert f.one_rank == 4
    assert np.allclose(f.xi ** 2, [0.7, 0.3], atol=1e-12)


def test_degenerate_pairs_accepted():
    # two equal pairs plus a smaller one; any mixing inside the degenerate block is fine
    g = WaveFunction.from_labels(6, {(0, 1): sqrt(0.4), (2, 3): sqrt(0.4), (4, 5): sqrt(0.2)})
    f = canonical_decompose(g)
    assert np.allclose(f.xi ** 2, [0.4, 0.4, 0.2], atol=1e-12)
    assert np.max(np.abs(f.reconstruct().coeffs - g.coeffs)) < 1e-12


def test_errors():
    with pytest.raises(DomainError):
        canonical_decompose(WaveFunction(enumerate_basis(4, 2), np.zeros(6)))
    with pytest.raises(DomainError):
        canonical_decompose(WaveFunction.from_labels(4, {(0, 1, 2): 1.0}))
