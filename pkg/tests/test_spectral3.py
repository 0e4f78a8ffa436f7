from math import comb, sqrt

import numpy as np
import pytest

from fermirep.basis import enumerate_basis, exterior_power
from fermirep.canonical import canonical_decompose
from fermirep.errors import DomainError, ResourceError
from fermirep.operators import WaveFunction, hermitian_eig, wedge_with_orbital
from fermirep.sampling import extreme_geminal
from fermirep.spectral3 import (
    analytic_spectrum3,
    lambda_max3,
    lambda_max_numeric,
    lifted_projector,
    spectrum_of,
)

from conftest import random_geminal


def test_slater_geminal_spectrum():
    g = WaveFunction.from_labels(5, {(0, 1): 1.0})
    s = spectrum_of(g)
    assert s.pair_eigs == []
    assert [lam for lam, _ in s.tail_eigs] == [1.0, 1.0, 1.0]
    kets = sorted(tuple(np.flatnonzero(np.abs(v.coeffs) > 0.5)) for _, v in s.tail_eigs)
    b3 = enumerate_basis(5, 3)
    assert kets == sorted((b3.index((0, 1, l)),) for l in (2, 3, 4))
    assert s.kernel_dim == comb(5, 3) - 3 == 7
    assert not s.generic_kernel


def test_extreme_geminal_spectrum_n4():
    s = spectrum_of(extreme_geminal(4))
    lams = [lam for lam, _ in s.eigenpairs()]
    assert np.allclose(lams, [0.5] * 4)
    assert s.tail_eigs == []
    assert s.kernel_dim == 0 == comb(4, 3) - 4


def test_two_pair_spectrum_matches_numeric():
    g = WaveFunction.from_labels(4, {(0, 1): sqrt(0.8), (2, 3): sqrt(0.2)})
    s = spectrum_of(g)
    assert np.allclose(sorted(lam for lam, _ in s.eigenpairs()), [0.2, 0.2, 0.8, 0.8])
    assert s.kernel_dim == 0
    w, _ = hermitian_eig(lifted_projector(g, 3))
    assert np.allclose(w, s.eigenvalues(), atol=1e-12)


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_analytic_matches_numeric(rng, n):
    for _ in range(100):
        g = random_geminal(rng, n)
        s = spectrum_of(g)
        H = lifted_projector(g, 3)
        w, _ = hermitian_eig(H)
        assert np.max(np.abs(w - s.eigenvalues())) <= 1e-10
        vecs = np.column_stack([v.coeffs for _, v in s.eigenpairs()])
        assert np.max(np.abs(vecs.conj().T @ vecs - np.eye(vecs.shape[1]))) <= 1e-10
        for lam, v in s.eigenpairs():
            assert np.linalg.norm(H.matrix @ v.coeffs - lam * v.coeffs) <= 1e-9
        assert s.kernel_dim == comb(n, 3) - n
        assert s.generic_kernel
        assert sum(lam for lam, _ in s.eigenpairs()) == pytest.approx(n - 2, abs=1e-10)


def test_eigenvectors_are_wedges_in_natural_orbitals(rng):
    n = 6
    g = random_geminal(rng, n)
    f = canonical_decompose(g)
    s = analytic_spectrum3(f, g)
    gc = f.canonical_geminal()
    u3 = exterior_power(f.pair_orbitals, 3)
    for k, (lam, a, b) in enumerate(s.pair_eigs):
        w = wedge_with_orbital(gc, 2 * k)
        assert w.norm ** 2 == pytest.approx(1 - f.xi[k] ** 2, abs=1e-12)
        assert np.allclose(u3 @ w.coeffs / w.norm, a.coeffs, atol=1e-12)
        assert lam == pytest.approx(1 - f.xi[k] ** 2)


def test_tail_eigenvectors_for_reduced_rank(rng):
    g0 = WaveFunction.from_labels(6, {(0, 1): sqrt(0.6), (2, 3): sqrt(0.4)})
    q, _ = np.linalg.qr(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
    g = WaveFunction(g0.basis, exterior_power(q, 2) @ g0.coeffs)
    s = spectrum_of(g)
    assert len(s.tail_eigs) == 2
    H = lifted_projector(g, 3)
    for lam, v in s.eigenpairs():
        assert np.linalg.norm(H.matrix @ v.coeffs - lam * v.coeffs) < 1e-12
    assert s.kernel_dim == comb(6, 3) - 6


def test_form_mismatch_rejected(rng):
    g, h = random_geminal(rng, 5), random_geminal(rng, 5)
    with pytest.raises(DomainError):
        analytic_spectrum3(canonical_decompose(g), h)


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_lambda_max3_extreme(n):
    assert lambda_max3(canonical_decompose(extreme_geminal(n))) == pytest.approx(1 - 2 / n)


def test_lambda_max3_small_rank():
    assert lambda_max3(canonical_decompose(WaveFunction.from_labels(5, {(0, 1): 1.0}))) == 1.0


@pytest.mark.parametrize("n", [5, 7])
def test_lambda_max3_odd_n_is_one(rng, n):
    for _ in range(20):
        assert lambda_max3(canonical_decompose(random_geminal(rng, n))) == 1.0


def test_lambda_max_numeric():
    assert lambda_max_numeric(extreme_geminal(6), 3) == pytest.approx(2 / 3, abs=1e-12)
    assert lambda_max_numeric(extreme_geminal(6), 2) == 1.0


def test_lambda_max_numeric_matches_analytic(rng):
    for _ in range(10):
        g = random_geminal(rng, 5)
        assert lambda_max_numeric(g, 3) == pytest.approx(spectrum_of(g).eigenvalues()[0], abs=1e-10)


def test_lambda_max_numeric_guard(rng):
    with pytest.raises(ResourceError):
        lambda_max_numeric(random_geminal(rng, 13), 3)
    with pytest.raises(ResourceError):
        lambda_max_numeric(random_geminal(rng, 6), 5)
