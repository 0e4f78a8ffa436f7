from math import comb, sqrt

import numpy as np
import pytest

from fermirep.conditions import b_condition, c_condition, dual_p_condition
from fermirep.errors import DomainError
from fermirep.operators import DensityOperator, WaveFunction, contract, contract_oracle, expectation, projector
from fermirep.sampling import (
    DEFAULT_GRID,
    SampleKind,
    SampleSpec,
    extreme_geminal,
    generate,
    interpolated_family,
    random_pure_state,
    representable_d2,
    witness_search,
)


def test_random_state_pinned():
    c = random_pure_state(4, 2, seed=7).coeffs
    assert c[0] == complex(float.fromhex("-0x1.58f59f77aff66p-3"), float.fromhex("0x1.3bdcd3d435163p-4"))
    assert c[1] == complex(float.fromhex("0x1.91105203a0312p-2"), float.fromhex("-0x1.0656c4cae7d20p-1"))


def test_random_state_normalized_and_distinct():
    a = random_pure_state(6, 3, seed=1)
    b = random_pure_state(6, 3, seed=2)
    assert a.norm == pytest.approx(1, abs=1e-12)
    assert abs(np.vdot(a.coeffs, b.coeffs)) < 1
    assert not np.array_equal(random_pure_state(6, 3, 1, 0).coeffs, random_pure_state(6, 3, 1, 1).coeffs)


def test_contraction_of_single_slater_determinant():
    f = WaveFunction.from_labels(5, {(0, 1, 2): 1.0})
    D = contract(DensityOperator.mixture([f], [1.0]), 2)
    assert np.allclose(D.matrix, contract_oracle(projector(f), 2).matrix, atol=1e-15)
    assert np.trace(D.matrix).real == pytest.approx(1)


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_representable_d2_is_density(n):
    for r in (1, 3, 5):
        D = representable_d2(n, r, 3, index=r)
        assert D.trace == pytest.approx(1, abs=1e-12)
        assert np.linalg.eigvalsh(D.matrix)[0] >= -1e-12


def test_extreme_geminal():
    g = extreme_geminal(4)
    assert g.coeffs[g.basis.index((0, 1))] == pytest.approx(sqrt(0.5))
    assert g.coeffs[g.basis.index((2, 3))] == pytest.approx(sqrt(0.5))
    assert np.count_nonzero(g.coeffs) == 2
    with pytest.raises(DomainError):
        extreme_geminal(5)


def test_interpolated_family():
    g = extreme_geminal(6)
    d = comb(6, 2)
    D = interpolated_family(g, 1 / d)
    assert np.allclose(D.matrix, np.eye(d) / d, atol=1e-15)
    assert expectation(interpolated_family(g, 0.37), projector(g)) == pytest.approx(0.37)
    with pytest.raises(DomainError):
        interpolated_family(g, 1.5)


def test_interpolated_separates_conditions_n4():
    g = extreme_geminal(4)
    D = interpolated_family(g, 0.3)
    assert np.allclose(contract(D, 1).matrix, np.eye(4) / 4)
    b, c = b_condition(D, g), c_condition(D, g)
    assert b.bound == pytest.approx(3 / 8) and c.bound == pytest.approx(3 / 8)
    assert b.passed and c.passed
    assert not dual_p_condition(D, g).passed


@pytest.mark.parametrize("n", [4, 6])
def test_witness_found_at_03(n):
    found = witness_search(n, grid=[0.3])
    assert len(found) == 1
    spec, (dual, b, c) = found[0]
    assert spec.lam == 0.3
    assert dual.bound == pytest.approx((1 - 2 / n) / 3)
    assert b.bound == pytest.approx((1 - 1 / n) / 2)


def test_below_dual_bound_is_not_witness():
    assert witness_search(4, grid=[0.1, 0.15]) == []


def test_witness_rejects_odd_n():
    with pytest.raises(DomainError):
        witness_search(5)


def test_default_grid():
    assert DEFAULT_GRID[0] == 0.0 and DEFAULT_GRID[-1] == 1.0 and len(DEFAULT_GRID) == 21


@pytest.mark.parametrize("kind", list(SampleKind))
def test_generate_is_deterministic(kind):
    spec = SampleSpec(n=6, kind=kind, mix_rank=3, lam=0.3, seed=42, index=5)
    a, b = generate(spec), generate(spec)
    assert a.matrix.tobytes() == b.matrix.tobytes()
    assert a.trace == pytest.approx(1)


def test_sample_spec_validation():
    with pytest.raises(DomainError):
        SampleSpec(n=4, lam=1.2)
    with pytest.raises(DomainError):
        SampleSpec(n=4, mix_rank=0)
    with pytest.raises(ValueError):
        SampleSpec(n=4, kind="uniform")
    assert SampleSpec(n=4, kind="interpolated").kind is SampleKind.INTERPOLATED
