"""
Seeded generators for trial density operators and probe geminals.

Randomness comes from numpy's PCG64 bit generator.  Sample ``index`` under
base ``seed`` draws from ``SeedSequence(seed, spawn_key=(index,))``, so any
sample can be regenerated on its own and independent samples may be produced
in parallel.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass
from math import comb, sqrt
from typing import Optional, Sequence

import numpy as np

from .basis import enumerate_basis
from .conditions import (
    ConditionReport,
    b_condition,
    c_condition,
    dual_p_condition,
)
from .errors import DomainError
from .operators import DensityOperator, WaveFunction, contract, hermitian_eig, projector

__all__ = [
    "GENERATOR",
    "SampleKind",
    "SampleSpec",
    "rng_for",
    "random_pure_state",
    "representable_d2",
    "extreme_geminal",
    "interpolated_family",
    "generate",
    "default_probes",
    "witness_search",
    "DEFAULT_GRID",
    "WITNESS_MARGIN",
]

GENERATOR = "numpy.random.PCG64(SeedSequence(seed, spawn_key=(index,)))"
WITNESS_MARGIN = 1e-6
DEFAULT_GRID = tuple(round(0.05 * k, 2) for k in range(21))


class SampleKind(str, enum.Enum):
    PURE_CONTRACTED = "pure_contracted"
    MIXED_CONTRACTED = "mixed_contracted"
    MAXIMALLY_MIXED = "maximally_mixed"
    GEMINAL_PROJECTOR = "geminal_projector"
    INTERPOLATED = "interpolated"


@dataclass(frozen=True)
class SampleSpec:
    n: int
    N: int = 3
    kind: SampleKind = SampleKind.MIXED_CONTRACTED
    mix_rank: int = 1
    lam: float = 0.0
    seed: int = 0
    index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", SampleKind(self.kind))
        if not 0.0 <= self.lam <= 1.0:
            raise DomainError(f"lambda must lie in [0, 1], got {self.lam}")
        if self.mix_rank < 1:
            raise DomainError("mix_rank must be at least 1")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind.value
        return d


def rng_for(seed: int, index: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _random_state(n: int, p: int, rng: np.random.Generator) -> WaveFunction:
    basis = enumerate_basis(n, p)
    z = rng.standard_normal(basis.size) + 1j * rng.standard_normal(basis.size)
    return WaveFunction(basis, z / np.linalg.norm(z))


def random_pure_state(n: int, p: int, seed: int, index: int = 0) -> WaveFunction:
    """Normalized state with i.i.d. standard complex normal coefficients."""
    if not 0 <= p <= n:
        raise DomainError(f"need 0 <= p <= n, got n={n}, p={p}")
    return _random_state(n, p, rng_for(seed, index))


def representable_d2(n: int, mix_rank: int, seed: int, N: int = 3, index: int = 0) -> DensityOperator:
    """
    Contraction to two particles of a random mixture of ``mix_rank`` pure
    N-particle states with uniform-then-normalized weights.
    """
    if n < N or N < 3:
        raise DomainError(f"need 3 <= N <= n, got N={N}, n={n}")
    rng = rng_for(seed, index)
    w = rng.random(mix_rank)
    w /= w.sum()
    states = [_random_state(n, N, rng) for _ in range(mix_rank)]
    DN = DensityOperator.mixture(states, w)
    return contract(DN, 2)


def extreme_geminal(n: int) -> WaveFunction:
    """``sum_i sqrt(2/n) |2i, 2i+1>`` over all ``n/2`` orbital pairs."""
    if n % 2 or n < 4:
        raise DomainError(f"extreme geminal needs even n >= 4, got {n}")
    x = sqrt(2.0 / n)
    return WaveFunction.from_labels(n, {(2 * i, 2 * i + 1): x for i in range(n // 2)})


def interpolated_family(g: WaveFunction, lam: float, n: Optional[int] = None) -> DensityOperator:
    """``lam P_g + (1 - lam) (I - P_g) / (C(n,2) - 1)``."""
    n = g.basis.n if n is None else n
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    d = comb(n, 2)
    P = projector(g).matrix
    return DensityOperator(g.basis, lam * P + (1.0 - lam) * (np.eye(d) - P) / (d - 1))


def generate(spec: SampleSpec) -> DensityOperator:
    """Density operator described by ``spec``; bit-identical for equal specs."""
    n, kind = spec.n, spec.kind
    if kind is SampleKind.PURE_CONTRACTED:
        return representable_d2(n, 1, spec.seed, spec.N, spec.index)
    if kind is SampleKind.MIXED_CONTRACTED:
        return representable_d2(n, spec.mix_rank, spec.seed, spec.N, spec.index)
    if kind is SampleKind.MAXIMALLY_MIXED:
        d = comb(n, 2)
        return DensityOperator(enumerate_basis(n, 2), np.eye(d) / d)
    if kind is SampleKind.GEMINAL_PROJECTOR:
        g = random_pure_state(n, 2, spec.seed, spec.index)
        return DensityOperator.from_operator(projector(g))
    if kind is SampleKind.INTERPOLATED:
        return interpolated_family(extreme_geminal(n), spec.lam, n)
    raise DomainError(f"unknown sample kind {kind}")


def default_probes(D: DensityOperator, random_count: int = 4, seed: int = 0,
                   eigen: bool = True, extreme: bool = True) -> tuple[list[WaveFunction], list[str]]:
    """
    Eigenvectors of ``D``, the extreme geminal (even ``n`` only) and
    ``random_count`` seeded random geminals, with descriptive names.
    """
    n = D.basis.n
    probes, names = [], []
    if eigen:
        w, v = hermitian_eig(D)
        for k in range(v.shape[1]):
            probes.append(WaveFunction(D.basis, v[:, k]).normalized())
            names.append(f"eigenvector {k} (lambda={w[k]:.6g})")
    if extreme and n % 2 == 0 and n >= 4:
        probes.append(extreme_geminal(n))
        names.append("extreme geminal")
    for k in range(random_count):
        probes.append(random_pure_state(n, 2, seed, k))
        names.append(f"random geminal seed={seed} index={k}")
    return probes, names


def witness_search(n: int, N: int = 3, grid: Sequence[float] = DEFAULT_GRID,
                   probes: Optional[Sequence[WaveFunction]] = None,
                   margin: float = WITNESS_MARGIN) -> list[tuple[SampleSpec, list[ConditionReport]]]:
    """
    Scan the interpolated family around the extreme geminal and keep the
    points where B and C hold by at least ``margin`` while the dual-P
    condition fails by at least ``margin``.

    A point counts as a witness if some probe (default: the extreme geminal)
    separates the conditions this way.
    """
    if n % 2:
        raise DomainError(f"witness search needs even n, got {n}")
    probes = [extreme_geminal(n)] if probes is None else list(probes)
    mode = "analytic" if N == 3 else "numeric"
    found = []
    for lam in grid:
        spec = SampleSpec(n=n, N=N, kind=SampleKind.INTERPOLATED, lam=float(lam))
        D = generate(spec)
        D1 = contract(D, 1)
        for i, g in enumerate(probes):
            ctx = f"lambda={lam:g} probe {i}"
            reps = [
                dual_p_condition(D, g, N, mode, context=ctx),
                b_condition(D, g, N, context=ctx, D1=D1),
                c_condition(D, g, N, context=ctx, D1=D1),
            ]
            dual, b, c = reps
            if b.margin >= margin and c.margin >= margin and dual.margin <= -margin:
                found.append((spec, reps))
                break
    return found
