"""
Closed-form spectrum of ``3 P_g ^ I`` on the three-particle space.

In natural orbitals ``g = sum_k xi_k |2k, 2k+1>`` (0-based) and

* ``g ^ |2k>`` and ``g ^ |2k+1>`` normalized by ``(1 - xi_k^2)^-1/2`` are
  eigenvectors with eigenvalue ``1 - xi_k^2``,
* ``g ^ |l>`` for unoccupied ``l >= r`` are eigenvectors with eigenvalue 1,
* everything orthogonal to these is annihilated.

All vectors are built in the natural-orbital frame and carried back with the
threefold exterior power of the orbital rotation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Optional

import numpy as np

from .basis import enumerate_basis, exterior_power
from .canonical import CanonicalForm, canonical_decompose, xi_min_sq
from .errors import DomainError, ResourceError
from .operators import (
    WaveFunction,
    hermitian_eig,
    lift_two_body,
    projector,
    wedge_with_orbital,
)

__all__ = [
    "Spectrum3",
    "analytic_spectrum3",
    "lambda_max3",
    "lambda_max_numeric",
    "lifted_projector",
    "spectrum_of",
]

UNIT_XI_TOL = 1e-10
EIG_ZERO_TOL = 1e-10
MAX_N = 12
MAX_PARTICLES = 4


@dataclass(frozen=True)
class Spectrum3:
    """
    Attributes
    ----------
    pair_eigs
        ``(1 - xi_k^2, g3_even, g3_odd)`` for every pair with ``xi_k < 1``.
    tail_eigs
        ``(1.0, g3_l)`` for each unoccupied natural orbital ``l``.
    kernel_dim
        ``C(n,3)`` minus the number of listed eigenvectors with eigenvalue
        above ``1e-10``.
    generic_kernel
        Whether ``kernel_dim == C(n,3) - n``.  False for a single Slater
        determinant, whose pair eigenvalues vanish.
    """

    n: int
    pair_eigs: list = field(repr=False)
    tail_eigs: list = field(repr=False)
    kernel_dim: int
    generic_kernel: bool

    def eigenpairs(self) -> list[tuple[float, WaveFunction]]:
        out = []
        for lam, a, b in self.pair_eigs:
            out += [(lam, a), (lam, b)]
        return out + list(self.tail_eigs)

    def eigenvalues(self) -> np.ndarray:
        """All ``C(n,3)`` eigenvalues, descending, kernel zeros included."""
        lams = [lam for lam, _ in self.eigenpairs()]
        full = np.zeros(comb(self.n, 3))
        full[: len(lams)] = lams
        return np.sort(full)[::-1]


def analytic_spectrum3(form: CanonicalForm, g: Optional[WaveFunction] = None) -> Spectrum3:
    """
    Eigen-decomposition of ``3 P_g ^ I`` from the pairing form of ``g``.

    When ``g`` is given it is checked against ``form`` to 1e-9.
    """
    n = form.n
    if form.one_rank < 2:
        raise DomainError("rank-0 geminal")
    if n < 3:
        raise DomainError(f"three-particle space needs n >= 3, got {n}")
    if g is not None and np.max(np.abs(form.reconstruct().coeffs - g.coeffs)) > 1e-9:
        raise DomainError("canonical form does not reproduce the geminal")
    gc = form.canonical_geminal()
    u3 = exterior_power(form.pair_orbitals, 3)
    b3 = enumerate_basis(n, 3)

    def rotated(v: WaveFunction, scale: float) -> WaveFunction:
        return WaveFunction(b3, scale * (u3 @ v.coeffs))

    pairs = []
    for k, x in enumerate(form.xi):
        gap = 1.0 - x * x
        if gap <= UNIT_XI_TOL:
            continue
        scale = 1.0 / np.sqrt(gap)
        pairs.append((
            gap,
            rotated(wedge_with_orbital(gc, 2 * k), scale),
            rotated(wedge_with_orbital(gc, 2 * k + 1), scale),
        ))
    tail = [(1.0, rotated(wedge_with_orbital(gc, l), 1.0)) for l in range(form.one_rank, n)]
    nonzero = sum(2 for lam, _, _ in pairs if lam > EIG_ZERO_TOL) + len(tail)
    kernel = comb(n, 3) - nonzero
    return Spectrum3(n, pairs, tail, kernel, kernel == comb(n, 3) - n)


def lambda_max3(form: CanonicalForm, n: Optional[int] = None) -> float:
    """Largest eigenvalue of ``3 P_g ^ I``: ``1 - xi_min^2`` at full 1-rank, else 1."""
    n = form.n if n is None else n
    if form.one_rank == n:
        return 1.0 - xi_min_sq(form)
    return 1.0


def lifted_projector(g: WaveFunction, N: int):
    """``C(N,2) P_g ^ I^(N-2)`` as a Hermitian operator."""
    return comb(N, 2) * lift_two_body(projector(g), N)


def _guard(n: int, N: int) -> None:
    if n > MAX_N or N > MAX_PARTICLES:
        raise ResourceError(f"numeric lift limited to n <= {MAX_N}, N <= {MAX_PARTICLES}")


def lambda_max_numeric(g: WaveFunction, N: int, n: Optional[int] = None) -> float:
    """Top eigenvalue of ``C(N,2) P_g ^ I^(N-2)`` by dense diagonalization."""
    n = g.basis.n if n is None else n
    if n != g.basis.n:
        raise DomainError("n does not match the geminal's basis")
    if not 2 <= N <= n:
        raise DomainError(f"need 2 <= N <= n, got N={N}, n={n}")
    _guard(n, N)
    if N == 2:
        return 1.0
    w, _ = hermitian_eig(lifted_projector(g, N))
    return float(w[0])


def spectrum_of(g: WaveFunction, tol: Optional[float] = None) -> Spectrum3:
    """Shorthand for ``analytic_spectrum3(canonical_decompose(g), g)``."""
    return analytic_spectrum3(canonical_decompose(g, tol), g)
