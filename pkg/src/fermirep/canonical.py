"""
Pairing (canonical) form of a geminal.

Every antisymmetric coefficient matrix ``M`` admits ``M = U S U^T`` with
``U`` unitary and ``S`` block diagonal with blocks ``[[0, xi], [-xi, 0]]``.
In the rotated orbitals the geminal reads ``sum_k xi_k |2k, 2k+1>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .basis import enumerate_basis, exterior_power
from .errors import DomainError
from .operators import WaveFunction, group_eigenvalues, hermitian_eig

__all__ = [
    "CanonicalForm",
    "to_antisymmetric_matrix",
    "from_antisymmetric_matrix",
    "canonical_decompose",
    "xi_min_sq",
]

RANK_RTOL = 1e-9


@dataclass(frozen=True)
class CanonicalForm:
    """
    Attributes
    ----------
    xi
        Pairing coefficients, real, nonnegative and descending.  Only the
        retained pairs (above ``rank_tolerance``) are stored.
    pair_orbitals
        Unitary whose columns ``2k`` and ``2k+1`` carry ``xi[k]``; the
        remaining columns span the unoccupied natural orbitals.
    one_rank
        ``2 * len(xi)``.
    rank_tolerance
        Absolute threshold used to drop numerically zero pairs.
    """

    xi: np.ndarray
    pair_orbitals: np.ndarray
    one_rank: int
    rank_tolerance: float

    @property
    def n(self) -> int:
        return self.pair_orbitals.shape[0]

    @property
    def s(self) -> int:
        return len(self.xi)

    def canonical_geminal(self) -> WaveFunction:
        """The geminal written in its own natural orbitals."""
        return WaveFunction.from_labels(
            self.n, {(2 * k, 2 * k + 1): x for k, x in enumerate(self.xi)}
        )

    def reconstruct(self) -> WaveFunction:
        """Rotate the canonical geminal back to the original orbitals."""
        g = self.canonical_geminal()
        return WaveFunction(g.basis, exterior_power(self.pair_orbitals, 2) @ g.coeffs)


def to_antisymmetric_matrix(g: WaveFunction) -> np.ndarray:
    if g.basis.p != 2:
        raise DomainError(f"expected a 2-particle state, got p={g.basis.p}")
    n = g.basis.n
    m = np.zeros((n, n), dtype=np.complex128)
    idx = np.array(g.basis.labels, dtype=np.intp).reshape(-1, 2)
    m[idx[:, 0], idx[:, 1]] = g.coeffs
    return m - m.T


def from_antisymmetric_matrix(m: np.ndarray) -> WaveFunction:
    n = m.shape[0]
    basis = enumerate_basis(n, 2)
    idx = np.array(basis.labels, dtype=np.intp).reshape(-1, 2)
    return WaveFunction(basis, m[idx[:, 0], idx[:, 1]])


def canonical_decompose(g: WaveFunction, tol: Optional[float] = None) -> CanonicalForm:
    """
    Pairing decomposition through the Hermitian eigenproblem of ``M M^dagger``.

    The eigenvalues of ``M M^dagger`` are the ``xi_k^2``, each twice.  For a
    natural orbital ``u`` with ``xi > 0`` the partner is ``-M conj(u) / xi``;
    partners are automatically orthogonal to ``u`` and to earlier pairs, so
    picking vectors greedily from each (near-)degenerate eigenspace yields an
    exact 2x2 block structure.

    ``tol`` is the relative rank tolerance on ``xi`` (default ``1e-9``).
    """
    if g.basis.p != 2:
        raise DomainError(f"expected a 2-particle state, got p={g.basis.p}")
    rtol = RANK_RTOL if tol is None else tol
    n = g.basis.n
    m = to_antisymmetric_matrix(g)
    w, v = hermitian_eig(m @ m.conj().T)
    # |M conj(u)| resolves small xi far better than sqrt of the eigenvalue
    xi_est = np.linalg.norm(m @ v.conj(), axis=0)
    xmax = float(xi_est.max()) if n else 0.0
    if xmax == 0.0:
        raise DomainError("zero geminal has no canonical form")
    rank_tol = rtol * xmax

    cols: list[np.ndarray] = []
    xis: list[float] = []
    keep = xi_est > rank_tol
    for grp in group_eigenvalues(w[keep], 1e-8 * w[0]):
        space = v[:, np.flatnonzero(keep)[grp]]
        for j in range(space.shape[1]):
            u = space[:, j].copy()
            for c in cols:
                u -= c * np.vdot(c, u)
            nrm = np.linalg.norm(u)
            if nrm < 0.5:
                continue
            u /= nrm
            partner = -m @ u.conj()
            xi = float(np.linalg.norm(partner))
            partner /= xi
            # repeat the projection for the partner to shed round-off
            for c in cols:
                partner -= c * np.vdot(c, partner)
            partner -= u * np.vdot(u, partner)
            partner /= np.linalg.norm(partner)
            cols.extend([u, partner])
            xis.append(xi)

    # complete with the null space of M M^dagger
    rest = v[:, ~keep] if np.any(~keep) else np.zeros((n, 0))
    for j in range(rest.shape[1]):
        u = rest[:, j].copy()
        for c in cols:
            u -= c * np.vdot(c, u)
        nrm = np.linalg.norm(u)
        if nrm > 0.5:
            cols.append(u / nrm)
    if len(cols) < n:
        # fall back on QR completion when the null-space basis was degenerate
        q, _ = np.linalg.qr(np.column_stack(cols + [np.eye(n)[:, k] for k in range(n)]))
        cols = [q[:, k] for k in range(n)]
    u_mat = np.column_stack(cols[:n])

    # read the pairing coefficients off the rotated matrix; absorb any phase
    s = u_mat.conj().T @ m @ u_mat.conj()
    xi = np.empty(len(xis))
    for k in range(len(xis)):
        z = s[2 * k, 2 * k + 1]
        xi[k] = abs(z)
        if xi[k] > 0:
            u_mat[:, 2 * k + 1] *= z / abs(z)
    order = np.argsort(-xi, kind="stable")
    perm = np.concatenate(
        [np.ravel([[2 * k, 2 * k + 1] for k in order]).astype(int),
         np.arange(2 * len(xi), n)]
    )
    return CanonicalForm(
        xi=xi[order],
        pair_orbitals=u_mat[:, perm],
        one_rank=2 * len(xi),
        rank_tolerance=rank_tol,
    )


def xi_min_sq(form: CanonicalForm) -> float:
    if form.one_rank < 2:
        raise DomainError("zero geminal has no minimal pairing coefficient")
    return float(form.xi[-1] ** 2)
