"""
Wavefunctions and Hermitian operators on antisymmetric spaces.

Conventions
-----------
* ``|K> = a+_{k1} ... a+_{kp} |0>`` for a sorted label ``K``; this is the
  normalized Slater determinant ``sqrt(p!) A^p (e_k1 x ... x e_kp)``.
* The Grassmann lift ``b^p ^ I^(N-p) = A^N (b^p x I^(N-p)) A^N`` carries no
  internal combinatorial factor.  On the N-particle space it equals the
  second-quantized operator ``sum b_{IA} a+_I a_A`` divided by ``C(N, p)``,
  which is how :func:`lift_operator` builds it.  Binomial prefactors such as
  the ``3`` in ``3 P_g ^ I`` are applied by callers.
* Contractions are trace preserving.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from math import comb, factorial, sqrt
from typing import Literal, Optional

import numpy as np
import scipy.sparse as sp

from .basis import SlaterBasis, enumerate_basis, insert_orbital, subset_sign
from .errors import DomainError, NumericError, ResourceError

__all__ = [
    "WaveFunction",
    "HermitianOperator",
    "DensityOperator",
    "check_hermitian",
    "projector",
    "wedge_with_orbital",
    "lift_operator",
    "lift_two_body",
    "antisymmetrizer_oracle",
    "contract",
    "contract_oracle",
    "hermitian_eig",
    "group_eigenvalues",
    "expectation",
    "identity",
]

NORM_TOL = 1e-12
HERMITIAN_RTOL = 1e-12
PSD_RTOL = 1e-10
TRACE_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class WaveFunction:
    """Complex coefficient vector over a Slater basis."""

    basis: SlaterBasis
    coeffs: np.ndarray

    def __post_init__(self):
        c = _frozen(self.coeffs).reshape(-1)
        if c.shape[0] != self.basis.size:
            raise DomainError(
                f"{c.shape[0]} coefficients for a basis of size {self.basis.size}"
            )
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_labels(cls, n: int, terms: dict) -> "WaveFunction":
        """Build from ``{label: coefficient}``; the particle number is inferred."""
        p = len(next(iter(terms)))
        basis = enumerate_basis(n, p)
        c = np.zeros(basis.size, dtype=np.complex128)
        for lab, v in terms.items():
            c[basis.index(lab)] += v
        return cls(basis, c)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm**2 - 1.0) <= NORM_TOL

    def normalized(self) -> "WaveFunction":
        nrm = self.norm
        if nrm == 0.0:
            raise DomainError("cannot normalize the zero vector")
        return WaveFunction(self.basis, self.coeffs / nrm)


def check_hermitian(m: np.ndarray, rtol: float = HERMITIAN_RTOL) -> None:
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if dev > rtol * max(scale, 1e-300):
        raise DomainError(f"matrix is not Hermitian (max deviation {dev:.3e})")


@dataclass(frozen=True)
class HermitianOperator:
    """Dense Hermitian matrix over a Slater basis."""

    basis: SlaterBasis
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        d = self.basis.size
        if m.shape != (d, d):
            raise DomainError(f"matrix shape {m.shape} does not match basis size {d}")
        check_hermitian(m)
        # symmetrize away round-off so downstream eigensolvers see exact Hermiticity
        m = 0.5 * (m + m.conj().T)
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        _same_basis(self.basis, other.basis)
        return HermitianOperator(self.basis, self.matrix + other.matrix)

    def __sub__(self, other: "HermitianOperator") -> "HermitianOperator":
        _same_basis(self.basis, other.basis)
        return HermitianOperator(self.basis, self.matrix - other.matrix)

    def __mul__(self, s: float) -> "HermitianOperator":
        return HermitianOperator(self.basis, float(s) * self.matrix)

    __rmul__ = __mul__


class DensityOperator(HermitianOperator):
    """Hermitian, positive semidefinite, unit trace."""

    def __init__(self, basis: SlaterBasis, matrix: np.ndarray, *, trace_tol: float = TRACE_TOL,
                 psd_rtol: float = PSD_RTOL):
        super().__init__(basis, matrix)
        tr = self.trace
        if abs(tr - 1.0) > trace_tol:
            raise DomainError(f"density operator trace is {tr!r}, expected 1")
        lo = float(np.linalg.eigvalsh(self.matrix)[0]) if basis.size else 0.0
        if lo < -psd_rtol * max(tr, 1.0):
            raise DomainError(f"density operator has negative eigenvalue {lo:.3e}")

    @classmethod
    def from_operator(cls, op: HermitianOperator, **kw) -> "DensityOperator":
        return cls(op.basis, op.matrix, **kw)

    @classmethod
    def mixture(cls, states: list, weights) -> "DensityOperator":
        """``sum_j w_j |f_j><f_j|`` for normalized states and weights summing to 1."""
        basis = states[0].basis
        m = np.zeros((basis.size, basis.size), dtype=np.complex128)
        for f, w in zip(states, weights):
            _same_basis(basis, f.basis)
            m += w * np.outer(f.coeffs, f.coeffs.conj())
        return cls(basis, m)


def _same_basis(a: SlaterBasis, b: SlaterBasis) -> None:
    if (a.n, a.p) != (b.n, b.p):
        raise DomainError(f"basis mismatch: (n={a.n}, p={a.p}) vs (n={b.n}, p={b.p})")


def identity(n: int, p: int) -> HermitianOperator:
    basis = enumerate_basis(n, p)
    return HermitianOperator(basis, np.eye(basis.size))


def projector(g: WaveFunction) -> HermitianOperator:
    """Rank-one projector ``|g><g|``; ``g`` must be normalized."""
    if not g.is_normalized:
        raise DomainError(f"projector needs a normalized state, norm^2 = {g.norm**2!r}")
    return HermitianOperator(g.basis, np.outer(g.coeffs, g.coeffs.conj()))


def wedge_with_orbital(g: WaveFunction, m: int) -> WaveFunction:
    """
    ``sum_K c_K |K, m>`` re-sorted into the (p+1)-particle basis.

    Terms whose label already holds ``m`` vanish.  The result is returned
    unnormalized: its squared norm is the weight of ``g`` on labels avoiding
    ``m``.
    """
    n = g.basis.n
    if not 0 <= m < n:
        raise DomainError(f"orbital {m} outside [0, {n})")
    out_basis = enumerate_basis(n, g.basis.p + 1)
    c = np.zeros(out_basis.size, dtype=np.complex128)
    for k, lab in enumerate(g.basis.labels):
        if g.coeffs[k] == 0:
            continue
        hit = insert_orbital(lab, m)
        if hit is None:
            continue
        sign, merged = hit
        c[out_basis.index(merged)] += sign * g.coeffs[k]
    return WaveFunction(out_basis, c)


@lru_cache(maxsize=64)
def _lift_pattern(n: int, p: int, N: int) -> sp.csr_matrix:
    """Sparse map from ``vec(b)`` (p-particle) to ``vec(W)`` (N-particle).

    ``W[K, L] = sum b[I, A] * s(L; A) * s(K; I)`` over p-subsets ``A`` of ``L``
    and labels ``I`` disjoint from ``R = L - A`` with ``K = I + R``.
    """
    bp = enumerate_basis(n, p)
    bN = enumerate_basis(n, N)
    dp, dN = bp.size, bN.size
    rows, cols, vals = [], [], []
    for l_idx, L in enumerate(bN.labels):
        for A in combinations(L, p):
            s1 = subset_sign(L, A)
            a_idx = bp.index(A)
            R = tuple(x for x in L if x not in A)
            rset = set(R)
            for i_idx, I in enumerate(bp.labels):
                if rset.intersection(I):
                    continue
                K = tuple(sorted(I + R))
                rows.append(bN.index(K) * dN + l_idx)
                cols.append(i_idx * dp + a_idx)
                vals.append(s1 * subset_sign(K, I))
    return sp.csr_matrix(
        (np.array(vals, dtype=np.float64), (rows, cols)), shape=(dN * dN, dp * dp)
    )


def lift_operator(b: HermitianOperator, N: int) -> HermitianOperator:
    """Grassmann lift ``b^p ^ I^(N-p)`` of a p-particle operator to N particles."""
    n, p = b.basis.n, b.basis.p
    if not p <= N <= n:
        raise DomainError(f"need p <= N <= n, got p={p}, N={N}, n={n}")
    if N == p:
        return b
    bN = enumerate_basis(n, N)
    w = _lift_pattern(n, p, N) @ b.matrix.reshape(-1)
    return HermitianOperator(bN, w.reshape(bN.size, bN.size) / comb(N, p))


def lift_two_body(b: HermitianOperator, N: int) -> HermitianOperator:
    """``b^2 ^ I^(N-2)`` for a 2-particle operator."""
    if b.basis.p != 2:
        raise DomainError(f"lift_two_body expects a 2-particle operator, got p={b.basis.p}")
    return lift_operator(b, N)


# --- dense tensor-space realization ---------------------------------------

def _perm_sign(perm: tuple) -> int:
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


def antisymmetrize(t: np.ndarray, N: int, n: int) -> np.ndarray:
    """Apply ``A^N = (1/N!) sum_pi sgn(pi) pi`` to the columns of ``t`` (shape ``(n^N, m)``)."""
    cols = t.shape[1]
    x = t.reshape((n,) * N + (cols,))
    out = np.zeros_like(x)
    for perm in permutations(range(N)):
        out += _perm_sign(perm) * np.transpose(x, perm + (N,))
    return (out / factorial(N)).reshape(n**N, cols)


def slater_isometry(n: int, N: int) -> np.ndarray:
    """Columns ``sqrt(N!) A^N (e_k1 x ... x e_kN)`` for each label, shape ``(n^N, C(n,N))``."""
    basis = enumerate_basis(n, N)
    e = np.zeros((n**N, basis.size), dtype=np.complex128)
    for k, lab in enumerate(basis.labels):
        e[np.ravel_multi_index(lab, (n,) * N), k] = 1.0
    return sqrt(factorial(N)) * antisymmetrize(e, N, n)


def _guard_tensor(n: int, N: int) -> None:
    if n**N > 10**6 or n**N * comb(n, N) > 5 * 10**7:
        raise ResourceError(f"tensor space n^N = {n**N} too large for the dense oracle")


def antisymmetrizer_oracle(b: HermitianOperator, N: int, n: Optional[int] = None) -> HermitianOperator:
    """
    Literal ``A^N (b x I^(N-2)) A^N`` on the n^N-dimensional tensor space,
    read back in the Slater basis.  Independent of :func:`lift_operator`.
    """
    n = b.basis.n if n is None else n
    p = b.basis.p
    if b.basis.n != n:
        raise DomainError("operator basis does not match n")
    _guard_tensor(n, N)
    if N == p:
        return b
    vp = slater_isometry(n, p)
    b_tensor = vp @ b.matrix @ vp.conj().T
    vN = slater_isometry(n, N)
    rest = n ** (N - p)
    av = antisymmetrize(vN, N, n)
    x = av.reshape(n**p, rest * vN.shape[1])
    x = (b_tensor @ x).reshape(n**N, vN.shape[1])
    x = antisymmetrize(x, N, n)
    return HermitianOperator(enumerate_basis(n, N), vN.conj().T @ x)


def contract_oracle(D: HermitianOperator, q: int) -> HermitianOperator:
    """Partial trace over the last ``p - q`` tensor slots, done densely."""
    n, p = D.basis.n, D.basis.p
    if not 0 < q < p:
        raise DomainError(f"need 0 < q < p, got q={q}, p={p}")
    _guard_tensor(n, p)
    vp = slater_isometry(n, p)
    rho = (vp @ D.matrix @ vp.conj().T).reshape(n**q, n ** (p - q), n**q, n ** (p - q))
    rho_q = np.einsum("ajbj->ab", rho)
    vq = slater_isometry(n, q)
    return HermitianOperator(enumerate_basis(n, q), vq.conj().T @ rho_q @ vq)


@lru_cache(maxsize=64)
def _contract_pattern(n: int, p: int, q: int) -> sp.csr_matrix:
    """Sparse map from ``vec(D)`` (p-particle) to ``vec(D_q)``, unscaled."""
    bp = enumerate_basis(n, p)
    bq = enumerate_basis(n, q)
    dp, dq = bp.size, bq.size
    rows, cols, vals = [], [], []
    for R in combinations(range(n), p - q):
        rset = set(R)
        hits = []
        for i_idx, I in enumerate(bq.labels):
            if rset.intersection(I):
                continue
            K = tuple(sorted(I + R))
            hits.append((i_idx, bp.index(K), subset_sign(K, I)))
        for i, k, si in hits:
            for j, l, sj in hits:
                rows.append(i * dq + j)
                cols.append(k * dp + l)
                vals.append(si * sj)
    return sp.csr_matrix(
        (np.array(vals, dtype=np.float64), (rows, cols)), shape=(dq * dq, dp * dp)
    )


def contract(D: HermitianOperator, q: int) -> HermitianOperator:
    """
    Trace-preserving contraction of a p-particle operator to ``q`` particles.

    ``D_q[I, J] = C(p, q)^-1 sum_R s(I+R; I) s(J+R; J) D[I+R, J+R]`` over
    ``(p-q)``-labels ``R``; this equals the tensor-slot partial trace in
    :func:`contract_oracle`.  Density operators in give density operators out.
    """
    n, p = D.basis.n, D.basis.p
    if not 0 < q < p:
        raise DomainError(f"need 0 < q < p, got q={q}, p={p}")
    bq = enumerate_basis(n, q)
    out = (_contract_pattern(n, p, q) @ D.matrix.reshape(-1)).reshape(bq.size, bq.size)
    out /= comb(p, q)
    if isinstance(D, DensityOperator):
        return DensityOperator(bq, out)
    return HermitianOperator(bq, out)


# --- spectra --------------------------------------------------------------

def _jacobi_eigh(a: np.ndarray, tol: float = 1e-13, max_sweeps: int = 100):
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix."""
    a = np.array(a, dtype=np.complex128)
    d = a.shape[0]
    v = np.eye(d, dtype=np.complex128)
    fro = np.linalg.norm(a)
    if fro == 0.0:
        return np.zeros(d), v
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * fro:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                phase = apq / r
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ g
    else:
        raise NumericError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return np.diag(a).real.copy(), v


def hermitian_eig(
    H: HermitianOperator | np.ndarray, method: Literal["lapack", "jacobi"] = "lapack"
) -> tuple[np.ndarray, np.ndarray]:
    """
    Eigenvalues in descending order and orthonormal eigenvector columns.

    ``method="jacobi"`` runs the in-package cyclic Jacobi solver; the default
    uses LAPACK ``zheevd`` through numpy.
    """
    m = H.matrix if isinstance(H, HermitianOperator) else np.asarray(H, dtype=np.complex128)
    check_hermitian(m, 1e-10)
    if method == "lapack":
        w, v = np.linalg.eigh(m)
    elif method == "jacobi":
        w, v = _jacobi_eigh(m)
    else:
        raise DomainError(f"unknown eigensolver {method!r}")
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def group_eigenvalues(w: np.ndarray, tol: float) -> list[list[int]]:
    """Split a descending eigenvalue list into runs whose neighbours differ by at most ``tol``."""
    groups: list[list[int]] = []
    for k, x in enumerate(w):
        if groups and abs(w[groups[-1][-1]] - x) <= tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    return groups


def expectation(D: HermitianOperator, H: HermitianOperator, imag_tol: float = 1e-12) -> float:
    """``Tr(D H)``; the imaginary part is checked and discarded."""
    _same_basis(D.basis, H.basis)
    val = np.sum(D.matrix * H.matrix.T)
    if abs(val.imag) > imag_tol * max(1.0, abs(val.real)):
        raise NumericError(f"Tr(DH) has imaginary part {val.imag:.3e}")
    return float(val.real)
