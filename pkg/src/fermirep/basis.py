"""
Slater determinant bases of the p-particle antisymmetric space.

Labels are strictly increasing tuples of 0-based orbital indices and the
basis is ordered lexicographically.  Every matrix in the package is
expressed in this order.  The conventional 1-based pair ``|2i-1, 2i>``
is ``(2i-2, 2i-1)`` here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "SlaterBasis",
    "enumerate_basis",
    "rank_of",
    "unrank",
    "insert_orbital",
    "subset_sign",
    "exterior_power",
]

Label = tuple[int, ...]


@dataclass(frozen=True)
class SlaterBasis:
    """Lexicographically ordered p-particle labels over ``n`` orbitals."""

    n: int
    p: int
    labels: tuple[Label, ...] = field(repr=False, compare=False)
    _index: dict = field(repr=False, compare=False, hash=False)

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, k: int) -> Label:
        return self.labels[k]

    def index(self, label: Sequence[int]) -> int:
        """Dictionary lookup of a label; raises DomainError if absent."""
        try:
            return self._index[tuple(label)]
        except KeyError:
            raise DomainError(f"{tuple(label)} is not a label of {self}") from None


@lru_cache(maxsize=None)
def enumerate_basis(n: int, p: int) -> SlaterBasis:
    """All ``C(n, p)`` strictly increasing p-tuples in lexicographic order."""
    if n < 0 or p < 0 or p > n:
        raise DomainError(f"need 0 <= p <= n, got n={n}, p={p}")
    labels = tuple(combinations(range(n), p))
    return SlaterBasis(n, p, labels, {lab: k for k, lab in enumerate(labels)})


def _check_label(label: Sequence[int], n: int) -> Label:
    lab = tuple(int(x) for x in label)
    if any(b <= a for a, b in zip(lab, lab[1:])):
        raise DomainError(f"label {lab} is not strictly increasing")
    if lab and (lab[0] < 0 or lab[-1] >= n):
        raise DomainError(f"label {lab} has orbitals outside [0, {n})")
    return lab


def rank_of(basis: SlaterBasis, label: Sequence[int]) -> int:
    """
    Lexicographic index of ``label`` via the combinatorial number system.

    Uses ``rank = C(n,p) - 1 - sum_t C(n-1-c_t, p-t)``, i.e. the colex rank
    of the reflected combination, so no table lookup is needed.
    """
    lab = _check_label(label, basis.n)
    if len(lab) != basis.p:
        raise DomainError(f"label {lab} has {len(lab)} orbitals, basis has p={basis.p}")
    n, p = basis.n, basis.p
    return comb(n, p) - 1 - sum(comb(n - 1 - c, p - t) for t, c in enumerate(lab))


def unrank(basis: SlaterBasis, k: int) -> Label:
    """Inverse of :func:`rank_of`."""
    n, p = basis.n, basis.p
    total = comb(n, p)
    if not 0 <= k < total:
        raise DomainError(f"rank {k} outside [0, {total})")
    # invert the reflected colex rank greedily from the largest position
    r = total - 1 - k
    out = []
    top = n
    for t in range(p):
        m = p - t
        # largest x < top with C(x, m) <= r
        x = top - 1
        while comb(x, m) > r:
            x -= 1
        r -= comb(x, m)
        top = x
        out.append(n - 1 - x)
    return tuple(out)


def insert_orbital(label: Sequence[int], m: int) -> Optional[tuple[int, Label]]:
    """
    Sort orbital ``m`` into ``label`` as if appended at the end.

    Returns ``(sign, merged)`` where ``sign`` is the parity of the permutation
    sorting ``(*label, m)`` ascending, or ``None`` when ``m`` is occupied.
    """
    lab = tuple(label)
    if m in lab:
        return None
    t = sum(1 for x in lab if x > m)
    return (-1 if t % 2 else 1), tuple(sorted(lab + (m,)))


def subset_sign(label: Sequence[int], sub: Iterable[int]) -> int:
    """
    Parity of moving the orbitals ``sub`` (kept in ascending order) to the
    front of ``label``, so that ``|label> = sign * |sub, label minus sub>``.
    """
    pos = [label.index(x) for x in sorted(sub)]
    return -1 if sum(q - t for t, q in enumerate(pos)) % 2 else 1


def exterior_power(u: np.ndarray, p: int) -> np.ndarray:
    """
    Matrix of the p-fold exterior power of a one-particle map ``u``.

    Entry ``(L, K)`` is the minor ``det(u[L, K])``, so that a rotated Slater
    determinant ``|K'>`` expands as ``sum_L det(u[L, K]) |L>``.
    """
    u = np.asarray(u)
    n = u.shape[0]
    basis = enumerate_basis(n, p)
    if p == 0:
        return np.ones((1, 1), dtype=u.dtype)
    idx = np.array(basis.labels, dtype=np.intp)
    sub = u[idx[:, None, :, None], idx[None, :, None, :]]
    return np.linalg.det(sub)
