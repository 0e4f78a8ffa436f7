"""
Necessary N-representability conditions evaluated on a trial 2-particle
density operator.

Every condition comes from a dual-cone element ``b`` (an operator whose
N-particle lift is positive semidefinite) and is reported in the
inequality form ``Tr(D P_g) <= bound``, except the P-condition which is
``Tr(D P_g) >= 0``.  Where both are cheap, the raw ``Tr(b D)`` route is
evaluated alongside and must agree with the inequality form.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass
from math import comb
from typing import Literal, Optional, Sequence

import numpy as np

from .canonical import canonical_decompose
from .errors import ConsistencyError, DomainError, ResourceError
from .operators import (
    DensityOperator,
    HermitianOperator,
    WaveFunction,
    contract,
    expectation,
    group_eigenvalues,
    hermitian_eig,
    identity,
    lift_operator,
    lift_two_body,
    projector,
)
from .spectral3 import lambda_max3, lambda_max_numeric

__all__ = [
    "Condition",
    "ConditionReport",
    "DEFAULT_TOL",
    "b_operator",
    "c_operator",
    "dual_p_operator",
    "strengthened_b_operator",
    "lambda_min_b",
    "p_condition",
    "dual_p_condition",
    "eigen_bound_check",
    "b_condition",
    "c_condition",
    "strengthened_b_condition",
    "one_particle_bound",
    "run_all",
]

DEFAULT_TOL = 1e-9
ROUTE_TOL = 1e-10


class Condition(str, enum.Enum):
    P = "P"
    DUAL_P = "DualP"
    B = "B"
    C = "C"
    STRENGTHENED_B = "StrengthenedB"
    EIGEN_BOUND = "EigenBound"
    ONE_PARTICLE_BOUND = "OneParticleBound"


@dataclass(frozen=True)
class ConditionReport:
    """One verdict.  ``margin >= -tol`` means the condition holds."""

    name: Condition
    value: float
    bound: float
    margin: float
    passed: bool
    tol: float
    context: str = ""

    @classmethod
    def upper(cls, name, value, bound, tol, context="") -> "ConditionReport":
        margin = bound - value
        return cls(Condition(name), float(value), float(bound), float(margin),
                   bool(margin >= -tol), float(tol), context)

    @classmethod
    def lower(cls, name, value, bound, tol, context="") -> "ConditionReport":
        margin = value - bound
        return cls(Condition(name), float(value), float(bound), float(margin),
                   bool(margin >= -tol), float(tol), context)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["name"] = self.name.value
        return d


# --- dual-cone operators ----------------------------------------------------

def _one_body_part(g: WaveFunction) -> HermitianOperator:
    """``(L^1_2 P_g) ^ I^1`` on the 2-particle space."""
    return lift_operator(contract(projector(g), 1), 2)


def b_operator(g: WaveFunction, N: int) -> HermitianOperator:
    """``I - (N-2) (L P_g) ^ I - (N-1) P_g``."""
    n = g.basis.n
    if not 2 <= N <= n:
        raise DomainError(f"need 2 <= N <= n, got N={N}, n={n}")
    return identity(n, 2) - (N - 2) * _one_body_part(g) - (N - 1) * projector(g)


def c_operator(g: WaveFunction, N: int, n: Optional[int] = None) -> HermitianOperator:
    """``(n-N+2) (L P_g) ^ I - (N-1) P_g``."""
    n = g.basis.n if n is None else n
    if not 2 <= N <= n:
        raise DomainError(f"need 2 <= N <= n, got N={N}, n={n}")
    return (n - N + 2) * _one_body_part(g) - (N - 1) * projector(g)


def _lambda_max(g: WaveFunction, N: int, mode: str) -> float:
    if mode == "analytic":
        if N != 3:
            raise DomainError("analytic Lambda_max is only available for N = 3")
        return lambda_max3(canonical_decompose(g))
    if mode == "numeric":
        return lambda_max_numeric(g, N)
    raise DomainError(f"unknown mode {mode!r}")


def dual_p_operator(g: WaveFunction, N: int, mode: str = "analytic") -> HermitianOperator:
    """``Lambda_max(g)/C(N,2) I - P_g``."""
    lam = _lambda_max(g, N, mode)
    return (lam / comb(N, 2)) * identity(g.basis.n, 2) - projector(g)


def _guard_lift(n: int, N: int) -> None:
    if N == 3 and n <= 12:
        return
    if N == 4 and n <= 10:
        return
    if N == 2:
        return
    raise ResourceError(f"lifted B-operator limited to N=3 (n<=12) or N=4 (n<=10), got N={N}, n={n}")


def lambda_min_b(g: WaveFunction, N: int = 3) -> float:
    """Smallest eigenvalue of ``C(N,2) B_N(g) ^ I^(N-2)``."""
    _guard_lift(g.basis.n, N)
    lifted = comb(N, 2) * lift_two_body(b_operator(g, N), N)
    w, _ = hermitian_eig(lifted)
    return float(w[-1])


def strengthened_b_operator(g: WaveFunction, N: int = 3) -> HermitianOperator:
    """``C(N,2) B_N(g) - Lambda_min I``."""
    lam = lambda_min_b(g, N)
    return comb(N, 2) * b_operator(g, N) - lam * identity(g.basis.n, 2)


# --- individual conditions --------------------------------------------------

def _check_route(a: float, b: float, what: str) -> None:
    if abs(a - b) > ROUTE_TOL:
        raise ConsistencyError(f"{what}: operator route {a!r} vs inequality route {b!r}")


def p_condition(D: HermitianOperator, g: WaveFunction, tol: float = DEFAULT_TOL,
                context: str = "") -> ConditionReport:
    return ConditionReport.lower(Condition.P, expectation(D, projector(g)), 0.0, tol, context)


def dual_p_condition(D: HermitianOperator, g: WaveFunction, N: int = 3,
                     mode: Literal["analytic", "numeric"] = "analytic",
                     tol: float = DEFAULT_TOL, context: str = "") -> ConditionReport:
    """``Tr(D P_g) <= Lambda_max(g) / C(N,2)``."""
    if mode == "analytic" and N != 3:
        raise DomainError("analytic mode requires N = 3")
    bound = _lambda_max(g, N, mode) / comb(N, 2)
    return ConditionReport.upper(Condition.DUAL_P, expectation(D, projector(g)), bound, tol, context)


def _pair_overlap(D1: HermitianOperator, g: WaveFunction) -> float:
    """``Tr(L D . L P_g)``."""
    return expectation(D1, contract(projector(g), 1))


def b_condition(D: HermitianOperator, g: WaveFunction, N: int = 3, tol: float = DEFAULT_TOL,
                context: str = "", D1: Optional[HermitianOperator] = None) -> ConditionReport:
    """
    ``Tr(D P_g) <= [1 - (N-2) Tr(L D . L P_g)] / (N-1)``; the N=3 case reads
    ``Tr(D P_g) <= (1 - Tr(L D . L P_g)) / 2``.
    """
    D1 = contract(D, 1) if D1 is None else D1
    value = expectation(D, projector(g))
    bound = (1.0 - (N - 2) * _pair_overlap(D1, g)) / (N - 1)
    rep = ConditionReport.upper(Condition.B, value, bound, tol, context)
    _check_route(expectation(D, b_operator(g, N)) / (N - 1), rep.margin, "B-condition")
    return rep


def c_condition(D: HermitianOperator, g: WaveFunction, N: int = 3, tol: float = DEFAULT_TOL,
                context: str = "", D1: Optional[HermitianOperator] = None) -> ConditionReport:
    """``Tr(D P_g) <= (n-N+2)/(N-1) Tr(L D . L P_g)``."""
    n = g.basis.n
    D1 = contract(D, 1) if D1 is None else D1
    value = expectation(D, projector(g))
    bound = (n - N + 2) / (N - 1) * _pair_overlap(D1, g)
    rep = ConditionReport.upper(Condition.C, value, bound, tol, context)
    _check_route(expectation(D, c_operator(g, N)) / (N - 1), rep.margin, "C-condition")
    return rep


def strengthened_b_condition(D: HermitianOperator, g: WaveFunction, N: int = 3,
                             tol: float = DEFAULT_TOL, context: str = "",
                             D1: Optional[HermitianOperator] = None) -> ConditionReport:
    """
    ``Tr[(C(N,2) B_N(g) - Lambda_min I) D] >= 0`` solved for ``Tr(D P_g)``:

        Tr(D P_g) <= [1 - (N-2) t - Lambda_min / C(N,2)] / (N-1),
        t = Tr(L D . L P_g).
    """
    D1 = contract(D, 1) if D1 is None else D1
    lam = lambda_min_b(g, N)
    value = expectation(D, projector(g))
    bound = (1.0 - (N - 2) * _pair_overlap(D1, g) - lam / comb(N, 2)) / (N - 1)
    rep = ConditionReport.upper(Condition.STRENGTHENED_B, value, bound, tol, context)
    op = comb(N, 2) * b_operator(g, N) - lam * identity(g.basis.n, 2)
    _check_route(expectation(D, op) / (comb(N, 2) * (N - 1)), rep.margin, "strengthened B")
    return rep


def eigen_bound_check(D: HermitianOperator, N: int = 3, tol: float = DEFAULT_TOL,
                      mode: Literal["analytic", "numeric"] = "analytic") -> list[ConditionReport]:
    """
    Check every eigenvalue of ``D`` against the dual-P bound of its own
    eigenvector.

    Eigenvalues within ``1e-9 ||D||_F`` form one group; every eigenvector the
    solver returns for the group is checked and the worst margin is reported.
    Eigenvalues at or below ``tol`` are skipped.
    """
    if mode == "analytic" and N != 3:
        raise DomainError("analytic mode requires N = 3")
    w, v = hermitian_eig(D)
    fro = float(np.linalg.norm(D.matrix))
    reports = []
    for j, grp in enumerate(group_eigenvalues(w, 1e-9 * fro)):
        if w[grp[0]] <= tol:
            continue
        worst = None
        for k in grp:
            g = WaveFunction(D.basis, v[:, k])
            rep = ConditionReport.upper(
                Condition.EIGEN_BOUND, w[k], _lambda_max(g, N, mode) / comb(N, 2), tol,
                f"eigenvalue group {j} (multiplicity {len(grp)})",
            )
            if worst is None or rep.margin < worst.margin:
                worst = rep
        reports.append(worst)
    return reports


def one_particle_bound(D1: HermitianOperator, N: int, tol: float = DEFAULT_TOL,
                       context: str = "") -> ConditionReport:
    """Largest eigenvalue of the 1-particle density operator must not exceed ``1/N``."""
    if abs(D1.trace - 1.0) > 1e-10:
        raise DomainError(f"one-particle density operator has trace {D1.trace!r}")
    w, _ = hermitian_eig(D1)
    return ConditionReport.upper(Condition.ONE_PARTICLE_BOUND, w[0], 1.0 / N, tol, context)


PER_PROBE = (Condition.P, Condition.DUAL_P, Condition.B, Condition.C, Condition.STRENGTHENED_B)


def run_all(D: DensityOperator, N: int, probes: Sequence[WaveFunction], tol: float = DEFAULT_TOL,
            names: Optional[Sequence[str]] = None) -> list[ConditionReport]:
    """
    Evaluate every condition for every probe geminal, then the eigenvalue
    bound and the one-particle bound once.

    Reports are ordered by probe index and then in the order P, DualP, B, C,
    StrengthenedB; the two whole-matrix checks come last.  For ``N != 3`` the
    dual-P and eigenvalue bounds use numerically computed ``Lambda_max``.
    """
    if not probes:
        raise DomainError("run_all needs at least one probe geminal")
    if D.basis.p != 2:
        raise DomainError("run_all expects a 2-particle density operator")
    names = [f"probe {i}" for i in range(len(probes))] if names is None else list(names)
    mode = "analytic" if N == 3 else "numeric"
    D1 = contract(D, 1)
    out: list[ConditionReport] = []
    for g, name in zip(probes, names):
        out.append(p_condition(D, g, tol, name))
        out.append(dual_p_condition(D, g, N, mode, tol, name))
        out.append(b_condition(D, g, N, tol, name, D1))
        out.append(c_condition(D, g, N, tol, name, D1))
        out.append(strengthened_b_condition(D, g, N, tol, name, D1))
    out.extend(eigen_bound_check(D, N, tol, mode))
    out.append(one_particle_bound(D1, N, tol, "contraction to one particle"))
    return out
