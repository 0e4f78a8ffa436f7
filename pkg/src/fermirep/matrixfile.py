"""
JSON matrix files and report lines.

A matrix file looks like::

    {"schema": 1, "n": 4, "p": 2, "basis_order": "slater-lex-0based",
     "entries": [[re, im], ...],          # row-major, C(n,p)^2 pairs
     "metadata": {...}}                   # optional

Floats are written with 17 significant digits so a dump/load round trip is
bit-exact.
"""

from __future__ import annotations

import json
import math
from math import comb
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .basis import enumerate_basis
from .errors import DomainError
from .operators import DensityOperator, HermitianOperator

__all__ = [
    "SCHEMA",
    "BASIS_ORDER",
    "LOAD_TOL",
    "dumps",
    "matrix_to_dict",
    "write_matrix",
    "read_matrix",
    "parse_matrix",
]

SCHEMA = 1
BASIS_ORDER = "slater-lex-0based"
LOAD_TOL = 1e-8


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise DomainError(f"cannot serialize non-finite value {x!r}")
    s = format(x, ".17g")
    if "." not in s and "e" not in s and "n" not in s:
        s += ".0"
    return s


def dumps(obj: Any) -> str:
    """Compact JSON with every float at 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def matrix_to_dict(op: HermitianOperator, metadata: Optional[dict] = None) -> dict:
    m = op.matrix.reshape(-1)
    d = {
        "schema": SCHEMA,
        "n": op.basis.n,
        "p": op.basis.p,
        "basis_order": BASIS_ORDER,
        "entries": [[float(z.real), float(z.imag)] for z in m],
    }
    if metadata:
        d["metadata"] = metadata
    return d


def write_matrix(path, op: HermitianOperator, metadata: Optional[dict] = None) -> None:
    Path(path).write_text(dumps(matrix_to_dict(op, metadata)) + "\n")


def parse_matrix(data: dict, density: bool = True, tol: float = LOAD_TOL) -> HermitianOperator:
    """Validate a decoded matrix file; raises DomainError on any defect."""
    if not isinstance(data, dict):
        raise DomainError("matrix file must hold a JSON object")
    for key in ("n", "p", "entries"):
        if key not in data:
            raise DomainError(f"matrix file is missing {key!r}")
    if data.get("schema", SCHEMA) != SCHEMA:
        raise DomainError(f"unsupported schema {data.get('schema')!r}")
    if data.get("basis_order", BASIS_ORDER) != BASIS_ORDER:
        raise DomainError(f"unsupported basis order {data.get('basis_order')!r}")
    n, p = data["n"], data["p"]
    if not (isinstance(n, int) and isinstance(p, int)) or not 0 <= p <= n:
        raise DomainError(f"invalid dimensions n={n!r}, p={p!r}")
    d = comb(n, p)
    try:
        arr = np.asarray(data["entries"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"malformed entries: {exc}") from None
    if arr.shape != (d * d, 2):
        raise DomainError(f"expected {d * d} [re, im] pairs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("entries contain non-finite values")
    m = (arr[:, 0] + 1j * arr[:, 1]).reshape(d, d)
    scale = max(float(np.max(np.abs(m))), 1.0)
    if np.max(np.abs(m - m.conj().T)) > tol * scale:
        raise DomainError("matrix is not Hermitian within tolerance")
    m = 0.5 * (m + m.conj().T)
    basis = enumerate_basis(n, p)
    if not density:
        return HermitianOperator(basis, m)
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > tol:
        raise DomainError(f"trace is {tr!r}, expected 1")
    lo = float(np.linalg.eigvalsh(m)[0])
    if lo < -tol:
        raise DomainError(f"matrix has negative eigenvalue {lo:.3e}")
    return DensityOperator(basis, m, trace_tol=tol, psd_rtol=tol)


def read_matrix(path, density: bool = True, tol: float = LOAD_TOL) -> HermitianOperator:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read {path}: {exc}") from None
    return parse_matrix(data, density, tol)
