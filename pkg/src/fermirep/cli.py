"""
Command-line front end.

Exit codes: 0 all checks pass, 1 usage or input error, 2 a violation was
found (or a verification exceeded its tolerance).
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .conditions import (
    DEFAULT_TOL,
    ConditionReport,
    b_condition,
    c_condition,
    dual_p_condition,
    lambda_min_b,
    run_all,
    strengthened_b_condition,
)
from .errors import DomainError, ResourceError
from .matrixfile import SCHEMA, dumps, read_matrix, write_matrix
from .operators import hermitian_eig
from .sampling import (
    DEFAULT_GRID,
    GENERATOR,
    SampleKind,
    SampleSpec,
    default_probes,
    extreme_geminal,
    generate,
    random_pure_state,
    witness_search,
)
from .spectral3 import lifted_projector, spectrum_of

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2
SPECTRAL_TOL = 1e-9


class UsageError(Exception):
    pass


# --- output helpers ----------------------------------------------------------

def _emit_rows(rows: list[dict], fmt: str, out, digits: int = 6) -> None:
    if not rows:
        return
    cols = list(rows[0])
    if fmt == "json":
        for r in rows:
            out.write(dumps({"schema": SCHEMA, **r}) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in r.values()])
    else:
        def cell(v):
            if isinstance(v, bool):
                return "pass" if v else "FAIL"
            if isinstance(v, float):
                return f"{v:.{digits}f}" if abs(v) >= 1e-4 or v == 0 else f"{v:.3e}"
            return str(v)
        body = [[cell(v) for v in r.values()] for r in rows]
        widths = [max(len(c), *(len(b[i]) for b in body)) for i, c in enumerate(cols)]
        out.write("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip() + "\n")
        for b in body:
            out.write("  ".join(c.ljust(w) for c, w in zip(b, widths)).rstrip() + "\n")


def _report_rows(reports: Sequence[ConditionReport]) -> list[dict]:
    return [r.as_dict() for r in reports]


# --- probe selection -----------------------------------------------------------

def parse_probes(spec: str) -> dict:
    """``eigen``, ``extreme``, ``random:k`` or ``all``, comma separated."""
    sel = {"eigen": False, "extreme": False, "random": 0}
    for tok in filter(None, (t.strip() for t in spec.split(","))):
        if tok == "all":
            sel.update(eigen=True, extreme=True, random=max(sel["random"], 4))
        elif tok in ("eigen", "extreme"):
            sel[tok] = True
        elif tok.startswith("random:"):
            try:
                sel["random"] = int(tok.split(":", 1)[1])
            except ValueError:
                raise UsageError(f"bad probe spec {tok!r}") from None
            if sel["random"] < 0:
                raise UsageError(f"bad probe spec {tok!r}")
        else:
            raise UsageError(f"unknown probe kind {tok!r}")
    if not (sel["eigen"] or sel["extreme"] or sel["random"]):
        raise UsageError("probe selection is empty")
    return sel


# --- subcommands -------------------------------------------------------------

def cmd_check(args, out) -> int:
    D = read_matrix(args.file)
    if D.basis.p != 2:
        raise UsageError(f"check expects a 2-particle matrix, file has p={D.basis.p}")
    if not 2 <= args.N <= D.basis.n:
        raise UsageError(f"need 2 <= N <= n, got N={args.N}, n={D.basis.n}")
    sel = parse_probes(args.probes)
    probes, names = default_probes(D, sel["random"], args.seed, sel["eigen"], sel["extreme"])
    if not probes:
        raise UsageError("no probe geminals selected (extreme geminal needs even n)")
    reports = run_all(D, args.N, probes, args.tol, names)
    if args.report:
        with open(args.report, "w") as fh:
            _emit_rows(_report_rows(reports), "json", fh)
    _emit_rows(_report_rows(reports), args.format, out)
    failed = [r for r in reports if not r.passed]
    if args.format == "table":
        out.write(f"{len(reports) - len(failed)}/{len(reports)} checks passed\n")
    return EXIT_VIOLATION if failed else EXIT_OK


def verify_spectral(n: int, count: int, seed: int) -> tuple[float, float, list[dict]]:
    """Largest eigenvalue deviation and eigenvector residual over ``count`` geminals."""
    dev = res = 0.0
    rows: list[dict] = []
    for i in range(count):
        g = random_pure_state(n, 2, seed, i)
        spec = spectrum_of(g)
        H = lifted_projector(g, 3)
        w, _ = hermitian_eig(H)
        analytic = spec.eigenvalues()
        dev = max(dev, float(np.max(np.abs(w - analytic))))
        for lam, v in spec.eigenpairs():
            res = max(res, float(np.linalg.norm(H.matrix @ v.coeffs - lam * v.coeffs)))
        if count == 1:
            rows = [
                {"index": k, "analytic": float(a), "numeric": float(b), "deviation": float(abs(a - b))}
                for k, (a, b) in enumerate(zip(analytic, w))
            ]
    return dev, res, rows


def cmd_verify_spectral(args, out) -> int:
    if not 4 <= args.n <= 8:
        raise UsageError(f"verify-spectral needs 4 <= n <= 8, got {args.n}")
    if args.count < 1:
        raise UsageError("count must be positive")
    dev, res, rows = verify_spectral(args.n, args.count, args.seed)
    _emit_rows(rows, args.format, out)
    summary = {"n": args.n, "count": args.count, "seed": args.seed,
               "max_eigenvalue_deviation": dev, "max_eigenvector_residual": res,
               "passed": bool(max(dev, res) <= SPECTRAL_TOL)}
    _emit_rows([summary], args.format, out, digits=17)
    return EXIT_OK if summary["passed"] else EXIT_VIOLATION


def compare_bounds(n: int) -> dict:
    """Closed-form and evaluated bounds on ``Tr(D P_extr)`` for even ``n``."""
    g = extreme_geminal(n)
    D = generate(SampleSpec(n=n, kind=SampleKind.MAXIMALLY_MIXED))
    return {
        "n": n,
        "dual_p": (1 - 2 / n) / 3,
        "b_c": (1 - 1 / n) / 2,
        "dual_p_eval": dual_p_condition(D, g).bound,
        "b_eval": b_condition(D, g).bound,
        "c_eval": c_condition(D, g).bound,
        "strengthened_b": strengthened_b_condition(D, g).bound,
        "lambda_min_b": lambda_min_b(g),
        "lambda_min_closed": 1 + 1 / n,
    }


def cmd_compare_bounds(args, out) -> int:
    rows = []
    for n in args.n:
        if n % 2:
            sys.stderr.write(f"skipping odd n={n}: the extreme geminal needs even n\n")
            continue
        rows.append(compare_bounds(n))
    _emit_rows(rows, args.format, out)
    return EXIT_OK


def cmd_witness(args, out) -> int:
    found = witness_search(args.n, args.N, args.grid)
    rows = []
    for spec, reps in found:
        dual, b, c = reps
        rows.append({"n": spec.n, "lambda": spec.lam, "dual_p_bound": dual.bound,
                     "dual_p_margin": dual.margin, "b_bound": b.bound, "b_margin": b.margin,
                     "c_bound": c.bound, "c_margin": c.margin})
    _emit_rows(rows, args.format, out)
    if not rows:
        out.write(f"no witness found for n={args.n} on the given grid\n")
    return EXIT_OK


def cmd_sample(args, out) -> int:
    spec = SampleSpec(n=args.n, N=args.N, kind=args.kind, mix_rank=args.mix_rank,
                      lam=args.lam, seed=args.seed, index=args.index)
    D = generate(spec)
    meta = {"generator": GENERATOR, "seed": spec.seed, "spec": spec.as_dict(),
            "version": __version__}
    write_matrix(args.output, D, meta)
    out.write(f"wrote {args.output} (n={spec.n}, p=2, kind={spec.kind.value})\n")
    return EXIT_OK


# --- parser ----------------------------------------------------------------

def _grid(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty grid")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fermirep",
        description="Necessary N-representability conditions for 2-particle density matrices.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt="table"):
        p.add_argument("--format", choices=("json", "csv", "table"), default=fmt)

    p = sub.add_parser("check", help="evaluate every condition on a 2-particle matrix file")
    p.add_argument("file")
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--probes", default="all", help="eigen, extreme, random:k or all (comma separated)")
    p.add_argument("--seed", type=int, default=0, help="seed for random probes")
    p.add_argument("--report", help="also write JSON-lines reports to this path")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify-spectral", help="analytic vs numeric spectrum of 3 P_g ^ I")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_verify_spectral)

    p = sub.add_parser("compare-bounds", help="bounds on Tr(D P_extr) from each condition")
    p.add_argument("--n", type=int, nargs="+", default=[4, 6, 8, 10, 12])
    common(p)
    p.set_defaults(func=cmd_compare_bounds)

    p = sub.add_parser("witness", help="densities separating dual-P from B and C")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--grid", type=_grid, default=list(DEFAULT_GRID),
                   help="comma separated lambda values (default 0, 0.05, ..., 1)")
    common(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("sample", help="write a seeded trial density matrix file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--kind", choices=[k.value for k in SampleKind], default="mixed_contracted")
    p.add_argument("--mix-rank", type=int, default=1)
    p.add_argument("--lam", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (UsageError, DomainError, ResourceError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
