"""Command-line front end.

Usage:
    xjacobi validate --alpha 2 --beta 1 --m 1
    xjacobi table --alpha 2 --beta 1 --m 1 --n-max 4 --output csv
    xjacobi verify eigen --alpha 7/2 --beta 1/2 --m 2 --n-max 6
    xjacobi classify --alpha 0.5 --beta 1.5 --m 1
    xjacobi expand exp --alpha 2 --beta 1 --m 1 --M 30 --output csv

Exit status: 0 all checks pass, 1 a mathematical check failed, 2 usage or
parse error (including parameters rejected before a computation).
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .errors import NonConvergent, NotInvariant, ParameterError, XJacobiError
from .exceptional import XParams, eigenvalue, family, parameter_clauses, validate_params
from .polyalg import EXACT, FLOAT, Polynomial, poly_eval

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def parse_rational(text: str) -> Fraction:
    """Accept "p/q", integers and decimals; decimals are converted exactly."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational or decimal number: {text!r}")


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return repr(float(v))


@dataclass
class RunConfig:
    alpha: Fraction
    beta: Fraction
    m: int
    mode: str = EXACT
    output: str = "json"
    quad_cap: int | None = None
    tol: float | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["alpha"], d["beta"] = str(self.alpha), str(self.beta)
        return d


class Report:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.results: list[dict] = []

    def add(self, name: str, ok: bool, residual=0.0, **details) -> None:
        self.results.append({"name": name, "pass": bool(ok),
                             "residual": float(residual), "details": details})

    @property
    def passed(self) -> int:
        return sum(r["pass"] for r in self.results)

    @property
    def failed(self) -> int:
        return len(self.results) - self.passed

    def to_dict(self) -> dict:
        return {"config": self.cfg.to_dict(), "results": self.results,
                "summary": {"passed": self.passed, "failed": self.failed}}

    def exit_code(self) -> int:
        return EXIT_OK if self.failed == 0 else EXIT_FAIL


def _emit_json(obj, out) -> None:
    json.dump(obj, out, indent=2, default=_json_default)
    out.write("\n")


def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _emit_csv(header, rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def _emit_report(rep: Report, out) -> None:
    if rep.cfg.output == "csv":
        _emit_csv(["name", "pass", "residual"],
                  [[r["name"], int(r["pass"]), repr(r["residual"])] for r in rep.results], out)
    else:
        _emit_json(rep.to_dict(), out)


def _params(cfg: RunConfig) -> XParams:
    return validate_params(cfg.alpha, cfg.beta, cfg.m)


# commands

def cmd_validate(cfg: RunConfig, out) -> int:
    rep = Report(cfg)
    clauses = parameter_clauses(cfg.alpha, cfg.beta, cfg.m)
    for name, ok in clauses.items():
        rep.add(name, ok)
    if all(clauses.values()):
        try:
            validate_params(cfg.alpha, cfg.beta, cfg.m)
            rep.add("denominator-roots", True)
        except ParameterError as exc:
            rep.add(exc.clause, False, message=str(exc))
        except XJacobiError as exc:
            rep.add("denominator-degree", False, message=str(exc))
    _emit_report(rep, out)
    return rep.exit_code()


def cmd_table(cfg: RunConfig, out, n_max: int) -> int:
    params = _params(cfg)
    fam = family(params)
    rows = []
    for n in range(params.m, n_max + 1):
        p = fam.exceptional_poly(n)
        coeffs = [str(c) for c in p.coeffs] if cfg.mode == EXACT else [repr(float(c)) for c in p.coeffs]
        lam = eigenvalue(params, n)
        rows.append({"n": n, "degree": p.degree,
                     "eigenvalue": str(lam) if cfg.mode == EXACT else float(lam),
                     "coefficients": coeffs})
    if cfg.output == "csv":
        width = max((len(r["coefficients"]) for r in rows), default=0)
        _emit_csv(["n", "degree", "eigenvalue"] + [f"c{k}" for k in range(width)],
                  [[r["n"], r["degree"], r["eigenvalue"]]
                   + r["coefficients"] + [""] * (width - len(r["coefficients"]))
                   for r in rows], out)
        return EXIT_OK
    rep = Report(cfg)
    for r in rows:
        rep.add(f"P[{params.m},{r['n']}]", r["degree"] == r["n"], **r)
    _emit_report(rep, out)
    return rep.exit_code()


def _verify_eigen(params, fam, rep, n_max, mode):
    from .operator import apply_T_pointwise, apply_T_polynomial, polynomial_bundle

    xs = np.random.default_rng(0).uniform(-0.99, 0.99, 50)
    for n in range(params.m, n_max + 1):
        y = fam.exceptional_poly(n)
        lam = eigenvalue(params, n)
        if mode == EXACT:
            diff = apply_T_polynomial(params, y, fam) - y.scale(lam)
            resid = float(max((abs(c) for c in diff.coeffs), default=0))
            rep.add(f"eigen n={n}", diff.is_zero(), resid, eigenvalue=str(lam))
        else:
            tv = apply_T_pointwise(params, *polynomial_bundle(y), xs, fam=fam)
            yv = poly_eval(y.to_float(), xs)
            scale = max(1.0, float(np.max(np.abs(float(lam) * yv))))
            resid = float(np.max(np.abs(tv - float(lam) * yv))) / scale
            rep.add(f"eigen n={n}", resid < (rep.cfg.tol or 1e-11), resid, eigenvalue=float(lam))


def _verify_ortho(params, fam, rep, n_max):
    from .expansion import gram_matrix

    g = gram_matrix(params, n_max, fam)
    norm = g.normalized()
    tol = rep.cfg.tol or 1e-10
    for i, n in enumerate(g.degrees):
        for j in range(i + 1, len(g.degrees)):
            v = abs(norm[i, j])
            rep.add(f"ortho ({n},{g.degrees[j]})", v < tol, v)


def _verify_greens(params, fam, rep):
    from .operator import greens_residual, smooth_battery

    bat = smooth_battery(params, fam)
    names = list(bat)
    tol = rep.cfg.tol or 1e-8
    for i, a in enumerate(names):
        for b in names[i:]:
            r = greens_residual(params, bat[a], bat[b], fam=fam)
            rep.add(f"greens ({a},{b})", r < tol, r)


def _verify_fspace(params, fam, rep, n_max):
    from .operator import f_space_dimension, in_F_space, root_condition_residuals

    m = params.m
    for top in range(m, n_max + 1):
        members = [fam.exceptional_poly(j) for j in range(m, top + 1)]
        exact_ok = all(in_F_space(params, q, fam) for q in members)
        resid = max(float(np.max(root_condition_residuals(params, q, fam))) for q in members)
        rep.add(f"root conditions deg<={top}", exact_ok and resid < 1e-10, resid)
        dim = f_space_dimension(params, top, fam)
        rep.add(f"dim F deg<={top}", dim == len(members), abs(dim - len(members)),
                dim_F=dim, count_E=len(members))


def _verify_gap(params, fam, rep):
    from .spectral import gap_certificate

    for d in range(params.m):
        rep.add(f"gap d={d}", gap_certificate(params, d, fam))
    rep.add(f"control d={params.m} (family starts here)",
            not gap_certificate(params, params.m, fam))


def cmd_verify(cfg: RunConfig, out, which: str, n_max: int | None) -> int:
    params = _params(cfg)
    fam = family(params)
    rep = Report(cfg)
    if n_max is None:
        n_max = params.m + 6
    if which == "eigen":
        _verify_eigen(params, fam, rep, n_max, cfg.mode)
    elif which == "ortho":
        _verify_ortho(params, fam, rep, n_max)
    elif which == "greens":
        _verify_greens(params, fam, rep)
    elif which == "fspace":
        _verify_fspace(params, fam, rep, n_max)
    elif which == "gap":
        _verify_gap(params, fam, rep)
    _emit_report(rep, out)
    return rep.exit_code()


def cmd_classify(cfg: RunConfig, out) -> int:
    from .spectral import boundary_case, classify_endpoint, deficiency_index, indicial_roots

    params = _params(cfg)
    endpoints = {}
    for e in (-1, 1):
        data = indicial_roots(params, e)
        endpoints[str(e)] = {
            "indicial_roots": [_fmt(r) for r in data.roots],
            "class": classify_endpoint(params, e).value,
        }
    bc = boundary_case(params)
    di = deficiency_index(params)
    body = {
        "endpoints": endpoints,
        "deficiency_index": list(di.as_tuple()),
        "boundary_case": {"id": bc.case_id, "endpoints": list(bc.endpoints),
                          "functionals": bc.functionals, "domain": bc.domain},
    }
    rep = Report(cfg)
    rep.add("deficiency/boundary coherence", len(bc.endpoints) == di.n_plus)
    if cfg.output == "csv":
        _emit_csv(["endpoint", "root1", "root2", "class"],
                  [[e, *v["indicial_roots"], v["class"]] for e, v in endpoints.items()], out)
    else:
        _emit_json({**rep.to_dict(), **body}, out)
    return rep.exit_code()


def expansion_target(name: str, params: XParams, high_precision: bool = False):
    """Resolve a builtin target name to a callable."""
    if high_precision:
        import mpmath as lib
        absf, shift = lib.fabs, lib.mpf(1) / 4
    else:
        lib, absf, shift = np, np.abs, 0.25
    if name == "exp":
        return lib.exp
    if name == "runge":
        return lambda x: 1 / (1 + 25 * x * x)
    if name == "abs-shift":
        return lambda x: absf(x - shift)
    if name.startswith("poly:"):
        coeffs = [parse_rational(c) for c in name[5:].split(",") if c.strip()]
        return Polynomial(coeffs)
    if name.startswith("member:"):
        return family(params).exceptional_poly(int(name[7:]))
    raise argparse.ArgumentTypeError(f"unknown expansion target {name!r}")


def cmd_expand(cfg: RunConfig, out, target: str, M: int, dps: int | None) -> int:
    from .expansion import expand

    params = _params(cfg)
    f = expansion_target(target, params, high_precision=dps is not None)
    if dps is not None and isinstance(f, Polynomial):
        from .highprec import _mp_poly
        f = _mp_poly(f)
    report = expand(params, f, M, dps=dps)
    if cfg.output == "csv":
        _emit_csv(["M", "residual"],
                  [[n, repr(r)] for n, r in zip(report.degrees, report.residual_norms)], out)
        tol = cfg.tol if cfg.tol is not None else 1e-3
        ok = report.residual_norms[-1] < tol and report.monotone()
        return EXIT_OK if ok else EXIT_FAIL
    rep = Report(cfg)
    tol = cfg.tol if cfg.tol is not None else 1e-3
    rep.add("final residual", report.residual_norms[-1] < tol, report.residual_norms[-1],
            target=target, M=M)
    rep.add("residuals non-increasing", report.monotone(), 0.0,
            residual_norms=report.residual_norms)
    if dps is not None:
        rep.add("residuals strictly decreasing", report.strictly_decreasing(), 0.0)
    rep.results[0]["details"]["expansion"] = report.to_dict()
    _emit_report(rep, out)
    return rep.exit_code()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=parse_rational, required=True)
    common.add_argument("--beta", type=parse_rational, required=True)
    common.add_argument("--m", type=int, required=True)
    common.add_argument("--mode", choices=(EXACT, FLOAT), default=EXACT)
    common.add_argument("--output", choices=("json", "csv"), default="json")
    common.add_argument("--quad-cap", type=int, default=None,
                        help="quadrature order cap (else $XJACOBI_QUAD_CAP, else 2048)")
    common.add_argument("--tol", type=float, default=None, help="override the pass tolerance")

    parser = argparse.ArgumentParser(prog="xjacobi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common])
    t = sub.add_parser("table", parents=[common])
    t.add_argument("--n-max", type=int, default=None)
    v = sub.add_parser("verify", parents=[common])
    v.add_argument("which", choices=("eigen", "ortho", "greens", "fspace", "gap"))
    v.add_argument("--n-max", type=int, default=None)
    sub.add_parser("classify", parents=[common])
    e = sub.add_parser("expand", parents=[common])
    e.add_argument("target", help="exp | runge | abs-shift | poly:c0,c1,... | member:n")
    e.add_argument("--M", type=int, default=30)
    e.add_argument("--dps", type=int, default=None,
                   help="run the expansion in mpmath at this many digits")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    cfg = RunConfig(args.alpha, args.beta, args.m, args.mode, args.output,
                    args.quad_cap, args.tol)
    saved_cap = os.environ.get("XJACOBI_QUAD_CAP")
    if cfg.quad_cap is not None:
        os.environ["XJACOBI_QUAD_CAP"] = str(cfg.quad_cap)
    try:
        if args.command == "validate":
            return cmd_validate(cfg, out)
        if args.command == "table":
            n_max = args.n_max if args.n_max is not None else cfg.m + 3
            return cmd_table(cfg, out, n_max)
        if args.command == "verify":
            return cmd_verify(cfg, out, args.which, args.n_max)
        if args.command == "classify":
            return cmd_classify(cfg, out)
        if args.command == "expand":
            return cmd_expand(cfg, out, args.target, args.M, args.dps)
    except ParameterError as exc:
        print(f"xjacobi: rejected parameters ({exc.clause}): {exc}", file=sys.stderr)
        return EXIT_USAGE
    except argparse.ArgumentTypeError as exc:
        print(f"xjacobi: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonConvergent, NotInvariant) as exc:
        print(f"xjacobi: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    finally:
        if cfg.quad_cap is not None:
            if saved_cap is None:
                os.environ.pop("XJACOBI_QUAD_CAP", None)
            else:
                os.environ["XJACOBI_QUAD_CAP"] = saved_cap
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
