"""Command-line front end: ``latgreen (eval|table|validate|correlation|calibrate)``.

Index conventions follow each family's own formulas:

* ``chain1d``, ``nnn``: a single site ``r``.
* ``square``: ``eval`` takes contour indices ``r,s`` (``r = p+q``, ``s = p-q``);
  ``table`` and ``correlation`` take physical ``p,q``.
* ``trihex-honeycomb``: ``p,q`` of ``H_{p+q,2q-p}``; ``trihex-triangular``: triangular
  ``p,q`` with ``p+q`` even.
* ``bcc``: ``D`` components, ``--dim D``.

All values reported by ``eval`` and ``table`` are the resolvent ``H`` in the
family's native spectral parameter ``t``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import chain1d, extensions, oracle, square2d, trihex2d, validation
from .errors import ConfigError, ConvergenceError, LatticeGreenError
from .numerics import SeriesEval

FAMILIES = ("chain1d", "square", "trihex-honeycomb", "trihex-triangular", "bcc", "nnn")
METHODS = ("series", "closed", "hyp", "branch", "oracle")
CSV_HEADER = ("family", "i1", "i2", "i3", "t_re", "t_im", "value_re", "value_im", "terms", "err")

# Fourier integral = ORACLE_FACTOR * H at the family's raw lambda (checked by calibration)
ORACLE_FACTOR = {"chain1d": 1.0, "square": 1.0, "trihex-honeycomb": 2.0,
                 "trihex-triangular": 1.0, "bcc": 1.0}


class UsageError(Exception):
    """Bad command-line input; exits with status 2."""


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"expected re[,im], got {text!r}")


def _parse_ints(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _parse_tau(text: str) -> tuple:
    try:
        tau1, tau2 = (float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected tau1,tau2, got {text!r}") from None
    return tau1, tau2


def _index_arity(family: str, dim: int) -> int:
    return {"chain1d": 1, "nnn": 1, "bcc": dim}.get(family, 2)


def _spectral(args) -> complex:
    if args.family == "nnn":
        return 2 / args.tau[0]
    if args.lam is not None:
        lam = _parse_complex(args.lam)
        # inverse of oracle.raw_lambda
        if args.family == "trihex-honeycomb":
            return 2 * lam + 3
        if args.family == "trihex-triangular":
            return lam + 3
        return lam / {"chain1d": 2, "square": 4, "bcc": 2 ** args.dim}[args.family]
    if args.t is None:
        raise UsageError("--t or --lambda is required")
    return _parse_complex(args.t)


def _oracle_eval(family: str, idx: tuple, t: complex, dim: int) -> SeriesEval:
    specs = {"chain1d": oracle.chain, "square": oracle.square,
             "trihex-honeycomb": oracle.honeycomb_family, "trihex-triangular": oracle.triangular}
    spec = oracle.bcc(dim) if family == "bcc" else specs[family]()
    if family == "square":
        idx = square2d.to_physical(*idx)
    res = oracle.quadrature_resolvent_eval(spec, idx, oracle.raw_lambda(family, t, dim))
    return res.scaled(1 / ORACLE_FACTOR[family])


def evaluate(family: str, idx: tuple, t: complex, method: str, *, dim: int = 3,
             tau: tuple | None = None) -> SeriesEval:
    """One resolvent value; ``idx`` in the conventions of the module docstring."""
    if len(idx) != _index_arity(family, dim):
        raise UsageError(f"{family} needs {_index_arity(family, dim)} index component(s)")
    if family == "nnn":
        if method == "series":
            return extensions.h_nnn_series(idx[0], *tau)
        if method == "oracle":
            res = oracle.quadrature_resolvent_eval(oracle.nnn(*tau), idx, 2 / tau[0])
            return res
    elif method == "oracle":
        return _oracle_eval(family, idx, t, dim)
    elif family == "chain1d":
        (r,) = idx
        table = {"series": lambda: chain1d.h1_gamma_series(r, t),
                 "hyp": lambda: chain1d.h1_hyp(r, t),
                 "branch": lambda: chain1d.h1_parity_branch(r, t),
                 "closed": lambda: SeriesEval(chain1d.h1_closed(r, t), 0, 0.0)}
        if method in table:
            return table[method]()
    elif family == "square":
        r, s = idx
        if method == "closed":
            if (r, s) != (0, 0) or complex(t).imag != 0:
                raise UsageError("closed form (elliptic K) exists for r = s = 0 and real t only")
            return SeriesEval(square2d.h00_elliptic(complex(t).real), 0, 0.0)
        table = {"series": square2d.h2_gamma_series, "hyp": square2d.h2_4f3,
                 "branch": square2d.h2_parity_branch}
        if method in table:
            return table[method](r, s, t)
    elif family in ("trihex-honeycomb", "trihex-triangular"):
        p, q = idx
        if family == "trihex-triangular":
            p, q = trihex2d.triangular_to_honeycomb(p, q)
        if method == "series":
            return trihex2d.h_trihex_series(p, q, t)
        if method == "hyp":
            return trihex2d.fc3_representation(p, q, t)
    elif family == "bcc":
        if method == "series":
            return extensions.h_bcc_series(idx, t, dim)
        if method == "branch":
            return extensions.h_bcc_parity_branch(idx, t, dim)
    raise UsageError(f"method {method!r} is not available for {family}")


def _cplx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_eval(args) -> int:
    idx = _parse_ints(args.r)
    t = _spectral(args)
    res = evaluate(args.family, idx, t, args.method, dim=args.dim, tau=args.tau)
    record = {"family": args.family, "indices": list(idx), "spectral": _cplx(t),
              "method": args.method, "value": _cplx(res.value), "terms_used": res.terms_used,
              "tail_estimate": res.tail_estimate}
    if args.family == "nnn":
        record["tau"] = list(args.tau)
    _emit(json.dumps(record) + "\n", args.out)
    return 0


def _parse_range(text: str) -> range:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"expected lo:hi, got {text!r}") from None
    if hi < lo:
        raise UsageError(f"empty range {text!r}")
    return range(lo, hi + 1)


def cmd_table(args) -> int:
    t = _spectral(args)
    span = _parse_range(args.range)
    arity = _index_arity(args.family, args.dim)
    if arity > 3:
        raise UsageError("tables support at most three index components")
    grid = [()]
    for _ in range(arity):
        grid = [g + (i,) for g in grid for i in span]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for idx in grid:
        eval_idx = square2d.to_contour(*idx) if args.family == "square" else idx
        res = evaluate(args.family, eval_idx, t, args.method, dim=args.dim, tau=args.tau)
        cols = [str(i) for i in idx] + [""] * (3 - len(idx))
        v = complex(res.value)
        nums = (t.real, t.imag, v.real, v.imag)
        writer.writerow([args.family, *cols, *(f"{x:.12g}" for x in nums), res.terms_used,
                         f"{res.tail_estimate:.12g}"])
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_validate(args) -> int:
    config = validation.SuiteConfig.load(args.config) if args.config else None
    report = validation.run_identity_suite(config, strict_paper=args.strict_paper)
    text = report.to_json() + "\n"
    if args.out:
        _emit(text, args.out)
        s = report.summary
        print(f"{'PASS' if report.passed else 'FAIL'}: {s['passed']} passed, {s['failed']} failed, "
              f"{s['experimental_failed']} non-blocking failures; report written to {args.out}")
    else:
        _emit(text, None)
    return 0 if report.passed else 1


def cmd_correlation(args) -> int:
    idx = _parse_ints(args.r)
    family = args.family
    if family == "chain1d":
        (r,) = idx
        routes = {"analytic": chain1d.correlation_1d(r),
                  "quadrature": oracle.quadrature_correlation(oracle.chain(), (r,))}
    elif family == "square":
        res = square2d.correlation_square_routes(*idx)
        routes = {"series": res["series"], "quadrature": res["quadrature"]}
    elif family == "trihex-honeycomb":
        routes = {"quadrature": trihex2d.correlation_trihex(*idx)}
    elif family == "trihex-triangular":
        routes = {"quadrature": oracle.quadrature_correlation(oracle.triangular(), idx)}
    elif family == "bcc":
        routes = {"quadrature": oracle.quadrature_correlation(oracle.bcc(args.dim), idx)}
    else:
        raise UsageError(f"no correlation defined for {family}")
    values = list(routes.values())
    record = {"family": family, "indices": list(idx), "value": values[0], "routes": routes,
              "difference": max(values) - min(values)}
    _emit(json.dumps(record) + "\n", args.out)
    return 0


def cmd_calibrate(args) -> int:
    ts = [_parse_complex(x) for x in args.ts.split(";")] if args.ts else None
    indices = [_parse_ints(x) for x in args.indices.split(";")] if args.indices else None
    report = validation.calibrate_prefactor(args.family, ts, indices)
    _emit(json.dumps(report.to_dict()) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latgreen",
                                     description="Lattice resolvents and Green's functions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, family_required=True, families=FAMILIES):
        p.add_argument("--family", required=family_required, choices=families)
        p.add_argument("--out", help="write output to this path instead of stdout")

    def spectral(p):
        p.add_argument("--t", help="native spectral parameter re[,im]")
        p.add_argument("--lambda", dest="lam", help="raw lambda re[,im] of 1/(lambda - sum cos)")
        p.add_argument("--dim", type=int, default=3, help="bcc dimension (default 3)")
        p.add_argument("--tau", type=_parse_tau_arg, help="nnn hoppings tau1,tau2")
        p.add_argument("--method", choices=METHODS, default="series")

    p = sub.add_parser("eval", help="evaluate one resolvent value")
    common(p)
    spectral(p)
    p.add_argument("--r", required=True, help="comma-separated indices")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("table", help="tabulate over an index range as CSV")
    common(p)
    spectral(p)
    p.add_argument("--range", required=True, help="lo:hi, applied to every index component")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("validate", help="run the identity suite")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--config", help="JSON file with sample grids and tolerance overrides")
    p.add_argument("--strict-paper", action="store_true",
                   help="treat the literal printed formulas as core checks")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("correlation", help="regularized correlation at the band edge")
    common(p)
    p.add_argument("--r", required=True, help="comma-separated indices")
    p.add_argument("--dim", type=int, default=3)
    p.set_defaults(func=cmd_correlation)

    p = sub.add_parser("calibrate", help="fit the Fourier-integral/H constant")
    p.add_argument("--family", required=True,
                   choices=("chain1d", "square", "trihex-honeycomb", "trihex-triangular",
                            "honeycomb-form", "triangular-form"))
    p.add_argument("--out")
    p.add_argument("--ts", help="semicolon-separated t samples, each re[,im]")
    p.add_argument("--indices", help="semicolon-separated index tuples, e.g. 0,0;1,0;1,1")
    p.set_defaults(func=cmd_calibrate)
    return parser


def _parse_tau_arg(text: str) -> tuple:
    try:
        return _parse_tau(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "family", None) == "nnn" and getattr(args, "tau", None) is None:
        parser.error("--family nnn needs --tau tau1,tau2")
    try:
        return args.func(args)
    except (UsageError, ConfigError, LatticeGreenError, ConvergenceError) as exc:
        print(f"latgreen: error: {exc}", file=sys.stderr)
        return 2
