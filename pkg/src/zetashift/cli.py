"""Command-line entry point: ``zetashift <command> ...``.

Every command prints JSON or CSV on stdout.  Exit codes: 0 success,
1 a verification failed, 2 usage error, 3 numeric error (pole, tolerance
not reached, cap exceeded).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .bernoulli import default_cache
from .characters import character_group, dirichlet_L_with_error
from .errors import DomainError, ZetaShiftError
from .hurwitz import em_hurwitz, hurwitz_zeta
from .numerics import is_nonpositive_integer, real_base_pow

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


@dataclass
class ExitReport:
    exit_code: int
    artifacts_written: list = field(default_factory=list)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# output helpers


def fmt_float(x: float) -> str:
    """17 significant digits; non-finite values become JSON ``null``."""
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return "%.17g" % x


def dumps(obj, indent: int | None = 2, _level: int = 0) -> str:
    """JSON with every float written at 17 significant digits.

    Complex numbers become ``{"re": ..., "im": ...}``.
    """
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = ", " if indent is None else ","
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, complex):
        return dumps({"re": obj.real, "im": obj.imag}, indent, _level)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Fraction):
        return json.dumps(f"{obj.numerator}/{obj.denominator}")
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[" + sep.join(items) + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def parse_complex(text: str) -> complex:
    """``"RE,IM"`` or a bare real ``"RE"``."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected RE,IM but got {text!r}")


def parse_resolution(text: str) -> tuple:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH but got {text!r}") from None


def parse_region(text: str) -> tuple:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        vals = ()
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("region is RE_MIN,RE_MAX,IM_MIN,IM_MAX")
    return vals


def _complex_param(v):
    if isinstance(v, str):
        return parse_complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    return v


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands


def _cmd_eval(args, out, written):
    s = args.s
    if args.target == "lfunc":
        group = character_group(args.modulus)
        if not 0 <= args.char_index < len(group):
            raise UsageError(f"char-index must lie in [0, {len(group) - 1}] for modulus {args.modulus}")
        chi = group[args.char_index]
        method = args.method or "hurwitz"
        value, err = dirichlet_L_with_error(s, chi, method, args.tol)
        if err > args.tol:
            raise _numeric(f"estimated error {err:.3g} exceeds tol {args.tol:.3g}")
        payload = {"function": "L", "s": s, "modulus": args.modulus, "char_index": args.char_index,
                   "method": method, "value": value, "est_error": err}
    else:
        a = 1.0 if args.target == "zeta" else args.a
        method = args.method or "auto"
        if method == "auto":
            res = hurwitz_zeta(s, a, args.tol)
        elif method == "em":
            if args.head is None or args.order is None:
                raise UsageError("--method em needs --head and --order")
            res = em_hurwitz(s, a, args.head, args.order)
        else:
            raise UsageError(f"unknown method {method!r} (auto or em)")
        payload = {"function": "hurwitz_zeta", "s": s, "a": a, "method": method,
                   "value": res.value, "est_error": res.est_error,
                   "head_terms": res.params_used.head_terms, "order": res.params_used.order}
    out.write(dumps(payload) + "\n")
    return EXIT_OK


def _cmd_coeff(args, out, written):
    from .operators import p_sequence, q_sequence

    n = args.n
    if n < 0:
        raise UsageError("--n must be non-negative")
    if args.kind == "bernoulli":
        table = default_cache()
        if n >= len(table):
            table = type(table)(n + 1)
        rows = [(k, table.number(k).numerator, table.number(k).denominator) for k in range(n + 1)]
        out.write(_csv_text(["n", "numerator", "denominator"], rows))
        return EXIT_OK
    if args.kind == "p":
        seq = p_sequence(args.s, n + 1)
    else:
        seq = q_sequence(args.s, n + 1, args.method or "closed")
    rows = [(k, fmt_float(c.real), fmt_float(c.imag)) for k, c in enumerate(seq)]
    out.write(_csv_text(["n", "re", "im"], rows))
    return EXIT_OK


def _load_points(text: str) -> list:
    src = Path(text)
    raw = src.read_text() if src.is_file() else text
    try:
        pts = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--points is not valid JSON: {exc}") from None
    if isinstance(pts, dict):
        pts = [pts]
    if not isinstance(pts, list) or not all(isinstance(p, dict) for p in pts):
        raise UsageError("--points must be a JSON object or list of objects")
    return [{k: _complex_param(v) if k == "s" else v for k, v in p.items()} for p in pts]


def _cmd_verify(args, out, written):
    from .operators import default_grid, verify_identity

    if args.grid == "custom":
        if not args.points:
            raise UsageError("--grid custom needs --points")
        grid = _load_points(args.points)
    else:
        grid = default_grid(args.identity)
    rows = []
    worst = 0.0
    for params in grid:
        try:
            rep = verify_identity(args.identity, **params)
        except TypeError as exc:
            raise UsageError(str(exc)) from None
        ok = rep.residual <= args.tol
        worst = max(worst, rep.residual)
        rows.append(dict(rep.to_dict(), passed=ok))
    passed = all(r["passed"] for r in rows)
    out.write(dumps({"identity": args.identity.replace("-", "_"), "tol": args.tol, "passed": passed,
                     "max_residual": worst, "rows": rows}) + "\n")
    if args.png:
        from .report import residuals_png

        written.append(residuals_png([_Row(r["residual"], r["identity"]) for r in rows], args.png, args.tol))
    return EXIT_OK if passed else EXIT_VERIFY


@dataclass
class _Row:
    residual: float
    identity: str


def _cmd_diagnose(args, out, written):
    from .operators import g_inverse_partial_sums, hurid_family, p_series_diagnostics, taylor_shift_partial

    s = args.s
    extra = {}
    if args.series == "p-series":
        diag = p_series_diagnostics(s, 100 if args.terms is None else args.terms)
    elif args.series == "taylor-shift":
        diag = taylor_shift_partial(s, args.a, args.n, args.terms)
    else:
        diag = g_inverse_partial_sums(hurid_family(args.a), s, 60 if args.terms is None else args.terms)
        if is_nonpositive_integer(s):
            M = -int(round(s.real))
            extra["reference_at_neg_int"] = (hurwitz_zeta(s, args.a).value - real_base_pow(args.a, M))
    doc = diag.to_json()
    doc["metadata"].update(extra)
    if args.format == "csv":
        out.write(diag.to_csv())
    else:
        out.write(dumps(doc) + "\n")
    if args.out_prefix:
        from .report import diagnostics_png

        prefix = Path(args.out_prefix)
        csv_path = prefix.with_name(prefix.name + ".csv")
        json_path = prefix.with_name(prefix.name + ".json")
        png_path = prefix.with_name(prefix.name + ".png")
        with open(csv_path, "w", newline="") as fh:
            diag.to_csv(fh)
        written.append(str(csv_path))
        json_path.write_text(dumps(doc) + "\n")
        written.append(str(json_path))
        written.append(diagnostics_png(diag, png_path, f"{args.series} at s={s:g}: {diag.verdict.label}"))
    return EXIT_OK


def _cmd_characters(args, out, written):
    if args.modulus < 1:
        raise UsageError("--modulus must be positive")
    group = character_group(args.modulus)
    rows = []
    for chi in group:
        for r in range(args.modulus):
            v = chi(r)
            rows.append((chi.index, r, fmt_float(v.real), fmt_float(v.imag)))
    out.write(_csv_text(["index", "r", "re", "im"], rows))
    return EXIT_OK


def _cmd_plot(args, out, written):
    from .plots import FUNCTIONS, PlotSpec, figure1_spec, figure2_spec, render, write_ppm

    res = args.resolution or (400, 400)
    if args.figure == "figure1":
        spec = figure1_spec(None if args.reference else args.n, res)
    elif args.figure == "figure2":
        if not args.n:
            raise UsageError("figure2 needs --n")
        spec = figure2_spec(args.n, res)
    else:
        function = args.function or ("reference_pole" if args.reference else "truncated_G")
        if function not in FUNCTIONS:
            raise UsageError(f"--function must be one of {FUNCTIONS}")
        region = args.region or (-20.0, 20.0, -20.0, 20.0)
        circles = tuple((1.0, r) for r in args.circle or ())
        spec = PlotSpec(function, args.n or 0, region, res, circles, args.a)
    if args.region and args.figure != "custom":
        spec = PlotSpec(spec.function, spec.N, args.region, spec.resolution, spec.overlay_circles, spec.a)
    stats = {}
    buf = render(spec, args.workers, stats)
    written.append(write_ppm(buf, args.out))
    if args.png:
        from .report import figure_png

        written.append(figure_png(spec, buf, args.png))
    out.write(dumps({"function": spec.function, "N": spec.N, "a": spec.a, "region": list(spec.region),
                     "resolution": list(spec.resolution), "artifacts": list(written), **stats}) + "\n")
    return EXIT_OK


def _numeric(msg):
    return ZetaShiftError(msg)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zetashift", description="Hurwitz zeta, shift operators and their diagnostics.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    e = sub.add_parser("eval", help="evaluate zeta, Hurwitz zeta or a Dirichlet L-function")
    e.add_argument("target", choices=("zeta", "hurwitz", "lfunc"))
    e.add_argument("--s", type=parse_complex, required=True, help="RE,IM")
    e.add_argument("--a", type=float, default=1.0)
    e.add_argument("--modulus", type=int, default=4)
    e.add_argument("--char-index", type=int, default=1)
    e.add_argument("--method", default=None, help="auto|em for zeta/hurwitz; hurwitz|euler_maclaurin for lfunc")
    e.add_argument("--head", type=int, default=None, help="head terms for --method em")
    e.add_argument("--order", type=int, default=None, help="Euler-Maclaurin order for --method em")
    e.add_argument("--tol", type=float, default=1e-10)
    e.set_defaults(func=_cmd_eval)

    c = sub.add_parser("coeff", help="operator coefficients or Bernoulli numbers as CSV")
    c.add_argument("kind", choices=("p", "q", "bernoulli"))
    c.add_argument("--n", type=int, default=10, help="largest index")
    c.add_argument("--s", type=parse_complex, default=complex(2.0))
    c.add_argument("--method", choices=("recursive", "closed"), default=None)
    c.set_defaults(func=_cmd_coeff)

    v = sub.add_parser("verify", help="identity residuals as a JSON table")
    v.add_argument("identity")
    v.add_argument("--grid", choices=("default", "custom"), default="default")
    v.add_argument("--points", default=None, help="JSON list of parameter objects (or a file holding one)")
    v.add_argument("--tol", type=float, default=1e-8)
    v.add_argument("--png", default=None)
    v.set_defaults(func=_cmd_verify)

    d = sub.add_parser("diagnose", help="partial-sum trace with a convergence verdict")
    d.add_argument("series", choices=("p-series", "taylor-shift", "g-inverse"))
    d.add_argument("--s", type=parse_complex, required=True)
    d.add_argument("--a", type=float, default=1.0)
    d.add_argument("--n", type=int, default=1, help="shift length for taylor-shift")
    d.add_argument("--terms", type=int, default=None)
    d.add_argument("--format", choices=("json", "csv"), default="json")
    d.add_argument("--out-prefix", default=None, help="write PREFIX.csv, PREFIX.json and PREFIX.png")
    d.set_defaults(func=_cmd_diagnose)

    ch = sub.add_parser("characters", help="Dirichlet character tables")
    ch.add_argument("action", choices=("list",))
    ch.add_argument("--modulus", type=int, required=True)
    ch.set_defaults(func=_cmd_characters)

    pl = sub.add_parser("plot", help="domain-coloured truncation images")
    pl.add_argument("figure", choices=("figure1", "figure2", "custom"))
    pl.add_argument("--n", type=int, default=None)
    pl.add_argument("--reference", action="store_true", help="plot 1/(s-1) instead of G_N")
    pl.add_argument("--function", default=None)
    pl.add_argument("--a", type=float, default=1.0)
    pl.add_argument("--region", type=parse_region, default=None)
    pl.add_argument("--resolution", type=parse_resolution, default=None)
    pl.add_argument("--circle", type=float, action="append", help="overlay |s-1| = R (repeatable)")
    pl.add_argument("--workers", type=int, default=None)
    pl.add_argument("--out", required=True)
    pl.add_argument("--png", default=None)
    pl.set_defaults(func=_cmd_plot)
    return p


_NUMERIC_OPTS = ("--s", "--region", "--a")


def _glue_negative_values(argv):
    # "--s -3,0" would otherwise read "-3,0" as an option
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in _NUMERIC_OPTS and nxt and nxt[0] == "-" and nxt[1:2] and (nxt[1].isdigit() or nxt[1] == "."):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv: list[str], stdout=None, stderr=None) -> ExitReport:
    out = sys.stdout if stdout is None else stdout
    err = sys.stderr if stderr is None else stderr
    written: list = []
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative_values(list(argv)))
    except UsageError as exc:
        err.write(f"zetashift: usage error: {exc}\n")
        return ExitReport(EXIT_USAGE, written)
    except SystemExit as exc:  # --help
        return ExitReport(EXIT_OK if not exc.code else EXIT_USAGE, written)
    try:
        code = args.func(args, out, written)
    except (UsageError, DomainError) as exc:
        err.write(f"zetashift: usage error: {exc}\n")
        return ExitReport(EXIT_USAGE, written)
    except ZetaShiftError as exc:
        err.write(f"zetashift: numeric error: {exc}\n")
        return ExitReport(EXIT_NUMERIC, written)
    except (OSError, OverflowError, ZeroDivisionError) as exc:
        err.write(f"zetashift: {type(exc).__name__}: {exc}\n")
        return ExitReport(EXIT_NUMERIC, written)
    return ExitReport(code, written)


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv).exit_code


if __name__ == "__main__":
    sys.exit(main())
