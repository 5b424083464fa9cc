"""Command-line interface.

Exit status: 0 on success, 2 for invalid input, 3 when a computation could not
reach its precision target or a scan contains undecided points.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import asymptotics, oracle
from .cache import ENV_VAR, OracleCache
from .coefficients import FAMILIES, SuitableFn, coefficient
from .errors import InputError, PrecisionExhausted
from .jensen import UNDECIDED
from .realeval import EvalContext, common_digits, significand, to_sci
from .scan import GammaProvider, hyper_scan, turan_scan

EXIT_OK, EXIT_INPUT, EXIT_PRECISION = 0, 2, 3
TABLE_ORDERS = (1, 3, 5, 7)
TABLE_N = 1000


# ---------------------------------------------------------------------------
# output


def emit(rows: list[dict], columns: list[str], fmt: str, out) -> None:
    if fmt == "json":
        json.dump([{c: r.get(c) for c in columns} for r in rows], out, indent=1)
        out.write("\n")
    elif fmt == "csv":
        w = csv.DictWriter(out, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: "" if r.get(c) is None else r.get(c) for c in columns})
    else:
        cells = [[("" if r.get(c) is None else str(r.get(c))) for c in columns] for r in rows]
        widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
        out.write("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
        for row in cells:
            out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


def mark_digits(value: str, reference: str) -> tuple[int, str]:
    """Matching-prefix length and the value with non-matching digits bracketed."""
    k = common_digits(value, reference)
    digits, exp = significand(value)
    neg = digits.startswith("-")
    digits = digits.lstrip("-")
    black, gray = digits[:k], digits[k:]
    body = black + (f"[{gray}]" if gray else "")
    # re-insert the decimal point after the first digit (brackets skipped)
    if len(black) >= 1:
        body = body[0] + "." + body[1:]
    else:
        body = "[" + digits[0] + "." + digits[1:] + "]"
    return k, ("-" if neg else "") + body + f"e{exp:+d}"


# ---------------------------------------------------------------------------
# commands


def _ctx(args, n: int) -> EvalContext:
    return EvalContext.for_index(n, args.digits)


def _cache(args) -> OracleCache:
    return OracleCache(args.cache_dir)


def _table(args, expand, oracle_fn, label: str) -> int:
    ctx = _ctx(args, 2 * TABLE_N)
    ref = oracle_fn(TABLE_N, ctx, _cache(args))
    ref_text = ref.to_sci(args.digits)
    rows = []
    for K in TABLE_ORDERS:
        res = expand(TABLE_N, K, ctx)
        text = to_sci(res.value, args.digits)
        k, marked = mark_digits(text, ref_text)
        rows.append({"K": K, "value": text, "matching_digits": k, "marked": marked})
    rows.append({"K": "oracle", "value": ref_text, "matching_digits": len(significand(ref_text)[0].lstrip("-")),
                 "marked": ref_text, "error_bound": to_sci(ref.error, 3)})
    if args.format == "table":
        args.out.write(f"{label}; digits in [brackets] differ from the oracle row\n")
    emit(rows, ["K", "value", "matching_digits", "marked", "error_bound"], args.format, args.out)
    return EXIT_OK


def cmd_table1(args) -> int:
    return _table(args, asymptotics.expand_gamma, oracle.gamma_coeff, "gamma(1000)")


def cmd_table2(args) -> int:
    return _table(args, asymptotics.expand_b2n, oracle.b2n, "b_2000")


def cmd_coeff(args) -> int:
    f = SuitableFn.parse(args.f) if args.f else None
    value = coefficient(args.family, args.index, f)
    if isinstance(value, Fraction):
        canonical = pretty = str(value)
    else:
        canonical, pretty = value.canonical(), value.pretty()
    if args.format == "table":
        args.out.write(pretty + "\n")
    else:
        emit([{"family": args.family, "index": args.index, "f": args.f, "canonical": canonical, "pretty": pretty}],
             ["family", "index", "f", "canonical", "pretty"], args.format, args.out)
    return EXIT_OK


def _alpha(text: str, ctx: EvalContext):
    """Parse alpha: a rational 'p/q', a decimal, or 'pi' with optional rational factor ('pi/2', '2pi')."""
    t = text.strip().replace("*", "")
    if "pi" in t:
        num, _, den = t.partition("/")
        coef = num.replace("pi", "") or "1"
        return ctx.convert(Fraction(coef)) * ctx.mp.pi / (int(den) if den else 1)
    return ctx.convert(Fraction(t))


def cmd_compute(args) -> int:
    n = args.n
    ctx = _ctx(args, 2 * n)
    flags = []
    if args.method == "oracle":
        if args.kind == "I":
            res = oracle.laplace_integral(n, _alpha(args.alpha, ctx), _weight(args), ctx)
        else:
            fn = {"gamma": oracle.gamma_coeff, "xi": oracle.xi_deriv, "b2n": oracle.b2n}[args.kind]
            res = fn(n, ctx, _cache(args))
        value, error = res.to_sci(args.digits), to_sci(res.error, 3)
    else:
        if args.kind == "I":
            res = asymptotics.expand_I_alpha_f(n, _alpha(args.alpha, ctx), _weight(args), args.order, ctx)
        else:
            res = asymptotics.TARGETS[args.kind](n, args.order, ctx)
        value, error, flags = to_sci(res.value, args.digits), None, res.flags
    emit([{"kind": args.kind, "n": n, "method": args.method, "value": value, "error_bound": error, "flags": ";".join(flags)}],
         ["kind", "n", "method", "value", "error_bound", "flags"], args.format, args.out)
    return EXIT_OK


def _weight(args):
    return SuitableFn.parse(args.f) if getattr(args, "f", None) else None


def cmd_expand(args) -> int:
    n = args.n
    ctx = _ctx(args, 2 * n)
    if args.target in ("I", "I-alpha", "I-alpha-f"):
        res = asymptotics.expand_I_alpha_f(n, _alpha(args.alpha, ctx), _weight(args), args.order, ctx)
    else:
        res = asymptotics.TARGETS[args.target](n, args.order, ctx)
    d = args.digits
    rows = [{"term": "value", "value": to_sci(res.value, d)}, {"term": "main", "value": to_sci(res.main_term, d)},
            {"term": "w_or_u", "value": to_sci(res.w_or_u, d)}]
    rows += [{"term": f"correction_{k}", "value": to_sci(c, d) if c else "0"} for k, c in enumerate(res.corrections, 1)]
    if args.compare_oracle:
        if res.target.startswith("I"):
            ref = oracle.laplace_integral(n, _alpha(args.alpha, ctx), _weight(args), ctx)
        else:
            fn = {"gamma": oracle.gamma_coeff, "xi": oracle.xi_deriv, "b2n": oracle.b2n}[res.target]
            ref = fn(n, ctx, _cache(args))
        rows.append({"term": "oracle", "value": ref.to_sci(d)})
        rows.append({"term": "relative_error", "value": to_sci(abs(res.value / ref.value - 1), 3)})
    for flag in res.flags:
        rows.append({"term": "flag", "value": flag})
    emit(rows, ["term", "value"], args.format, args.out)
    return EXIT_OK


def _provider(args) -> GammaProvider:
    return GammaProvider(_cache(args), args.threads)


def cmd_hyper_scan(args) -> int:
    alpha = Fraction(args.alpha) if args.alpha is not None else None
    if args.family == "Q" and alpha is None:
        alpha = Fraction(0)
    rows = hyper_scan(args.family, args.d_max, args.n_max, _provider(args), args.digits,
                      args.max_digits, alpha, d_min=args.d_min, n_min=args.n_min)
    out = [{"d": r.d, "n": r.n, "alpha": r.alpha, "status": r.status, "root-count": r.root_count,
            "precision-used": r.precision_used} for r in rows]
    emit(out, ["d", "n", "alpha", "status", "root-count", "precision-used"], args.format, args.out)
    return EXIT_PRECISION if any(r.status == UNDECIDED for r in rows) else EXIT_OK


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise InputError("--n-range expects A:B")
    a, b = int(lo), int(hi)
    if a < 0 or b < a:
        raise InputError("--n-range needs 0 <= A <= B")
    return a, b


def cmd_turan_scan(args) -> int:
    lo, hi = _range(args.n_range)
    rows = turan_scan(args.d, lo, hi, _provider(args), args.digits)
    out = [{"d": r.d, "n": r.n, "S": r.s, "flag": int(r.flag), "P-status": r.p_status} for r in rows]
    emit(out, ["d", "n", "S", "flag", "P-status"], args.format, args.out)
    return EXIT_OK


def cmd_cache(args) -> int:
    cache = _cache(args)
    if args.action == "clear":
        removed = cache.clear(args.kind)
        emit([{"directory": str(cache.directory), "files_removed": removed}], ["directory", "files_removed"], args.format, args.out)
    else:
        stats = cache.stats()
        rows = [{"kind": k, **v} for k, v in stats.items()]
        emit(rows, ["kind", "entries", "n_min", "n_max", "max_digits", "bytes"], args.format, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _digits(text: str) -> int:
    d = int(text)
    if d < 6:
        raise argparse.ArgumentTypeError("--digits must be at least 6")
    return d


def _pos_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=_digits, default=argparse.SUPPRESS, help="target significant digits (>= 6, default 20)")
    common.add_argument("--cache-dir", default=argparse.SUPPRESS, help=f"oracle cache directory (default ${ENV_VAR} or ~/.cache/xijensen)")
    common.add_argument("--threads", type=_pos_int, default=argparse.SUPPRESS, help="worker processes for scans")
    common.add_argument("--format", choices=("table", "csv", "json"), default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="xijensen", parents=[common], description="Asymptotic expansions and Jensen polynomials for xi^(2n)(1/2).")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("table1", parents=[common], help="expansions of gamma(1000) against the oracle").set_defaults(func=cmd_table1)
    sub.add_parser("table2", parents=[common], help="expansions of b_2000 against the oracle").set_defaults(func=cmd_table2)

    c = sub.add_parser("coeff", parents=[common], help="print an exact expansion coefficient")
    c.add_argument("family", choices=FAMILIES)
    c.add_argument("index", type=_nonneg_int)
    c.add_argument("--f", help="weight for the af family: power:BETA or gauss:BETA")
    c.set_defaults(func=cmd_coeff)

    k = sub.add_parser("compute", parents=[common], help="value with error bound (oracle) or expansion value")
    k.add_argument("kind", choices=("gamma", "xi", "b2n", "I"))
    k.add_argument("n", type=_nonneg_int)
    k.add_argument("--method", choices=("oracle", "expand"), default="oracle")
    k.add_argument("--order", type=_pos_int, default=7)
    k.add_argument("--alpha", default="1")
    k.add_argument("--f")
    k.set_defaults(func=cmd_compute)

    e = sub.add_parser("expand", parents=[common], help="expansion terms, optionally against the oracle")
    e.add_argument("--target", choices=("gamma", "xi", "b2n", "I"), required=True)
    e.add_argument("--n", type=_nonneg_int, required=True)
    e.add_argument("--order", type=_pos_int, default=7)
    e.add_argument("--alpha", default="1")
    e.add_argument("--f")
    e.add_argument("--compare-oracle", action="store_true")
    e.set_defaults(func=cmd_expand)

    h = sub.add_parser("hyper-scan", parents=[common], help="hyperbolicity verdicts over a (d, n) grid")
    h.add_argument("--family", choices=("J", "P", "Q"), required=True)
    h.add_argument("--d-max", type=_pos_int, required=True)
    h.add_argument("--n-max", type=_nonneg_int, required=True)
    h.add_argument("--d-min", type=_pos_int, default=1)
    h.add_argument("--n-min", type=_nonneg_int, default=0)
    h.add_argument("--alpha", help="rational alpha >= -2 for family Q")
    h.add_argument("--max-digits", type=_digits, help="precision ceiling for undecided points (default 8x --digits)")
    h.set_defaults(func=cmd_hyper_scan)

    t = sub.add_parser("turan-scan", parents=[common], help="Turan sums S(d, n) and their flags")
    t.add_argument("--d", type=_pos_int, required=True)
    t.add_argument("--n-range", required=True, help="A:B inclusive")
    t.set_defaults(func=cmd_turan_scan)

    ca = sub.add_parser("cache", parents=[common], help="inspect or clear the oracle cache")
    ca.add_argument("action", choices=("stats", "clear"))
    ca.add_argument("--kind", help="restrict clear to one kind (xi, gamma, b2n)")
    ca.set_defaults(func=cmd_cache)
    return p


DEFAULTS = {"digits": 20, "cache_dir": None, "threads": 1, "format": "table"}


def main(argv=None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors
        return int(exc.code or 0)
    for key, val in DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, val)
    args.out = out if out is not None else sys.stdout
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except ValueError as exc:  # malformed numbers in options
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def run(argv) -> tuple[int, str]:
    """Run the CLI capturing stdout; convenient in tests."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
