"""Command-line interface.

    orthoentropy entropy gegenbauer --lambda L --n N [--eps E | --trunc K] [--json | --csv]
    orthoentropy entropy custom --coeffs FILE --n N [--eps E | --trunc K]
    orthoentropy moments (--lambda L | --coeffs FILE) --n N --trunc K
    orthoentropy spherical --l L [--m M | --profile]
    orthoentropy bench --lambdas 2,3.5 --ns 10,25 --methods series,quad,zeropot --reps R [--csv out.csv]

``gegenbauer`` and ``custom`` are also accepted at top level.  Exit status is
0 on success, 2 on argument or input-file errors and 1 on numerical failures.
Significant digits default to 17 and can be set with OPQ_PRECISION.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Callable, Optional, Sequence

from . import bench as bench_mod
from . import gegenbauer as gg
from .entropy import EntropyResult, TruncationError, entropy_from_series
from .moments import PreconditionError, moments
from .oracle import EigensolverError
from .recurrence import CoefficientError, CoefficientFileError, RecurrenceCoefficients
from .spherical import DEFAULT_EPSILON as SPHERICAL_EPSILON
from .spherical import QuantumNumbers, spherical_entropy_profile

DEFAULT_PRECISION = 17
LN2 = math.log(2.0)


class UsageError(Exception):
    """Invalid arguments or input detected after parsing; maps to exit status 2."""


class NumericalFailure(Exception):
    """A computation failed; the message names the module and operation."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage().strip()}\n{self.prog}: error: {message}")


# --- output -----------------------------------------------------------------

def precision_from_env(environ=None) -> int:
    environ = os.environ if environ is None else environ
    raw = environ.get("OPQ_PRECISION")
    if raw is None or raw == "":
        return DEFAULT_PRECISION
    try:
        digits = int(raw)
    except ValueError:
        raise UsageError(f"OPQ_PRECISION must be an integer, got {raw!r}") from None
    if not 1 <= digits <= 17:
        raise UsageError(f"OPQ_PRECISION must be between 1 and 17, got {digits}")
    return digits


def _num(v: float, digits: int) -> str:
    return format(float(v), f".{digits}g")


def to_json(obj, digits: int) -> str:
    """Strict JSON with floats at ``digits`` significant digits; non-finite floats become null."""
    if obj is None or isinstance(obj, bool):
        return "null" if obj is None else ("true" if obj else "false")
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _num(obj, digits) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{to_json(str(k), digits)}: {to_json(v, digits)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v, digits) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_csv(header: Sequence[str], rows, digits: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else _num(v, digits) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _entropy_record(res: EntropyResult, bits: bool, timing: bool) -> dict:
    d = res.to_dict()
    if bits:
        d["value"] = d["value"] / LN2
        if d["bound"] is not None:
            d["bound"] = d["bound"] / LN2
    if not timing:
        d["seconds"] = None
    return d


def _emit_entropy(res: EntropyResult, args, digits: int, out) -> None:
    d = _entropy_record(res, args.bits, not args.no_timing)
    if args.format == "csv":
        out.write(to_csv(list(d), [list(d.values())], digits))
    else:
        out.write(to_json(d, digits) + "\n")


# --- argument helpers ---------------------------------------------------------

def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text!r}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {v}")
    return v


def _positive_int(text: str) -> int:
    v = _nonneg_int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _add_format(p: argparse.ArgumentParser, default: str = "json") -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="format", action="store_const", const="json", help="JSON output")
    g.add_argument("--csv", dest="format", action="store_const", const="csv", help="CSV output with header")
    p.set_defaults(format=default)


def _add_truncation(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--eps", type=_positive_float, help="target absolute truncation error")
    g.add_argument("--trunc", type=_positive_int, metavar="K", help="explicit truncation index")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bits", action="store_true", help="report entropies in bits instead of nats")
    p.add_argument("--no-timing", action="store_true",
                   help="print null for timing fields so output is reproducible")


def _load_coeffs(path: str) -> RecurrenceCoefficients:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read coefficient file {path!r}: {exc.strerror}") from None
    try:
        return RecurrenceCoefficients.from_text(text)
    except CoefficientFileError as exc:
        raise UsageError(f"{path}: malformed coefficient file at {exc}") from None
    except CoefficientError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _guard(label: str, fn: Callable):
    """Run ``fn``, mapping library exceptions to CLI error classes."""
    try:
        return fn()
    except (CoefficientError, PreconditionError) as exc:
        raise UsageError(f"{label}: {exc}") from None
    except (TruncationError, EigensolverError, FloatingPointError, OverflowError, ArithmeticError) as exc:
        raise NumericalFailure(f"{label}: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"{label}: {exc}") from None


# --- subcommands ----------------------------------------------------------------

def _cmd_gegenbauer(args, digits, out) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    kw = {"epsilon": args.eps} if args.trunc is None else {"N_override": args.trunc}
    res = _guard("gegenbauer.entropy_gegenbauer",
                 lambda: gg.entropy_gegenbauer(gg.GegenbauerParams(args.lam), args.n, **kw))
    _emit_entropy(res, args, digits, out)
    return 0


def _cmd_custom(args, digits, out) -> int:
    coeffs = _load_coeffs(args.coeffs)
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    if args.trunc is None and args.eps is None:
        raise UsageError("custom needs --trunc K or --eps E")
    res = _guard("entropy.entropy_from_series",
                 lambda: entropy_from_series(coeffs, args.n, N=args.trunc, epsilon=args.eps))
    _emit_entropy(res, args, digits, out)
    return 0


def _cmd_moments(args, digits, out) -> int:
    if args.coeffs is not None:
        coeffs = _load_coeffs(args.coeffs)
    else:
        coeffs = _guard("gegenbauer.gegenbauer_coefficients", lambda: gg.gegenbauer_coefficients(args.lam))
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    even = False if args.all_indices else None
    c, m = _guard("moments.moments", lambda: moments(coeffs, args.n, args.trunc, even=even))
    rows = [(k, c.at(k), m.at(k)) for k in range(0, c.N + 1, c.step)]
    if args.format == "csv":
        out.write(to_csv(("k", "c", "m"), [(k, float(a), float(b)) for k, a, b in rows], digits))
    else:
        out.write(to_json([{"k": k, "c": a, "m": b} for k, a, b in rows], digits) + "\n")
    return 0


def _cmd_spherical(args, digits, out) -> int:
    if args.m is not None and args.profile:
        raise UsageError("--m and --profile are mutually exclusive")
    if args.profile:
        m_range = range(-args.l, args.l + 1)
    else:
        m_range = [0 if args.m is None else args.m]
    for m in m_range:
        _guard("spherical.QuantumNumbers", lambda: QuantumNumbers(args.l, m))
    table = _guard("spherical.spherical_entropy",
                   lambda: spherical_entropy_profile(args.l, m_range, epsilon=args.eps, workers=args.workers))
    scale = 1.0 / LN2 if args.bits else 1.0
    rows = [(int(m), float(S) * scale) for m, S in table]
    if args.format == "json":
        out.write(to_json([{"l": args.l, "m": m, "S": S} for m, S in rows], digits) + "\n")
    else:
        out.write(to_csv(("m", "S"), rows, digits))
    return 0


def _cmd_bench(args, digits, out) -> int:
    if args.interpolate:
        cells = _guard("bench.bench_interpolation",
                       lambda: bench_mod.bench_interpolation(args.lambdas, args.ns[0], reps=args.reps))
        header = ("lambda", "n", "interpolated", "series", "abs_error", "interp_seconds", "series_seconds")
        rows = [(c.lam, c.n, c.interpolated, c.series, c.abs_error, c.interp_seconds, c.series_seconds)
                for c in cells]
        text = to_csv(header, rows, digits)
    else:
        try:
            methods = [bench_mod.canonical_method(m) for m in args.methods.split(",") if m]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        cfg = bench_mod.BenchConfig(reps=args.reps, quad_factor=args.quad_factor, workers=args.workers)
        cells = _guard("bench.bench_compare",
                       lambda: bench_mod.bench_compare(args.lambdas, args.ns, methods, cfg))
        text = bench_mod.format_csv(cells, digits)
    if args.csv_path:
        with open(args.csv_path, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


# --- parser -----------------------------------------------------------------------

def _gegenbauer_parser(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="lam", type=float, required=True, help="Gegenbauer parameter > -1/2")
    p.add_argument("--n", type=_nonneg_int, required=True, help="polynomial degree")
    _add_truncation(p)
    _add_format(p)
    _add_common(p)
    p.set_defaults(func=_cmd_gegenbauer)


def _custom_parser(p: argparse.ArgumentParser) -> None:
    p.add_argument("--coeffs", required=True, help='JSON file {"a": [a_1, ...], "b": [b_0, ...]}')
    p.add_argument("--n", type=_nonneg_int, required=True, help="polynomial degree")
    _add_truncation(p)
    _add_format(p)
    _add_common(p)
    p.set_defaults(func=_cmd_custom)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orthoentropy", description="Entropy of orthonormal polynomials from recurrence coefficients.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    ent = sub.add_parser("entropy", help="entropy of p_n (gegenbauer or custom coefficients)")
    ent_sub = ent.add_subparsers(dest="family", metavar="FAMILY", parser_class=_Parser)
    ent_sub.required = True
    _gegenbauer_parser(ent_sub.add_parser("gegenbauer", help="Gegenbauer polynomials"))
    _custom_parser(ent_sub.add_parser("custom", help="coefficients from a JSON file"))

    _gegenbauer_parser(sub.add_parser("gegenbauer", help="same as 'entropy gegenbauer'"))
    _custom_parser(sub.add_parser("custom", help="same as 'entropy custom'"))

    mom = sub.add_parser("moments", help="dump Chebyshev moments c_k and m_k")
    src = mom.add_mutually_exclusive_group(required=True)
    src.add_argument("--lambda", dest="lam", type=float, help="Gegenbauer parameter")
    src.add_argument("--coeffs", help="coefficient JSON file")
    mom.add_argument("--n", type=_nonneg_int, required=True)
    mom.add_argument("--trunc", type=_positive_int, required=True, metavar="K",
                     help="highest index (even-term count for symmetric measures)")
    mom.add_argument("--all-indices", action="store_true", help="use the general path even for symmetric measures")
    _add_format(mom)
    mom.set_defaults(func=_cmd_moments)

    sph = sub.add_parser("spherical", help="entropy of spherical harmonics Y_lm")
    sph.add_argument("--l", type=_nonneg_int, required=True)
    sph.add_argument("--m", type=int)
    sph.add_argument("--profile", action="store_true", help="all m in -l..l")
    sph.add_argument("--eps", type=_positive_float, default=SPHERICAL_EPSILON)
    sph.add_argument("--workers", type=_positive_int, default=1)
    sph.add_argument("--bits", action="store_true")
    _add_format(sph, default="csv")
    sph.set_defaults(func=_cmd_spherical)

    b = sub.add_parser("bench", help="series vs quadrature benchmark (CSV)")
    b.add_argument("--lambdas", type=_float_list, required=True)
    b.add_argument("--ns", type=_int_list, required=True)
    b.add_argument("--methods", default=",".join(bench_mod.METHODS))
    b.add_argument("--reps", type=_positive_int, default=10)
    b.add_argument("--quad-factor", type=_positive_int, default=50, help="quadrature order K = factor * n")
    b.add_argument("--workers", type=_positive_int, default=1, help="parallel cells; disables timing")
    b.add_argument("--interpolate", action="store_true", help="interpolation-across-lambda experiment")
    b.add_argument("--csv", dest="csv_path", metavar="PATH", help="write CSV here instead of stdout")
    b.set_defaults(func=_cmd_bench)
    return parser


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        digits = precision_from_env()
        args = build_parser().parse_args(argv)
        return args.func(args, digits, stdout)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return 2
    except NumericalFailure as exc:
        stderr.write(f"numerical failure in {exc}\n")
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
