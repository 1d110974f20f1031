"""Command-line front end.

Every subcommand emits a report made of rows. ``--format`` selects text,
JSON or CSV. In JSON and CSV every number is a decimal string, and the JSON
report also carries the parameters, the precision in bits and the toolkit
version. Exit codes are 0 for success, 2 for bad parameters, 3 for a
precision failure and 4 when the work budget is exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

import mpmath

from . import __version__
from .asymptotics import (
    estimate,
    log_stirling_near_diagonal,
    louchard_block,
    regime_of,
    stirling_erdos_szekeres,
    stirling_louchard,
    threshold_c_N,
)
from .constants import (
    alt_binomial_log_sum,
    conjecture_scan,
    constants,
    flajolet_expansion,
    working_bits,
)
from .errors import DomainError, PrecisionError, WorkBudgetExceeded
from .moments import DEFAULT_WORK_BUDGET, exact_mean, exact_second_moment, pair_closed_form_mean, to_mpf
from .simulation import run_simulation
from .stirling import completion_cdf

BITS_ENV = "MINCOLLECTOR_BITS"
EXIT_USAGE, EXIT_PRECISION, EXIT_BUDGET = 2, 3, 4
# budget for the optional exact comparisons in `asym` and `simulate`
AFFORDABLE_WORK = 5 * 10**7

# CSV columns per subcommand (also the key order of JSON rows)
COLUMNS: dict[str, list[str]] = {
    "exact": ["N", "p", "mode", "bits", "terms_used", "truncation_bound", "mean", "second_moment", "variance"],
    "closed-form-p2": ["N", "closed_form_mean", "series_mean", "delta", "truncation_bound"],
    "constants": ["p", "precision_bits", "cancellation_bits", "error_estimate", "c_p", "w_p", "a_p"],
    "constants-scan": ["p", "a_p", "diagnostic", "positive", "decreasing"],
    "asym": [
        "N", "p", "mean_estimate", "second_moment_estimate", "variance_estimate",
        "exact_mean", "exact_second_moment", "exact_variance", "mean_residual_scaled",
        "second_moment_residual_scaled", "variance_ratio",
    ],
    "stirling": ["N", "k", "regime", "q_k", "approximation", "relative_error"],
    "louchard": ["k", "alpha", "m", "N", "log_stirling_exact", "log_main_term", "relative_log_error"],
    "threshold": ["N", "c_N"],
    "simulate": [
        "N", "p", "replications", "seed", "sampler", "sample_mean", "sample_variance",
        "std_error", "ci95_low", "ci95_high", "exact_mean", "z_score",
    ],
    "altsum": ["n", "power", "precision_bits", "sum", "expansion", "difference"],
}


class UsageError(DomainError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _dec(x: Any, bits: Optional[int] = None) -> Any:
    """Decimal string carrying ``bits`` worth of digits; passes other types through."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return str(x)
    digits = max(17, math.ceil((bits or 53) * math.log10(2)) + 2)
    if isinstance(x, Fraction):
        with mpmath.workdps(digits + 10):
            return mpmath.nstr(to_mpf(x), digits)
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, digits)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _default_bits() -> Optional[int]:
    raw = os.environ.get(BITS_ENV)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{BITS_ENV} must be an integer, got {raw!r}") from None


def _positive(name: str, value: Optional[int], minimum: int = 1) -> int:
    if value is None:
        raise UsageError(f"--{name} is required")
    if value < minimum:
        raise UsageError(f"--{name} must be >= {minimum}, got {value}")
    return value


# --- subcommands -----------------------------------------------------------


def cmd_exact(a: argparse.Namespace) -> tuple[list[dict], int]:
    N, p = _positive("N", a.N), _positive("p", a.p)
    fn = exact_second_moment if a.second_moment else exact_mean
    r = fn(N, p, a.eps, mode=a.mode, bits=a.bits or 256, work_budget=a.work_budget)
    bits = r.bits or 256
    row = {
        "N": N, "p": p, "mode": r.mode, "bits": r.bits, "terms_used": r.terms_used,
        "truncation_bound": r.truncation_bound, "mean": _dec(r.mean, bits),
        "second_moment": _dec(r.second_moment, bits), "variance": _dec(r.variance, bits),
    }
    return [row], bits


def cmd_closed_form(a: argparse.Namespace) -> tuple[list[dict], int]:
    N = _positive("N", a.N)
    cf = pair_closed_form_mean(N)
    series = exact_mean(N, 2, a.eps)
    with mpmath.workprec(256):
        delta = abs(to_mpf(series.mean) - to_mpf(cf))
    row = {
        "N": N, "closed_form_mean": _dec(cf, 256), "series_mean": _dec(series.mean, 256),
        "delta": _dec(delta, 64), "truncation_bound": series.truncation_bound,
    }
    return [row], 256


def cmd_constants(a: argparse.Namespace) -> tuple[list[dict], int]:
    if a.action == "scan":
        p_max = _positive("p-max", a.p_max)
        rep = conjecture_scan(p_max, a.bits)
        bad_pos = set(rep.positivity_violations)
        bad_mono = set(rep.monotonicity_violations)
        rows = [
            {
                "p": p, "a_p": _dec(val, rep.precision_bits - p),
                "diagnostic": _dec(rep.diagnostic.get(p), rep.precision_bits - p),
                "positive": p not in bad_pos, "decreasing": p not in bad_mono,
            }
            for p, val in rep.a.items()
        ]
        a._extra = {
            "positivity_violations": rep.positivity_violations,
            "monotonicity_violations": rep.monotonicity_violations,
            "diagnostic_violations": rep.diagnostic_violations,
            "ok": rep.ok,
        }
        a._table = "constants-scan"
        return rows, rep.precision_bits
    if a.action is not None:
        raise UsageError(f"unknown constants action {a.action!r}")
    p = _positive("p", a.p)
    cc = constants(p, a.bits)
    trusted = cc.precision_bits - cc.cancellation_bits
    row = {
        "p": p, "precision_bits": cc.precision_bits, "cancellation_bits": cc.cancellation_bits,
        "error_estimate": _dec(cc.error_estimate, 64), "c_p": _dec(cc.c_p, trusted),
        "w_p": _dec(cc.w_p, trusted), "a_p": _dec(cc.a_p, trusted),
    }
    return [row], cc.precision_bits


def cmd_asym(a: argparse.Namespace) -> tuple[list[dict], int]:
    N, p = _positive("N", a.N, 2), _positive("p", a.p)
    est = estimate(N, p)
    row: dict[str, Any] = {
        "N": N, "p": p, "mean_estimate": _dec(est.mean_estimate, 128),
        "second_moment_estimate": _dec(est.second_moment_estimate, 128),
        "variance_estimate": _dec(est.variance_estimate, 128),
    }
    if not a.no_exact:
        try:
            r = exact_second_moment(N, p, a.eps, work_budget=AFFORDABLE_WORK)
        except WorkBudgetExceeded:
            r = None
        if r is not None:
            with mpmath.workprec(128):
                cc = constants(p)
                L = mpmath.log(N)
                g = mpmath.euler
                mean = to_mpf(r.mean)
                m2 = to_mpf(r.second_moment)
                var = m2 - mean**2
                res1 = abs(mean / N - L - g - p * cc.c_p) * N / L**2
                res2 = abs(m2 - est.second_moment_estimate) / N**2 * N / L**3
                row.update(
                    exact_mean=_dec(mean, 64), exact_second_moment=_dec(m2, 64),
                    exact_variance=_dec(var, 64), mean_residual_scaled=_dec(res1, 53),
                    second_moment_residual_scaled=_dec(res2, 53),
                    variance_ratio=_dec(var / est.variance_estimate, 53),
                )
    return [row], 128


def cmd_stirling(a: argparse.Namespace) -> tuple[list[dict], int]:
    N, k = _positive("N", a.N), _positive("k", a.k, 2)
    regime = regime_of(k, N)
    row: dict[str, Any] = {"N": N, "k": k, "regime": regime}
    if not a.regime:
        q = completion_cdf(N, k)
        row["q_k"] = _dec(q, 128)
        if regime == "erdos_szekeres":
            approx = stirling_erdos_szekeres(k, N)
            row["approximation"] = approx
            row["relative_error"] = abs(approx - float(q)) / float(q) if q else None
    return [row], 128


def cmd_louchard(a: argparse.Namespace) -> tuple[list[dict], int]:
    k = _positive("k", a.k, 2)
    if a.alpha is None:
        raise UsageError("--alpha is required")
    main = stirling_louchard(k, a.alpha)
    m = louchard_block(k, a.alpha)
    exact = log_stirling_near_diagonal(k, m)
    row = {
        "k": k, "alpha": a.alpha, "m": m, "N": k - m, "log_stirling_exact": exact,
        "log_main_term": main, "relative_log_error": abs(main - exact) / abs(exact),
    }
    return [row], 53


def cmd_threshold(a: argparse.Namespace) -> tuple[list[dict], int]:
    N = _positive("N", a.N)
    return [{"N": N, "c_N": threshold_c_N(N)}], 53


def cmd_simulate(a: argparse.Namespace) -> tuple[list[dict], int]:
    N, p = _positive("N", a.N), _positive("p", a.p)
    s = run_simulation(N, p, a.reps, a.seed, a.sampler)
    row: dict[str, Any] = {
        "N": N, "p": p, "replications": s.replications, "seed": s.seed, "sampler": s.sampler,
        "sample_mean": s.sample_mean, "sample_variance": s.sample_variance,
        "std_error": s.std_error, "ci95_low": s.ci95[0], "ci95_high": s.ci95[1],
    }
    try:
        ex = float(exact_mean(N, p, 1e-9, work_budget=AFFORDABLE_WORK).mean)
    except WorkBudgetExceeded:
        ex = None
    if ex is not None:
        row["exact_mean"] = ex
        row["z_score"] = (s.sample_mean - ex) / s.std_error if s.std_error > 0 else 0.0
    return [row], 53


def cmd_altsum(a: argparse.Namespace) -> tuple[list[dict], int]:
    n = _positive("n", a.n)
    if a.power not in (1, 2):
        raise UsageError(f"--power must be 1 or 2, got {a.power}")
    bits = working_bits(n, a.bits)
    total = alt_binomial_log_sum(n, a.power, a.bits)
    row: dict[str, Any] = {"n": n, "power": a.power, "precision_bits": bits, "sum": _dec(total, 128)}
    if a.expansion:
        exp_val = flajolet_expansion(n, a.power)
        row["expansion"] = _dec(exp_val, 128)
        with mpmath.workprec(128):
            row["difference"] = _dec(total - exp_val, 64)
    return [row], bits


# --- plumbing --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--output", help="write the report to this file instead of stdout")

    parser = _Parser(prog="mincollector", description="Minimum of p coupon collectors.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(func=fn, _table=name)
        return sp

    sp = add("exact", cmd_exact, "exact-series moments")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--eps", type=float, default=1e-12)
    sp.add_argument("--second-moment", action="store_true")
    sp.add_argument("--mode", choices=("exact", "float"))
    sp.add_argument("--bits", type=int, default=_default_bits())
    sp.add_argument("--work-budget", type=float, default=DEFAULT_WORK_BUDGET)

    sp = add("closed-form-p2", cmd_closed_form, "p = 2 closed form against the series")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--eps", type=float, default=1e-12)

    sp = add("constants", cmd_constants, "c_p, w_p, a_p, or `constants scan`")
    sp.add_argument("action", nargs="?", choices=("scan",))
    sp.add_argument("--p", type=int)
    sp.add_argument("--p-max", type=int)
    sp.add_argument("--bits", type=int, default=_default_bits())

    sp = add("asym", cmd_asym, "asymptotic estimates with exact comparison")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--eps", type=float, default=1e-9)
    sp.add_argument("--no-exact", action="store_true")

    sp = add("stirling", cmd_stirling, "exact completion CDF and regime approximation")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--regime", action="store_true", help="only classify the regime")

    sp = add("louchard", cmd_louchard, "large-deviation main term vs exact")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--alpha", type=float, required=True)

    sp = add("threshold", cmd_threshold, "split index c_N")
    sp.add_argument("--N", type=int, required=True)

    sp = add("simulate", cmd_simulate, "seeded Monte Carlo")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--reps", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--sampler", choices=("inverse", "bernoulli"), default="inverse")

    sp = add("altsum", cmd_altsum, "alternating binomial log-sum")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--power", type=int, default=1)
    sp.add_argument("--bits", type=int, default=_default_bits())
    sp.add_argument("--expansion", action="store_true")
    return parser


def render(args: argparse.Namespace, rows: list[dict], bits: int) -> str:
    table = args._table
    cols = COLUMNS[table]
    rows = [{c: _dec(r.get(c)) for c in cols} for r in rows]
    if args.format == "json":
        params = {
            k: v for k, v in vars(args).items()
            if not k.startswith("_") and k not in ("func", "format", "output")
        }
        report = {
            "tool": "mincollector",
            "version": __version__,
            "command": table,
            "params": params,
            "precision_bits": bits,
            "rows": rows,
        }
        report.update(getattr(args, "_extra", {}))
        return json.dumps(report, indent=2) + "\n"
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    lines = []
    for r in rows:
        lines.extend(f"{c}: {v}" for c, v in r.items() if v is not None)
        lines.append("")
    for k, v in getattr(args, "_extra", {}).items():
        lines.append(f"{k}: {v}")
    return "\n".join(lines).rstrip("\n") + "\n"


def _fail(code: int, kind: str, message: str) -> int:
    message = " ".join(str(message).split())
    print(f"error code={code} kind={kind} message={json.dumps(message)}", file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        rows, bits = args.func(args)
    except PrecisionError as e:
        return _fail(EXIT_PRECISION, "precision", e)
    except WorkBudgetExceeded as e:
        return _fail(EXIT_BUDGET, "work_budget", e)
    except (DomainError, ValueError) as e:
        return _fail(EXIT_USAGE, "usage", e)
    text = render(args, rows, bits)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
