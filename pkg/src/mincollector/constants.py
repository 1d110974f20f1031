"""High-precision alternating binomial log-sums and the collector constants.

For ``p`` collectors,

    c_p = sum_{j=0}^{p-1} (-1)^j C(p-1, j) ln(1+j) / (1+j)
    w_p = sum_{j=0}^{p-1} (-1)^j C(p-1, j) ln(1+j)^2 / (1+j)
    a_p = pi^2/6 + p w_p - p^2 c_p^2

Using ``C(p-1, j) / (j+1) = C(p, j+1) / p`` both constants are also
``-(1/p) sum_{k=1}^{p} (-1)^k C(p, k) ln(k)^power``. The terms reach about
``2**p`` in size while the sums stay O(1), so roughly ``p`` bits cancel; all
evaluation runs at ``p + 128`` bits or more and is checked by recomputing at
double precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Optional

import mpmath

from .errors import DomainError, PrecisionError

__all__ = [
    "CollectorConstants",
    "ScanReport",
    "GUARD_BITS",
    "DEFAULT_BITS",
    "working_bits",
    "constants",
    "reciprocal_binomial_sum",
    "alt_binomial_log_sum",
    "flajolet_expansion",
    "conjecture_scan",
    "find_violations",
]

GUARD_BITS = 128
DEFAULT_BITS = 256
DECREASE_MARGIN_EXP = -40


@dataclass(frozen=True)
class CollectorConstants:
    p: int
    c_p: mpmath.mpf
    w_p: mpmath.mpf
    a_p: mpmath.mpf
    precision_bits: int
    cancellation_bits: int
    error_estimate: mpmath.mpf


@dataclass
class ScanReport:
    """Outcome of :func:`conjecture_scan`.

    ``a`` maps ``p`` to ``a_p``; ``diagnostic`` maps powers of two to
    ``|p^2 c_p^2 - p w_p - pi^2/6|``. The three violation lists hold the
    offending ``p`` values and are empty when everything checks out.
    """

    p_max: int
    precision_bits: int
    a: dict[int, mpmath.mpf]
    diagnostic: dict[int, mpmath.mpf]
    positivity_violations: list[int] = field(default_factory=list)
    monotonicity_violations: list[int] = field(default_factory=list)
    diagnostic_violations: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (
            self.positivity_violations
            or self.monotonicity_violations
            or self.diagnostic_violations
        )


def working_bits(size: int, requested: Optional[int] = None) -> int:
    """Precision policy: ``max(requested, size + 128)``."""
    return max(requested or DEFAULT_BITS, size + GUARD_BITS)


@lru_cache(maxsize=64)
def _log_table(n: int, prec: int) -> tuple[mpmath.mpf, ...]:
    """``(ln 0 placeholder, ln 1, ..., ln n)`` at ``prec`` bits.

    Only primes get a fresh logarithm; composites reuse ``ln a + ln b``.
    """
    with mpmath.workprec(prec + 16):
        spf = list(range(n + 1))  # smallest prime factor sieve
        for i in range(2, math.isqrt(n) + 1):
            if spf[i] == i:
                for m in range(i * i, n + 1, i):
                    if spf[m] == m:
                        spf[m] = i
        logs = [mpmath.mpf(0)] * (n + 1)
        for k in range(2, n + 1):
            f = spf[k]
            logs[k] = mpmath.log(k) if f == k else logs[f] + logs[k // f]
    return tuple(logs)


def _alt_sum(n: int, power: int, prec: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    """``sum_{k=1}^n (-1)^k C(n,k) ln(k)^power`` and its largest term magnitude."""
    logs = _log_table(n, prec)
    with mpmath.workprec(prec):
        total = mpmath.mpf(0)
        biggest = mpmath.mpf(0)
        b = n  # C(n, 1)
        for k in range(2, n + 1):
            b = b * (n - k + 1) // k
            t = b * logs[k] ** power
            if t > biggest:
                biggest = t
            total = total + t if k % 2 == 0 else total - t
    return total, biggest


def _dual_forms(p: int, prec: int) -> tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf, mpmath.mpf]:
    """``c_p`` and ``w_p`` via the (p-1)-row form and via the p-row form."""
    logs = _log_table(p, prec)
    with mpmath.workprec(prec):
        c_row = mpmath.mpf(0)
        w_row = mpmath.mpf(0)
        b = 1  # C(p-1, j)
        for j in range(p):
            if j:
                b = b * (p - j) // j
            lg = logs[j + 1]
            t = b * lg / (j + 1)
            s = t * lg
            if j & 1:
                c_row -= t
                w_row -= s
            else:
                c_row += t
                w_row += s
        c_sum, _ = _alt_sum(p, 1, prec)
        w_sum, _ = _alt_sum(p, 2, prec)
        c_alt = -c_sum / p
        w_alt = -w_sum / p
    return c_row, w_row, c_alt, w_alt


def _cancellation_bits(p: int) -> int:
    if p < 2:
        return 0
    with mpmath.workprec(64):
        biggest = max(comb(p, k) * mpmath.log(k) for k in range(2, p + 1))
        return max(0, int(mpmath.ceil(mpmath.log(biggest, 2))))


def _a_value(p: int, c: mpmath.mpf, w: mpmath.mpf) -> mpmath.mpf:
    return mpmath.pi**2 / 6 + p * w - p * p * c * c


def constants(p: int, bits: Optional[int] = None) -> CollectorConstants:
    """Evaluate ``c_p``, ``w_p`` and ``a_p`` with a verified error estimate.

    Both defining sums are evaluated at ``working_bits(p, bits)`` and again at
    twice that. ``error_estimate`` is the largest discrepancy seen. If it
    exceeds ``2**-64 * max(|c_p|, 2**-20)`` the precision is doubled once
    more; a second failure raises :class:`PrecisionError`.

    >>> float(constants(2).c_p)
    -0.34657359027997264
    """
    if not isinstance(p, int) or p < 1:
        raise DomainError(f"p must be a positive integer, got {p!r}")
    prec = working_bits(p, bits)
    for _ in range(2):
        lo = _dual_forms(p, prec)
        hi = _dual_forms(p, 2 * prec)
        with mpmath.workprec(2 * prec):
            c, w = hi[0], hi[1]
            pairs = list(zip(lo, hi)) + [(hi[0], hi[2]), (hi[1], hi[3]), (lo[0], lo[2])]
            err = max(abs(x - y) for x, y in pairs)
            tol = mpmath.ldexp(1, -64) * max(abs(c), mpmath.ldexp(1, -20))
            if err <= tol:
                a = _a_value(p, c, w)
                # report at the requested working precision
                with mpmath.workprec(prec):
                    return CollectorConstants(
                        p=p,
                        c_p=+c,
                        w_p=+w,
                        a_p=+a,
                        precision_bits=prec,
                        cancellation_bits=_cancellation_bits(p),
                        error_estimate=+err,
                    )
        prec *= 2
    raise PrecisionError(f"c_p/w_p forms disagree by {mpmath.nstr(err, 5)} for p={p}")


def reciprocal_binomial_sum(p: int) -> Fraction:
    """``sum_{j=0}^{p-1} (-1)^j C(p-1, j) / (j+1)`` exactly; equals ``1/p``."""
    if p < 1:
        raise DomainError(f"p must be a positive integer, got {p!r}")
    return sum((Fraction((-1) ** j * comb(p - 1, j), j + 1) for j in range(p)), Fraction(0))


def alt_binomial_log_sum(
    n: int, power: int = 1, bits: Optional[int] = None, *, verify: bool = True
) -> mpmath.mpf:
    """``D_n[ln^power] = sum_{k=1}^n C(n,k) (-1)^k (ln k)^power``.

    Evaluated at ``working_bits(n, bits)``. With ``verify`` the sum is redone
    at double precision and a :class:`PrecisionError` is raised if the two
    differ by more than ``2**-64`` relative to ``max(|sum|, 1)``.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if power not in (1, 2):
        raise DomainError(f"power must be 1 or 2, got {power!r}")
    prec = working_bits(n, bits)
    value, _ = _alt_sum(n, power, prec)
    if verify:
        check, _ = _alt_sum(n, power, 2 * prec)
        with mpmath.workprec(2 * prec):
            if abs(value - check) > mpmath.ldexp(1, -64) * max(abs(check), 1):
                raise PrecisionError(f"alternating sum unstable at n={n}, {prec} bits")
    return value


def flajolet_expansion(n: int, power: int = 1, bits: int = 128) -> mpmath.mpf:
    """Asymptotic expansion of :func:`alt_binomial_log_sum` in powers of ``1/ln n``.

    Truncated after the ``(ln n)^-2`` terms. The remainder is
    ``O(1/ln^3 n)`` for ``power=1`` and ``O(ln ln n / ln^3 n)`` for
    ``power=2``, which decays slowly.
    """
    if not isinstance(n, int) or n <= 2:
        raise DomainError(f"expansion needs n >= 3, got {n!r}")
    if power not in (1, 2):
        raise DomainError(f"power must be 1 or 2, got {power!r}")
    with mpmath.workprec(bits):
        g = mpmath.euler
        z2 = mpmath.pi**2 / 6
        L = mpmath.log(n)
        LL = mpmath.log(L)
        if power == 1:
            return LL + g + g / L - (g**2 + z2) / (2 * L**2)
        return (
            -LL**2
            - 2 * g * LL
            + z2
            - g**2
            - 2 * g * LL / L
            + (g**2 + z2) * LL / L**2
            - 2 * g**2 / L
            + (g**2 - z2) / L**2
        )


def conjecture_scan(p_max: int, bits: Optional[int] = None) -> ScanReport:
    """Tabulate ``a_p`` for ``p = 1..p_max`` and check the three claims.

    Positivity ``a_p > 0``, strict decrease ``a_{p+1} < a_p - 2**-40`` and
    strict decrease of ``|p^2 c_p^2 - p w_p - pi^2/6|`` along powers of two.
    Logarithms are computed once at ``p_max + 128`` bits and shared by every
    ``p``.
    """
    if not isinstance(p_max, int) or p_max < 1:
        raise DomainError(f"p_max must be a positive integer, got {p_max!r}")
    prec = working_bits(p_max, bits)
    logs = _log_table(p_max, prec)
    a: dict[int, mpmath.mpf] = {}
    diagnostic: dict[int, mpmath.mpf] = {}
    report = ScanReport(p_max=p_max, precision_bits=prec, a=a, diagnostic=diagnostic)
    with mpmath.workprec(prec):
        z2 = mpmath.pi**2 / 6
        for p in range(1, p_max + 1):
            c = mpmath.mpf(0)
            w = mpmath.mpf(0)
            b = p
            for k in range(2, p + 1):
                b = b * (p - k + 1) // k
                t = b * logs[k]
                s = t * logs[k]
                if k & 1:
                    c -= t
                    w -= s
                else:
                    c += t
                    w += s
            c = -c / p
            w = -w / p
            a[p] = z2 + p * w - p * p * c * c
            if p & (p - 1) == 0:
                diagnostic[p] = abs(p * p * c * c - p * w - z2)
        pos, mono, diag = find_violations(a, diagnostic)
    report.positivity_violations.extend(pos)
    report.monotonicity_violations.extend(mono)
    report.diagnostic_violations.extend(diag)
    return report


def find_violations(
    a: dict[int, mpmath.mpf], diagnostic: dict[int, mpmath.mpf]
) -> tuple[list[int], list[int], list[int]]:
    """Offending ``p`` for positivity, strict decrease (with margin) and the diagnostic trend."""
    margin = mpmath.ldexp(1, DECREASE_MARGIN_EXP)
    ps = sorted(a)
    positivity = [p for p in ps if not a[p] > 0]
    monotone = [cur for prev, cur in zip(ps, ps[1:]) if not a[cur] < a[prev] - margin]
    pows = sorted(diagnostic)
    trend = [cur for prev, cur in zip(pows, pows[1:]) if not diagnostic[cur] < diagnostic[prev]]
    return positivity, monotone, trend
