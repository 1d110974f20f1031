"""Rigorously truncated series for the moments of the minimum completion time.

With ``q_k = P(T_N <= k)`` and ``p`` independent collectors,
``P(M >= k + 1) = (1 - q_k)**p`` and

    E[M]   = sum_{k >= 0} (1 - q_k)**p
    E[M^2] = sum_{k >= 0} (2k + 1) (1 - q_k)**p

Both series are cut at an index ``K`` chosen from the union bound
``P(T_N >= k) <= N (1 - 1/N)**(k - 1)``, so every reported value carries a
guaranteed absolute error bound.

Two arithmetic modes are available. ``"exact"`` sums exact rationals over a
streamed Stirling row. ``"float"`` runs the same recurrence in binary fixed
point (Python integers scaled by ``2**bits``), where each floor division adds
at most one unit in the last place; that rounding is added to the bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Literal, Optional, Union

import mpmath
import numpy as np

from .errors import DomainError, WorkBudgetExceeded
from .stirling import stirling_rows

__all__ = [
    "MomentResult",
    "truncation_index",
    "tail_bound",
    "exact_mean",
    "exact_second_moment",
    "pair_closed_form_mean",
    "EXACT_MAX_N",
    "DEFAULT_BITS",
    "DEFAULT_WORK_BUDGET",
    "to_mpf",
]

Number = Union[Fraction, mpmath.mpf]
Mode = Literal["exact", "float"]

EXACT_MAX_N = 64
DEFAULT_BITS = 256
DEFAULT_WORK_BUDGET = 10**9


@dataclass(frozen=True)
class MomentResult:
    """Series values for ``M = min(T_1, ..., T_p)``.

    ``truncation_bound`` bounds the absolute error of every moment that was
    computed (tail plus rounding). ``bits`` is ``None`` in exact mode.
    """

    N: int
    p: int
    mean: Number
    second_moment: Optional[Number]
    variance: Optional[Number]
    truncation_bound: float
    terms_used: int
    mode: Mode
    bits: Optional[int] = None


def to_mpf(x: Number) -> mpmath.mpf:
    """Convert a moment value to an mpf at the current mpmath precision."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _check(N: int, p: int, eps: float) -> None:
    if not isinstance(N, int) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    if not isinstance(p, int) or p < 1:
        raise DomainError(f"p must be a positive integer, got {p!r}")
    if not eps > 0:
        raise DomainError(f"epsilon must be positive, got {eps!r}")


def tail_bound(N: int, p: int, K: int, order: Literal["first", "second"] = "first") -> float:
    """Upper bound on the series tail starting at index ``K``.

    ``order="first"`` bounds ``sum_{k>=K} (1-q_k)**p`` and ``order="second"``
    bounds ``sum_{k>=K} (2k+1) (1-q_k)**p``, both using
    ``(1 - q_k)**p <= (N r**(k-1))**p`` with ``r = 1 - 1/N``.
    """
    if K < 1:
        return math.inf
    if N == 1:
        # r = 0: only the k = 1 term survives the bound.
        return 0.0 if K >= 2 else (1.0 if order == "first" else 3.0)
    log_r = math.log1p(-1.0 / N)
    rho = math.exp(p * log_r)
    one_minus_rho = -math.expm1(p * log_r)
    log_head = p * math.log(N) + (K - 1) * p * log_r
    if order == "first":
        log_sum = -math.log(one_minus_rho)
    elif order == "second":
        # sum_{m>=0} (2(K+m)+1) rho**m
        log_sum = math.log((2 * K + 1) / one_minus_rho + 2 * rho / one_minus_rho**2)
    else:
        raise DomainError(f"order must be 'first' or 'second', got {order!r}")
    return math.exp(log_head + log_sum)


def truncation_index(
    N: int, p: int, eps: float, order: Literal["first", "second"] = "first"
) -> int:
    """Smallest ``K`` whose tail bound is below ``eps``.

    >>> truncation_index(2, 1, 1e-6)
    23
    """
    _check(N, p, eps)
    if order not in ("first", "second"):
        raise DomainError(f"order must be 'first' or 'second', got {order!r}")
    # log of the bound is concave in K, so {K : bound >= eps} is an interval
    # starting at 1 and bisection finds its right end
    def big(K: int) -> bool:
        return tail_bound(N, p, K, order) >= eps

    if not big(1):
        return 1
    lo, hi = 1, 2
    while big(hi):
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if big(mid):
            lo = mid
        else:
            hi = mid
    return hi


def _sums_exact(N: int, p: int, K: int) -> tuple[Fraction, Fraction]:
    """``(sum_{k<K} u_k, sum_{k<K} k u_k)`` with ``u_k = (1-q_k)**p``, exactly."""
    fN = factorial(N)
    Np = N**p
    acc0 = 0
    acc1 = 0
    Nk = 1
    rows = stirling_rows(N)
    for k in range(K):
        row = next(rows)
        d = (Nk - fN * row[N]) ** p
        # Horner over the common denominator N**(p*(K-1)).
        acc0 = acc0 * Np + d
        acc1 = acc1 * Np + k * d
        Nk *= N
    den = Np ** (K - 1)
    return Fraction(acc0, den), Fraction(acc1, den)


def _sums_fixed(N: int, p: int, K: int, bits: int) -> tuple[int, int, float, float]:
    """Fixed-point version of :func:`_sums_exact`.

    Returns scaled integer sums (scale ``2**(bits*p)``) and rigorous rounding
    bounds for both. The occupancy vector ``U[j]`` (probability that exactly
    ``j`` types have been seen, times ``2**bits``) is a rescaled Stirling row:
    ``U_k[j] = S(k, j) N! / ((N - j)! N**k)``.
    """
    one = 1 << bits
    j = np.arange(N + 1, dtype=object)
    fresh = N - j + 1
    U = np.zeros(N + 1, dtype=object)
    U[0] = one
    acc0 = 0
    acc1 = 0
    for k in range(K):
        d = (one - U[N]) ** p
        acc0 += d
        acc1 += k * d
        shifted = np.empty(N + 1, dtype=object)
        shifted[0] = 0
        shifted[1:] = U[:-1]
        U = (j * U + fresh * shifted) // N
    # Computed entries never exceed the exact ones and each step loses < N
    # units in total, so |q_k error| <= k N 2**-bits.
    ulp = math.ldexp(1.0, -bits)
    round0 = p * N * ulp * K * (K - 1) / 2
    round1 = p * N * ulp * (K - 1) * K * (2 * K - 1) / 6
    return acc0, acc1, round0, round1


def _resolve_mode(N: int, mode: Optional[Mode]) -> Mode:
    if mode is None:
        return "exact" if N <= EXACT_MAX_N else "float"
    if mode not in ("exact", "float"):
        raise DomainError(f"mode must be 'exact' or 'float', got {mode!r}")
    return mode


def _series(
    N: int,
    p: int,
    eps: float,
    second: bool,
    mode: Optional[Mode],
    bits: int,
    work_budget: float,
) -> MomentResult:
    _check(N, p, eps)
    mode = _resolve_mode(N, mode)
    order = "second" if second else "first"
    K = truncation_index(N, p, eps, order)
    if K * (N + 1) > work_budget:
        raise WorkBudgetExceeded(
            f"N={N}, p={p}, eps={eps:g} needs about {K * (N + 1):.3g} row updates "
            f"(budget {work_budget:.3g})"
        )

    if mode == "exact":
        s0, s1 = _sums_exact(N, p, K)
        mean: Number = s0
        m2: Optional[Number] = 2 * s1 + s0 if second else None
        var: Optional[Number] = m2 - s0 * s0 if second else None
        bound = tail_bound(N, p, K, order)
        return MomentResult(N, p, mean, m2, var, bound, K, "exact", None)

    while True:
        acc0, acc1, r0, r1 = _sums_fixed(N, p, K, bits)
        with mpmath.workprec(bits + 64):
            scale = mpmath.ldexp(1, -bits * p)
            mean = mpmath.mpf(acc0) * scale
            m2 = (2 * mpmath.mpf(acc1) + acc0) * scale if second else None
            var = m2 - mean * mean if second else None
            # conversion of the integer sums to binary floats
            conv = float(abs(m2) if second else mean) * math.ldexp(1.0, -bits)
        rounding = (2 * r1 + r0 if second else r0) + conv
        bound = tail_bound(N, p, K, order) + rounding
        if bound < eps:
            break
        K += max(1, K // 64)
    return MomentResult(N, p, mean, m2, var, bound, K, "float", bits)


def exact_mean(
    N: int,
    p: int,
    eps: float = 1e-12,
    *,
    mode: Optional[Mode] = None,
    bits: int = DEFAULT_BITS,
    work_budget: float = DEFAULT_WORK_BUDGET,
) -> MomentResult:
    """``E[min(T_1, ..., T_p)]`` to within ``eps``.

    Exact rational arithmetic is used for ``N <= 64`` unless ``mode`` says
    otherwise; above that the fixed-point route at ``bits`` bits is used.
    """
    return _series(N, p, eps, False, mode, bits, work_budget)


def exact_second_moment(
    N: int,
    p: int,
    eps: float = 1e-12,
    *,
    mode: Optional[Mode] = None,
    bits: int = DEFAULT_BITS,
    work_budget: float = DEFAULT_WORK_BUDGET,
) -> MomentResult:
    """Mean, second moment and variance of the minimum, each to within ``eps``."""
    return _series(N, p, eps, True, mode, bits, work_budget)


def pair_closed_form_mean(N: int, work_budget: int = 10**5) -> Fraction:
    """``E[min(T_1, T_2)]`` from the double sum obtained by summing over ``k``.

    Squares the alternating inclusion-exclusion survival probability and sums
    each geometric series in closed form:

        sum_n C(N,n)^2 / (1 - (n/N)^2)
          + 2 sum_{n1<n2} (-1)^(n1+n2) C(N,n1) C(N,n2) / (1 - n1 n2 / N^2)

    with ``n, n1, n2`` ranging over ``0..N-1``. The terms cancel heavily, so
    this is only useful as an exact oracle at moderate ``N``.
    """
    if not isinstance(N, int) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    if N * (N + 1) // 2 > work_budget:
        raise WorkBudgetExceeded(f"N={N} needs {N * (N + 1) // 2} rational terms")
    N2 = N * N
    binom = [comb(N, n) for n in range(N)]
    total = Fraction(0)
    for n in range(N):
        total += Fraction(binom[n] ** 2 * N2, N2 - n * n)
    cross = Fraction(0)
    for n1 in range(N):
        for n2 in range(n1 + 1, N):
            term = Fraction(binom[n1] * binom[n2] * N2, N2 - n1 * n2)
            cross += -term if (n1 + n2) & 1 else term
    return total + 2 * cross
