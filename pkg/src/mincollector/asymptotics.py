"""Leading-order estimates for the minimum of ``p`` coupon collectors.

As ``N`` grows with ``p`` fixed,

    E[M]   ~ N (ln N + gamma + p c_p)
    E[M^2] ~ N^2 [ln^2 N + 2 (gamma + p c_p) ln N + gamma^2 + pi^2/6
                  + 2 p c_p gamma + p w_p]
    Var[M] ~ a_p N^2

The remainders are dropped; no error bars are attached to the estimates.
The module also holds the two Stirling-number approximations used to derive
them, the split index ``c_N``, and the classical ``p = 1`` moments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import mpmath

from .constants import constants
from .errors import DomainError, RegimeError

__all__ = [
    "AsymptoticEstimate",
    "ESTIMATE_BITS",
    "estimate",
    "classical_moments",
    "stirling_erdos_szekeres",
    "stirling_louchard",
    "louchard_block",
    "log_stirling_near_diagonal",
    "threshold_c_N",
    "regime_of",
]

ESTIMATE_BITS = 128

Regime = Literal["erdos_szekeres", "other"]


@dataclass(frozen=True)
class AsymptoticEstimate:
    N: int
    p: int
    mean_estimate: mpmath.mpf
    second_moment_estimate: mpmath.mpf
    variance_estimate: mpmath.mpf


def estimate(N: int, p: int) -> AsymptoticEstimate:
    """Leading-order mean, second moment and variance for ``N`` types, ``p`` collectors."""
    if not isinstance(N, int) or N < 2:
        raise DomainError(f"N must be an integer >= 2, got {N!r}")
    cc = constants(p)
    with mpmath.workprec(ESTIMATE_BITS):
        g = mpmath.euler
        z2 = mpmath.pi**2 / 6
        L = mpmath.log(N)
        pc = p * cc.c_p
        pw = p * cc.w_p
        shift = g + pc
        mean = N * (L + shift)
        second = N**2 * (L**2 + 2 * shift * L + g**2 + z2 + 2 * pc * g + pw)
        var = (z2 + pw - pc**2) * N**2
    return AsymptoticEstimate(N, p, mean, second, var)


def classical_moments(N: int) -> tuple[Fraction, Fraction, Fraction]:
    """Exact ``(E[T_N], E[T_N^2], Var[T_N])`` for a single collector.

    ``T_N`` is a sum of independent geometric variables with success
    probabilities ``(N-i)/N``, which gives ``E = N H_N`` and
    ``Var = N^2 H_N^(2) - N H_N``.

    >>> classical_moments(2)
    (Fraction(3, 1), Fraction(11, 1), Fraction(2, 1))
    """
    if not isinstance(N, int) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    H1 = sum((Fraction(1, j) for j in range(1, N + 1)), Fraction(0))
    H2 = sum((Fraction(1, j * j) for j in range(1, N + 1)), Fraction(0))
    mean = N * H1
    var = N * N * H2 - mean
    return mean, var + mean * mean, var


def regime_of(k: int, N: int) -> Regime:
    """``"erdos_szekeres"`` when ``N < k / ln k``, otherwise ``"other"``."""
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")
    return "erdos_szekeres" if N < k / math.log(k) else "other"


def stirling_erdos_szekeres(k: int, N: int) -> float:
    """Approximate ``q_k = S(k, N) N! / N^k`` by ``exp((k/2N - N) e^{-k/N})``.

    Valid only when ``N < k / ln k``.
    """
    if not isinstance(N, int) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    if regime_of(k, N) != "erdos_szekeres":
        raise RegimeError(f"k={k}, N={N} is outside N < k/ln k")
    return math.exp((k / (2 * N) - N) * math.exp(-k / N))


def louchard_block(k: int, alpha: float) -> int:
    """Number of missing blocks ``ceil(k**alpha)``; the target is ``S(k, k - m)``."""
    x = k**alpha
    r = round(x)
    # k**alpha may land a hair above an exact integer (1024**0.6)
    return r if abs(x - r) < 1e-9 * x else math.ceil(x)


def stirling_louchard(k: int, alpha: float) -> float:
    """Log of the large-deviation main term for ``S(k, k - ceil(k**alpha))``.

    Returns ``k^a [(2-a) ln k + 1 - ln 2] - (a/2) ln k - ln(2 pi)/2``. The
    multiplicative ``1 + O(k^(a-1))`` corrections are unknown, which is why
    only the logarithm is offered.
    """
    if not 0.5 < alpha < 1:
        raise DomainError(f"alpha must lie in (1/2, 1), got {alpha!r}")
    if not isinstance(k, int) or k - louchard_block(k, alpha) < 1:
        raise DomainError(f"k={k!r} too small for alpha={alpha}")
    ka = k**alpha
    lk = math.log(k)
    return ka * ((2 - alpha) * lk + 1 - math.log(2)) - alpha / 2 * lk - 0.5 * math.log(2 * math.pi)


def log_stirling_near_diagonal(k: int, m: int) -> float:
    """``ln S(k, k - m)`` from exact integers.

    Runs the recurrence along diagonals, ``D_m(n) = S(n, n - m)``:
    ``D_m(n) = D_m(n-1) + (n - m) D_{m-1}(n-1)``. Cost is ``O(k m)``
    big-integer operations.
    """
    if m < 0 or k - m < 1:
        raise DomainError(f"need 0 <= m < k, got k={k}, m={m}")
    D = [1] + [0] * m
    for n in range(1, k + 1):
        for i in range(min(m, n), 0, -1):
            D[i] += (n - i) * D[i - 1]
    value = D[m]
    shift = max(0, value.bit_length() - 64)
    return math.log(value >> shift) + shift * math.log(2)


def threshold_c_N(N: int) -> int:
    """Smallest ``j >= 1`` with ``(N + j) / ln(N + j) > N``.

    ``x / ln x`` increases for ``x > e``, so an exponential bracket followed by
    bisection finds it. For ``N <= 2`` the answer is ``j = 1``.
    """
    if not isinstance(N, int) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")

    def ok(j: int) -> bool:
        x = N + j
        return x > N * math.log(x)

    if ok(1):
        return 1
    lo, hi = 1, 2
    while not ok(hi):
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi
