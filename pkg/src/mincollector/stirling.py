"""Exact integer and rational kernel for the uniform coupon collector.

Everything here is exact: Stirling numbers are Python integers and
probabilities are :class:`fractions.Fraction`. The other modules treat these
values as ground truth.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterator

from .errors import DomainError

__all__ = [
    "StirlingColumn",
    "CompletionLaw",
    "stirling_rows",
    "stirling_column",
    "completion_law",
    "completion_cdf",
    "inclusion_exclusion_survival",
    "markov_law_oracle",
]


@dataclass(frozen=True)
class StirlingColumn:
    """Values ``S(k, N)`` for a fixed ``N`` and ``k = 0..k_max``."""

    N: int
    k_max: int
    values: tuple[int, ...]

    def __getitem__(self, k: int) -> int:
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class CompletionLaw:
    """CDF ``q[k] = P(T_N <= k)`` of one collector's completion time."""

    N: int
    q: tuple[Fraction, ...]

    @property
    def k_max(self) -> int:
        return len(self.q) - 1

    def survival(self, k: int) -> Fraction:
        """``P(T_N >= k)`` for ``1 <= k <= k_max + 1``."""
        return 1 - self.q[k - 1]


def _check_N(N: int) -> None:
    if not isinstance(N, int) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")


def stirling_rows(N: int) -> Iterator[list[int]]:
    """Yield rows ``[S(k, 0), ..., S(k, N)]`` for ``k = 0, 1, 2, ...``.

    Only columns up to ``N`` are kept, so memory is O(N) integers no matter
    how far the sweep runs. The generator is infinite.
    """
    _check_N(N)
    row = [1] + [0] * N
    while True:
        yield row
        new = [0] * (N + 1)
        for j in range(1, N + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new


def stirling_column(N: int, k_max: int) -> StirlingColumn:
    """Exact Stirling numbers of the second kind ``S(k, N)``, ``k = 0..k_max``.

    Uses the triangular recurrence ``S(k, j) = j S(k-1, j) + S(k-1, j-1)``
    rather than Euler's alternating formula, so no intermediate cancellation
    occurs.

    >>> stirling_column(2, 4).values
    (0, 0, 1, 3, 7)
    """
    _check_N(N)
    if k_max < N:
        raise DomainError(f"k_max must be >= N (got k_max={k_max}, N={N})")
    values = []
    for k, row in enumerate(stirling_rows(N)):
        values.append(row[N])
        if k == k_max:
            break
    return StirlingColumn(N=N, k_max=k_max, values=tuple(values))


def completion_law(N: int, k_max: int) -> CompletionLaw:
    """Completion CDF ``q_k = S(k, N) N! / N^k`` for ``k = 0..k_max``."""
    col = stirling_column(N, max(k_max, N))
    fN = factorial(N)
    q = tuple(Fraction(col[k] * fN, N**k) for k in range(k_max + 1))
    return CompletionLaw(N=N, q=q)


def completion_cdf(N: int, k: int) -> Fraction:
    """``P(T_N <= k)`` as an exact rational."""
    _check_N(N)
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if k < N:
        return Fraction(0)
    return Fraction(stirling_column(N, k)[k] * factorial(N), N**k)


def inclusion_exclusion_survival(N: int, k: int) -> Fraction:
    """``P(T_N >= k)`` by the alternating binomial sum over missing types.

    Independent of the Stirling recurrence; kept as an oracle for
    :func:`completion_cdf`.
    """
    _check_N(N)
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    # 0**0 == 1 covers the n = 0 term at k = 1.
    total = sum((-1) ** n * comb(N, n) * n ** (k - 1) for n in range(N))
    return Fraction((-1) ** (N - 1) * total, N ** (k - 1))


def markov_law_oracle(N: int, k_max: int) -> CompletionLaw:
    """Completion CDF from the birth chain on the number of distinct types seen.

    From state ``i`` the chain moves to ``i + 1`` with probability
    ``(N - i) / N`` and stays otherwise. ``q_k`` is the mass in state ``N``
    after ``k`` steps.
    """
    _check_N(N)
    if k_max < N:
        raise DomainError(f"k_max must be >= N (got k_max={k_max}, N={N})")
    dist = [Fraction(1)] + [Fraction(0)] * N
    q = [dist[N]]
    for _ in range(k_max):
        new = [Fraction(0)] * (N + 1)
        for i, mass in enumerate(dist):
            if not mass:
                continue
            if i == N:
                new[N] += mass
                continue
            advance = Fraction(N - i, N)
            new[i + 1] += mass * advance
            new[i] += mass * (1 - advance)
        dist = new
        q.append(dist[N])
    return CompletionLaw(N=N, q=tuple(q))
