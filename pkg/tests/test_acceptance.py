"""Acceptance suite: one test per criterion, summarised as PASS/FAIL lines.

Run with ``pytest tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
"""
import math
from fractions import Fraction

import mpmath
import pytest

from mincollector.asymptotics import (
    estimate,
    log_stirling_near_diagonal,
    louchard_block,
    stirling_erdos_szekeres,
    stirling_louchard,
)
from mincollector.constants import (
    alt_binomial_log_sum,
    conjecture_scan,
    constants,
    flajolet_expansion,
    working_bits,
)
from mincollector.moments import exact_mean, exact_second_moment, pair_closed_form_mean, to_mpf
from mincollector.simulation import run_simulation
from mincollector.stirling import (
    completion_cdf,
    completion_law,
    inclusion_exclusion_survival,
    markov_law_oracle,
)

criterion = pytest.mark.criterion
HI = 256  # working precision for comparing exact results


def harmonic(N):
    return sum((Fraction(1, j) for j in range(1, N + 1)), Fraction(0))


def diff(a, b):
    with mpmath.workprec(HI):
        return abs(to_mpf(a) - to_mpf(b))


@criterion(1, "harmonic oracle, N = 2..100")
def test_harmonic_oracle():
    worst = max(diff(exact_mean(N, 1, 1e-12).mean, N * harmonic(N)) for N in range(2, 101))
    assert worst <= 2e-12


@criterion(2, "p = 2 closed form, N = 2..40")
def test_pair_closed_form():
    worst = max(diff(pair_closed_form_mean(N), exact_mean(N, 2, 1e-12).mean) for N in range(2, 41))
    assert worst <= 2e-12


@criterion(3, "closed-form constants to 1e-30")
def test_known_constants():
    with mpmath.workprec(HI):
        ln2, ln3, ln5 = mpmath.log(2), mpmath.log(3), mpmath.log(5)
        cases = [
            (constants(1, HI).c_p, 0),
            (constants(2, HI).c_p, -ln2 / 2),
            (constants(3, HI).c_p, -ln2 + ln3 / 3),
            (constants(5, HI).c_p, -4 * ln2 + 2 * ln3 + ln5 / 5),
            (constants(2, HI).w_p, -(ln2**2) / 2),
        ]
        assert max(abs(got - want) for got, want in cases) < mpmath.mpf(10) ** -30


@criterion(4, "dual forms agree and precision doubling is stable, p <= 256")
def test_dual_forms():
    form_gap = precision_gap = mpmath.mpf(0)
    for p in range(1, 257):
        cc = constants(p)
        doubled = constants(p, 2 * working_bits(p))
        with mpmath.workprec(2 * working_bits(p)):
            alt_c = -alt_binomial_log_sum(p, 1, verify=False) / p
            alt_w = -alt_binomial_log_sum(p, 2, verify=False) / p
            form_gap = max(form_gap, abs(cc.c_p - alt_c), abs(cc.w_p - alt_w))
            precision_gap = max(
                precision_gap, abs(cc.c_p - doubled.c_p), abs(cc.w_p - doubled.w_p)
            )
    assert form_gap < mpmath.ldexp(1, -64)
    assert precision_gap < mpmath.ldexp(1, -96)


def scaled_residuals(p):
    first, second = {}, {}
    for N in (50, 100, 200, 400):
        res = exact_second_moment(N, p, 1e-12)
        est = estimate(N, p)
        with mpmath.workprec(HI):
            L = mpmath.log(N)
            # |E/N - estimate/N| * N / L^2 and |E2/N^2 - estimate/N^2| * N / L^3
            first[N] = abs(to_mpf(res.mean) - est.mean_estimate) / L**2
            second[N] = abs(to_mpf(res.second_moment) - est.second_moment_estimate) / (N * L**3)
    return first, second


@criterion(5, "mean and second moment residuals stay bounded, p = 1, 2, 3")
def test_residual_trend():
    for p in (1, 2, 3):
        for scaled in scaled_residuals(p):
            assert max(scaled.values()) <= 3 * scaled[50], (p, scaled)


@criterion(6, "variance / N^2 approaches a_p, p = 1, 2")
def test_variance_coefficient():
    for p in (1, 2):
        a = constants(p).a_p
        gaps = {}
        for N in (100, 400):
            var = exact_second_moment(N, p, 1e-12).variance
            with mpmath.workprec(HI):
                gaps[N] = abs(to_mpf(var) / N**2 - a) / a
        assert gaps[400] <= 0.15, (p, gaps)
        assert gaps[400] < gaps[100], (p, gaps)


@criterion(7, "a_p positive and decreasing for p <= 200; diagnostic decreasing")
def test_conjecture_scan():
    rep = conjecture_scan(200)
    assert rep.positivity_violations == []
    assert rep.monotonicity_violations == []
    margin = mpmath.ldexp(1, -40)
    assert all(rep.a[p] - rep.a[p + 1] > margin for p in range(1, 200))
    diag = [rep.diagnostic[p] for p in (8, 16, 32, 64, 128)]
    assert all(x > y for x, y in zip(diag, diag[1:]))


@criterion(8, "alternating log sums approach their expansions")
def test_expansions():
    for power in (1, 2):
        errs = [
            abs(alt_binomial_log_sum(n, power) - flajolet_expansion(n, power))
            for n in (256, 1024, 4096)
        ]
        assert errs[0] > errs[1] > errs[2], (power, errs)


@criterion(9, "Monte Carlo calibration at N = 20, p = 1, 2, 4")
def test_monte_carlo():
    N, reps = 20, 200_000
    for p in (1, 2, 4):
        exact = exact_second_moment(N, p, 1e-12)
        mean, var = float(exact.mean), float(exact.variance)
        s = run_simulation(N, p, reps, seed=20_240)
        assert abs(s.sample_mean - mean) <= 4 * s.std_error, (p, s)
        assert abs(s.sample_variance - var) <= 0.10 * var, (p, s)
        covered = 0
        for seed in range(100):
            lo, hi = run_simulation(N, p, reps, seed).ci95
            covered += lo <= mean <= hi
        assert covered >= 90, (p, covered)


@criterion(10, "Stirling approximations improve inside their regimes")
def test_stirling_regimes():
    N = 30
    errs = []
    for m in range(2, 7):
        k = math.ceil(N * math.log(N) + m * N)
        q = float(completion_cdf(N, k))
        errs.append(abs(stirling_erdos_szekeres(k, N) - q) / q)
    assert all(x > y for x, y in zip(errs, errs[1:])), errs

    def log_err(k):
        exact = log_stirling_near_diagonal(k, louchard_block(k, 0.6))
        return abs(stirling_louchard(k, 0.6) - exact) / exact

    assert log_err(10_000) < log_err(1_000)


@criterion(11, "oracle triangle is exact, N <= 12, k <= 60")
def test_oracle_triangle():
    for N in range(1, 13):
        law = completion_law(N, 60)
        chain = markov_law_oracle(N, 60)
        for k in range(61):
            assert law.q[k] == chain.q[k] == 1 - inclusion_exclusion_survival(N, k + 1), (N, k)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-o", "addopts="]))
