import math
from fractions import Fraction
from math import comb

import mpmath
import pytest

from mincollector.constants import (
    alt_binomial_log_sum,
    conjecture_scan,
    find_violations,
    constants,
    flajolet_expansion,
    reciprocal_binomial_sum,
    working_bits,
)
from mincollector.errors import DomainError

TIGHT = mpmath.mpf(10) ** -30


def naive_c(p, power=1, prec=512):
    """Direct row-(p-1) sum with fresh logs, no shared tables."""
    with mpmath.workprec(prec):
        return mpmath.fsum(
            (-1) ** j * comb(p - 1, j) * mpmath.log(1 + j) ** power / (1 + j) for j in range(p)
        )


def test_p1_constants():
    cc = constants(1)
    assert cc.c_p == 0 and cc.w_p == 0
    with mpmath.workprec(256):
        assert abs(cc.a_p - mpmath.pi**2 / 6) < TIGHT


def test_p2_constants():
    cc = constants(2)
    with mpmath.workprec(256):
        ln2 = mpmath.log(2)
        assert abs(cc.c_p + ln2 / 2) < TIGHT
        assert abs(cc.w_p + ln2**2 / 2) < TIGHT
        assert abs(cc.a_p - (mpmath.pi**2 / 6 - 2 * ln2**2)) < TIGHT


def test_p3_p5_constants():
    with mpmath.workprec(256):
        ln2, ln3, ln5 = mpmath.log(2), mpmath.log(3), mpmath.log(5)
        assert abs(constants(3).c_p - (-ln2 + ln3 / 3)) < TIGHT
        assert abs(constants(5).c_p - (-4 * ln2 + 2 * ln3 + ln5 / 5)) < TIGHT


@pytest.mark.parametrize("p", [4, 7, 20, 63])
def test_matches_naive_sum(p):
    cc = constants(p)
    with mpmath.workprec(512):
        assert abs(cc.c_p - naive_c(p)) < mpmath.ldexp(1, -64)
        assert abs(cc.w_p - naive_c(p, 2)) < mpmath.ldexp(1, -64)


def test_precision_policy():
    assert working_bits(5) == 256
    assert working_bits(300) == 428
    assert working_bits(5, 1024) == 1024
    assert constants(200).precision_bits == 328


@pytest.mark.parametrize("p", [16, 32, 64, 128, 256])
def test_cancellation_bits_track_p(p):
    cc = constants(p)
    assert abs(cc.cancellation_bits - (p - 0.5 * math.log2(p))) <= 8


@pytest.mark.parametrize("p", [2, 3, 10, 50, 150, 256])
def test_error_estimate_and_sign(p):
    cc = constants(p)
    with mpmath.workprec(cc.precision_bits):
        assert cc.error_estimate <= mpmath.ldexp(1, -64) * max(abs(cc.c_p), mpmath.ldexp(1, -20))
    assert cc.c_p < 0


@pytest.mark.parametrize("p", [1, 2, 5, 17, 64])
def test_reciprocal_identity(p):
    assert reciprocal_binomial_sum(p) == Fraction(1, p)


def test_reciprocal_identity_all_up_to_64():
    assert all(reciprocal_binomial_sum(p) == Fraction(1, p) for p in range(1, 65))


# --- alternating sums and expansions ----------------------------------------


def test_altsum_small():
    assert alt_binomial_log_sum(1, 1) == 0
    with mpmath.workprec(256):
        assert abs(alt_binomial_log_sum(2, 1) - mpmath.log(2)) < TIGHT


@pytest.mark.parametrize("n", [4, 9, 30])
def test_altsum_relates_to_constants(n):
    cc = constants(n)
    with mpmath.workprec(512):
        assert abs(alt_binomial_log_sum(n, 1) + n * cc.c_p) < mpmath.ldexp(1, -60)
        assert abs(alt_binomial_log_sum(n, 2) + n * cc.w_p) < mpmath.ldexp(1, -60)


def test_altsum_brute_force_512_bits():
    with mpmath.workprec(512):
        brute = sum((-1) ** k * comb(4, k) * mpmath.log(k) ** 2 for k in range(1, 5))
        assert abs(alt_binomial_log_sum(4, 2, 512) - brute) < mpmath.ldexp(1, -400)


def test_altsum_domain():
    with pytest.raises(DomainError):
        alt_binomial_log_sum(0, 1)
    with pytest.raises(DomainError):
        alt_binomial_log_sum(5, 3)


def test_expansion_formula_at_16():
    with mpmath.workprec(128):
        g, z = mpmath.euler, mpmath.pi**2 / 6
        L = mpmath.log(16)
        want = mpmath.log(L) + g + g / L - (g**2 + z) / (2 * L**2)
        assert abs(flajolet_expansion(16, 1) - want) < mpmath.mpf(10) ** -35


def test_expansion_domain():
    with pytest.raises(DomainError):
        flajolet_expansion(2, 1)


@pytest.mark.parametrize("power,grid", [(1, (64, 256, 1024)), (2, (256, 512, 1024))])
def test_expansion_error_shrinks(power, grid):
    # for power 2 the error is not yet monotone below n = 256
    errs = [abs(alt_binomial_log_sum(n, power) - flajolet_expansion(n, power)) for n in grid]
    assert errs[0] > errs[1] > errs[2]


# --- conjecture scan ---------------------------------------------------------


def test_scan_p2_values():
    rep = conjecture_scan(2)
    assert rep.ok
    assert mpmath.nstr(rep.a[1], 7) == "1.644934"
    # pi^2/6 - 2 ln^2 2 = 0.68402803...
    assert mpmath.nstr(rep.a[2], 6) == "0.684028"


def test_scan_singleton():
    rep = conjecture_scan(1)
    assert rep.ok and list(rep.a) == [1]


def test_scan_matches_constants():
    rep = conjecture_scan(40)
    for p in (3, 17, 40):
        with mpmath.workprec(200):
            assert abs(rep.a[p] - constants(p).a_p) < mpmath.ldexp(1, -100)


def test_scan_diagnostic_at_powers_of_two():
    rep = conjecture_scan(8)
    assert sorted(rep.diagnostic) == [1, 2, 4, 8]
    for p, d in rep.diagnostic.items():
        assert abs(d - rep.a[p]) < mpmath.ldexp(1, -100)


def test_find_violations_flags_offenders():
    m = mpmath.mpf
    a = {1: m(3), 2: m(2), 3: m(2) - m(2) ** -45, 4: m(-1), 5: m(-2)}
    diag = {1: m(1), 2: m("0.5"), 4: m("0.7")}
    pos, mono, trend = find_violations(a, diag)
    assert pos == [4, 5]
    assert mono == [3]  # decrease smaller than the 2^-40 margin
    assert trend == [4]
