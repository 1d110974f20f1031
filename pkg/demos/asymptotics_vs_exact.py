"""
How fast do the leading-order estimates kick in?
================================================

Compares the asymptotic mean and variance with the exact values as N grows.
"""
import mpmath

from mincollector import estimate, exact_second_moment

for p in (1, 2, 3):
    print(f"p = {p}")
    print("     N   exact mean   estimate   var/(a_p N^2)")
    for N in (25, 50, 100, 200, 400):
        est = estimate(N, p)
        r = exact_second_moment(N, p, 1e-10)
        ratio = mpmath.mpf(float(r.variance)) / est.variance_estimate
        print(f"{N:6d} {float(r.mean):12.4f} {float(est.mean_estimate):10.4f} {float(ratio):14.4f}")
    print()

# the estimates themselves are cheap for any N
big = estimate(10**9, 4)
print("N=1e9, p=4 mean estimate:", mpmath.nstr(big.mean_estimate, 15))
