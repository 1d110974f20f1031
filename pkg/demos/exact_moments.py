"""
Exact moments of the first of p collectors to finish
====================================================

Tabulates E[M], E[M^2] and Var[M] for a few (N, p) pairs and checks the
single-collector case against N * H_N.
"""
from fractions import Fraction

from mincollector import exact_mean, exact_second_moment, pair_closed_form_mean
from mincollector.stirling import completion_law

# the completion law of one collector with 4 coupon types
law = completion_law(4, 12)
for k, q in enumerate(law.q):
    print(f"P(T <= {k:2d}) = {q}  ({float(q):.6f})")

# for small N the sums are carried out in exact rational arithmetic
r = exact_second_moment(2, 2, 1e-15)
print("\nN=2, p=2:", float(r.mean), "(exact value 7/3), variance", float(r.variance))

# one collector: the mean should be N * H_N
N = 30
H = sum(Fraction(1, j) for j in range(1, N + 1))
print(f"\nN={N}, p=1: series {float(exact_mean(N, 1).mean):.12f}, N*H_N {float(N * H):.12f}")

# two collectors have a closed-form double sum
print(f"N={N}, p=2: series {float(exact_mean(N, 2).mean):.12f}, "
      f"closed form {float(pair_closed_form_mean(N)):.12f}")

# larger N switches to 256-bit fixed point arithmetic
print("\n  N   p        mean     variance   terms  mode")
for N in (10, 50, 200):
    for p in (1, 3, 10):
        r = exact_second_moment(N, p, 1e-10)
        print(f"{N:4d} {p:3d} {float(r.mean):11.4f} {float(r.variance):12.3f} {r.terms_used:7d}  {r.mode}")
