"""
Approximating Stirling numbers of the second kind
=================================================

Two regimes: k / ln k > N, where q_k is close to exp((k/2N - N) e^{-k/N}),
and N = k - k^alpha with 1/2 < alpha < 1, where a large-deviation formula
gives ln S(k, N).
"""
import math

from mincollector.asymptotics import (
    log_stirling_near_diagonal,
    louchard_block,
    regime_of,
    stirling_erdos_szekeres,
    stirling_louchard,
    threshold_c_N,
)
from mincollector.stirling import completion_cdf

N = 30
print(f"N={N}: regime starts at k = N + {threshold_c_N(N)}")
for m in range(2, 7):
    k = math.ceil(N * math.log(N) + m * N)
    q = float(completion_cdf(N, k))
    approx = stirling_erdos_szekeres(k, N)
    print(f"  k={k:4d} ({regime_of(k, N)})  q_k={q:.8f}  approx={approx:.8f}  rel err={abs(approx - q) / q:.2e}")

print("\nalpha = 0.6")
for k in (1000, 3000, 10_000):
    m = louchard_block(k, 0.6)
    exact = log_stirling_near_diagonal(k, m)
    approx = stirling_louchard(k, 0.6)
    print(f"  k={k:6d}  m={m:4d}  ln S exact={exact:12.3f}  approx={approx:12.3f}  "
          f"rel err={abs(approx - exact) / exact:.2e}")
