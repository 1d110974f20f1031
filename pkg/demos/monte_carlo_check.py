"""
Monte Carlo against exact moments
=================================

Simulated minima use numpy's PCG64 with one jumped substream per block of
replications, so a run is reproducible from its seed alone.
"""
from mincollector import exact_second_moment, run_simulation

N, reps, seed = 20, 100_000, 7
for p in (1, 2, 4):
    exact = exact_second_moment(N, p, 1e-12)
    s = run_simulation(N, p, reps, seed)
    z = (s.sample_mean - float(exact.mean)) / s.std_error
    print(f"p={p}: exact mean {float(exact.mean):.4f}, sample {s.sample_mean:.4f} "
          f"(z = {z:+.2f}), 95% CI [{s.ci95[0]:.3f}, {s.ci95[1]:.3f}]")
    print(f"      exact variance {float(exact.variance):.3f}, sample {s.sample_variance:.3f}")

# coverage of the nominal 95% interval over many seeds
exact = float(exact_second_moment(10, 2, 1e-12).mean)
hits = sum(lo <= exact <= hi for lo, hi in (run_simulation(10, 2, 5000, sd).ci95 for sd in range(200)))
print(f"\ncoverage at N=10, p=2 over 200 seeds: {hits}/200")
