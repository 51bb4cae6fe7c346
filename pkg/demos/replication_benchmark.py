"""Adaptive vs fixed bandwidths over seeded replications.

For two noise levels, simulates ten datasets each, tunes both methods
by leave-one-out MAE on every replication, and tests whether the
adaptive method's error is systematically lower (one-sided paired t).

Run: python3 demos/replication_benchmark.py    (about a minute)
"""

from spatialknn import benchmark_replications

print("10x10 lattice, dependence a = 5, 10 replications per cell\n")
print(f"{'sigma^2':>7s} {'adaptive MAE':>13s} {'fixed MAE':>10s} "
      f"{'t':>7s} {'p (one-sided)':>14s}")

for sigma in (0.1, 5.0):
    res = benchmark_replications((10, 10), a=5.0, sigma=sigma, n_reps=10, base_seed=0)
    print(f"{sigma:7.1f} {res.knn.mean:13.4f} {res.nw.mean:10.4f} "
          f"{res.t_stat:7.2f} {res.p_value:14.2e}")

print()
print("positive t: the fixed-bandwidth errors exceed the adaptive ones on")
print("average across replications. Each replication r uses seed base+r,")
print("so rerunning this script reproduces the table exactly.")
