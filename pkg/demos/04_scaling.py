"""
How the budgets scale
=====================

Closed-form round counts over n, k and m, plus a small seeded sweep written
as CSV (the same table the command line tool prints).
"""

from plbattle.algorithms import PacParams, divide_and_battle_budget, trace_the_best_budget
from plbattle.harness import ExperimentConfig, format_csv, scaling_sweep

eps, delta = 0.1, 0.1

print("Trace-the-Best, winner feedback, n=100:")
for k in (2, 5, 10, 20):
    print(f"  k={k:2d}: {trace_the_best_budget(PacParams(100, k, eps, delta)):>9,d} rounds")

print("Trace-the-Best, top-m feedback, n=20, k=5:")
for m in range(1, 6):
    print(f"  m={m}: {trace_the_best_budget(PacParams(20, 5, eps, delta, m=m), m):>9,d} rounds")

print("Divide-and-Battle, winner feedback, k=5:")
for n in (20, 50, 100, 200):
    print(f"  n={n:3d}: {divide_and_battle_budget(PacParams(n, 5, eps, delta)):>10,d} rounds")

cfg = ExperimentConfig(algo="trace-tr", m=1, n=20, k=5, eps=eps, delta=delta, trials=50)
print(format_csv(scaling_sweep(cfg, "m", [1, 3, 5])))
