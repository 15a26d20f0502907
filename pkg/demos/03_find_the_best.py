"""
Finding a near-best item
========================

Runs all five algorithms on the same instance and compares what they spend.
"""

import numpy as np

from plbattle import ALGORITHMS, BattleEnvironment, PacParams, is_eps_optimal, theory_budget
from plbattle.instances import generate_instance

n, k, eps, delta = 30, 5, 0.1, 0.1
inst = generate_instance("one-good:1,0.6", n)

for name, algo in ALGORITHMS.items():
    tr = name.endswith("-tr")
    p = PacParams(n, k, eps, delta, m=3 if tr else 1)
    env = BattleEnvironment(
        inst, mode="TR" if tr else "WI", m=p.m, rng=np.random.default_rng(0), k=k,
        variable_size=name == "halving",
    )
    res = algo(env, p, rng=1)
    print(
        f"{name:10s} chose {res.chosen:2d} (eps-optimal: {is_eps_optimal(inst, res.chosen, eps)})"
        f"  rounds {res.rounds_used:>9,d}  closed form {theory_budget(name, p):>9,d}"
    )

# Trace-the-Best keeps a running winner; the trace shows every hand-over
p = PacParams(n, k, eps, delta)
res = ALGORITHMS["trace-wi"](BattleEnvironment(inst, rng=np.random.default_rng(0)), p, rng=1)
print([(step["running"], step["next_running"]) for step in res.trace])
