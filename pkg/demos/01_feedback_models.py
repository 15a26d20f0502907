"""
Winner, top-m and full-ranking feedback
=======================================

Plays one subset of a small instance under each feedback mode and compares
the observed ranking frequencies with the exact law.
"""

import numpy as np

from plbattle import BattleEnvironment, PLInstance, top_m_prob
from plbattle.oracle import enumerate_top_m_distribution, tv_distance
from plbattle.validation import tally_rankings

inst = PLInstance(np.array([2.0, 1.0, 1.0, 0.5]))
subset = (0, 1, 2, 3)

# the probability of seeing item 0 first, then item 1
print("P(0 then 1) =", top_m_prob(inst, subset, (0, 1)))

for mode, m in [("WI", 1), ("TR", 2), ("FR", 4)]:
    env = BattleEnvironment(inst, mode=mode, m=m, rng=np.random.default_rng(0))
    draws = env.play_many(subset, 50_000)
    exact = enumerate_top_m_distribution(inst, subset, draws.shape[1])
    tv = tv_distance(tally_rankings(draws, exact.support), exact)
    print(f"{mode}: {draws.shape[1]} places per round, {env.rounds} rounds, TV to exact law {tv:.4f}")

# one round counts as one round however many places come back
env = BattleEnvironment(inst, mode="FR", rng=np.random.default_rng(1))
print(env.play(subset), "rounds so far:", env.rounds)
