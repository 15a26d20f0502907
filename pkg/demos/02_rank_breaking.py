"""
Pairwise counts from rankings
=============================

Breaks a handful of top-2 rankings into pairwise wins and reads off the
empirical preferences and the Copeland winners.
"""

import numpy as np

from plbattle import BattleEnvironment, PLInstance, PairwiseCounts, copeland_winners, empirical_pref

inst = PLInstance(np.array([1.0, 0.8, 0.5, 0.2]))
s = [0, 1, 2, 3]

pc = PairwiseCounts(s)
pc.update(s, (1, 0))
print("after b > a (top-2):")
print(pc.counts)

env = BattleEnvironment(inst, mode="TR", m=2, rng=np.random.default_rng(3))
pc.update_batch(s, env.play_many(s, 2000))

for i, j in [(0, 1), (0, 3), (2, 1)]:
    print(f"p_hat({i},{j}) = {empirical_pref(pc, i, j):.3f}   true {inst.thetas[i] / (inst.thetas[i] + inst.thetas[j]):.3f}")
print("Copeland winners:", copeland_winners(pc))

# each round added m*k - m(m+1)/2 = 5 comparisons
print("total comparisons:", pc.total(), "=", 5 * 2001)
