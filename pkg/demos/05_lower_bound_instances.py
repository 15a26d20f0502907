"""
The hard instances behind the winner-feedback lower bound
=========================================================

Builds the instance family, shows how little one winner draw tells the
instances apart, and checks the KL bound over every subset of a small case.
"""

import itertools

from plbattle.oracle import build_lower_bound_instances, kl_upper_bound, winner_kl

n, eps = 6, 0.1
true, alternatives = build_lower_bound_instances(n, eps)
print("true instance:       ", true.thetas)
print("alternative for a=2: ", alternatives[1].thetas)

for k in (2, 3, 4, 6):
    a = 2
    rest = [x for x in range(n) if x != a]
    worst = max(winner_kl(true, alternatives[a - 1], (a, *c)) for c in itertools.combinations(rest, k - 1))
    print(f"k={k}: largest KL {worst:.5f}   bound {kl_upper_bound(k, eps):.5f}")
