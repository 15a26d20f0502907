"""Statistical and exhaustive checks of the samplers against the oracle.

Each function returns what it measured; the pass/fail thresholds live with
the callers (the ``oracle-check`` command and the acceptance tests).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .choice_model import (
    CoinStream,
    PLInstance,
    pairwise_prob,
    sample_top_m,
    sample_winner,
    sample_winner_coupled,
)
from .environment import BattleEnvironment
from .oracle import (
    DiscreteDistribution,
    build_lower_bound_instances,
    enumerate_top_m_distribution,
    enumerate_top_m_recursive,
    kl_upper_bound,
    tv_distance,
    winner_kl,
)
from .rank_breaking import appearance_counts

__all__ = [
    "SamplerCell",
    "tally_rankings",
    "sampler_exactness",
    "enumeration_agreement",
    "coupling_check",
    "pair_deviation_frequency",
    "pigeonhole_violations",
    "transitivity_violations",
    "kl_bound_check",
]


@dataclass(frozen=True)
class SamplerCell:
    instance: int
    subset: tuple[int, ...]
    m: int
    tv: float


def tally_rankings(rankings: np.ndarray, support: tuple) -> DiscreteDistribution:
    """Empirical distribution of the rows of ``rankings`` over ``support``."""
    rows, counts = np.unique(rankings, axis=0, return_counts=True)
    observed = {tuple(int(x) for x in row): int(c) for row, c in zip(rows, counts)}
    extra = set(observed) - set(support)
    if extra:
        raise ValueError(f"rankings outside the support: {sorted(extra)[:3]}")
    total = counts.sum()
    return DiscreteDistribution(support, np.array([observed.get(x, 0) / total for x in support]))


def sampler_exactness(
    n_instances: int = 20,
    max_size: int = 5,
    draws: int = 100_000,
    seed: int = 0,
) -> list[SamplerCell]:
    """TV distance between sampled and exact top-m laws, for every size <= ``max_size`` and every m."""
    rng = np.random.default_rng(seed)
    cells = []
    for idx in range(n_instances):
        inst = PLInstance(rng.uniform(0.05, 1.0, size=max_size))
        env = BattleEnvironment(inst, mode="TR", rng=np.random.default_rng(rng.integers(2**63)))
        for size in range(1, max_size + 1):
            subset = tuple(int(x) for x in rng.choice(max_size, size=size, replace=False))
            for m in range(1, size + 1):
                env.m = m
                exact = enumerate_top_m_distribution(inst, subset, m)
                sampled = tally_rankings(env.play_many(subset, draws), exact.support)
                cells.append(SamplerCell(idx, subset, m, tv_distance(sampled, exact)))
    return cells


def enumeration_agreement(n_instances: int = 20, max_size: int = 6, seed: int = 0) -> float:
    """Largest gap between the product-formula and recursive enumerations."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_instances):
        inst = PLInstance(rng.uniform(0.05, 1.0, size=max_size))
        for size in range(1, max_size + 1):
            subset = tuple(int(x) for x in rng.choice(max_size, size=size, replace=False))
            for m in range(1, size + 1):
                a = enumerate_top_m_distribution(inst, subset, m).as_dict()
                b = enumerate_top_m_recursive(inst, subset, m).as_dict()
                if set(a) != set(b):
                    return math.inf
                worst = max(worst, max(abs(a[x] - b[x]) for x in a))
    return worst


def coupling_check(
    inst: PLInstance,
    subset: tuple[int, ...],
    i: int,
    j: int,
    draws: int = 100_000,
    seed: int = 0,
) -> dict:
    """Winner law and pair-conditional frequency of the coupled sampler."""
    streams = np.random.SeedSequence(seed).spawn(2)
    coins = CoinStream.for_pair(inst, i, j, np.random.default_rng(streams[0]))
    rng = np.random.default_rng(streams[1])
    wins = [sample_winner_coupled(inst, subset, i, j, coins, rng) for _ in range(draws)]
    exact = enumerate_top_m_distribution(inst, subset, 1)
    sampled = tally_rankings(np.array(wins)[:, None], exact.support)
    n_i = sum(w == i for w in wins)
    n_ij = n_i + sum(w == j for w in wins)
    return {
        "tv": tv_distance(sampled, exact),
        "conditional": n_i / n_ij if n_ij else math.nan,
        "target": pairwise_prob(inst, i, j),
        "pair_draws": n_ij,
        "coins_used": coins.count,
    }


def pair_deviation_frequency(
    thetas=(0.3, 0.2) + (1.0,) * 8,
    i: int = 0,
    j: int = 1,
    rounds: int = 2000,
    reps: int = 500,
    eta: float = 0.1,
    v: int = 200,
    seed: int = 0,
) -> dict:
    """Frequency of ``n_i/n_ij - p_ij >= eta`` with ``n_ij >= v`` over repeated winner-feedback runs.

    Each round plays ``{i, j}`` plus a random selection of the other items
    (each included with probability 1/2), so the played sets vary from round
    to round as the deviation bound allows.
    """
    inst = PLInstance(np.array(thetas, dtype=float))
    others = np.array([x for x in range(inst.n) if x not in (i, j)])
    rng = np.random.default_rng(seed)
    target = pairwise_prob(inst, i, j)
    upper = lower = 0
    pair_counts = []
    for _ in range(reps):
        n_i = n_j = 0
        masks = rng.random((rounds, others.size)) < 0.5
        for mask in masks:
            subset = [i, j, *others[mask]]
            w = sample_winner(inst, subset, rng)
            n_i += w == i
            n_j += w == j
        n_ij = n_i + n_j
        pair_counts.append(n_ij)
        if n_ij >= v:
            upper += n_i / n_ij - target >= eta
            lower += n_i / n_ij - target <= -eta
    return {
        "upper_freq": upper / reps,
        "lower_freq": lower / reps,
        "bound": math.exp(-2 * v * eta**2),
        "mean_pair_count": float(np.mean(pair_counts)),
        "reps": reps,
    }


def pigeonhole_violations(histories: int = 1000, seed: int = 0) -> int:
    """Count histories where the most frequent top-m item shows up fewer than ceil(mt/k) times."""
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(histories):
        k = int(rng.integers(2, 9))
        m = int(rng.integers(1, k + 1))
        t = int(rng.integers(1, 60))
        inst = PLInstance(rng.uniform(0.05, 1.0, size=k))
        subset = tuple(range(k))
        history = [sample_top_m(inst, subset, m, rng) for _ in range(t)]
        q = appearance_counts(subset, history)
        if max(q.values()) < math.ceil(m * t / k):
            bad += 1
    return bad


def _shifted(theta_x: float, theta_y: float) -> float:
    return theta_x / (theta_x + theta_y) - 0.5


def transitivity_violations(triples: int = 1000, pairs_per_triple: int = 20, seed: int = 0) -> int:
    """Violations of: shifted p_ba > -e1 and p_cb > -e2 imply p_ca > -(e1 + e2).

    For each random ordered triple the tightest admissible (e1, e2), just
    above the premises' limits, is tried together with random pairs.
    """
    rng = np.random.default_rng(seed)
    bad = 0
    checked = 0
    while checked < triples:
        a, b, c = np.sort(rng.uniform(0.01, 1.0, size=3))[::-1]
        if not a > b > c:
            continue
        checked += 1
        pba, pcb, pca = _shifted(b, a), _shifted(c, b), _shifted(c, a)
        tight = (-pba + 1e-12, -pcb + 1e-12)
        candidates = [tight] + [tuple(rng.uniform(0, 0.5, size=2)) for _ in range(pairs_per_triple)]
        for e1, e2 in candidates:
            if e1 <= 0 or e2 <= 0 or e1 + e2 >= 0.5:
                continue
            if pba > -e1 and pcb > -e2 and not pca > -(e1 + e2):
                bad += 1
    return bad


def kl_bound_check(configs: int = 100, seed: int = 0) -> dict:
    """Worst excess of the exact winner KL over ``(1/k)(R - 1/R)^2`` on the hard instance family."""
    rng = np.random.default_rng(seed)
    worst_gap = -math.inf
    subsets = 0
    for _ in range(configs):
        k = int(rng.integers(2, 9))
        n = int(rng.integers(k, k + 4))
        eps = float(rng.uniform(1e-3, 1 / math.sqrt(8)))
        true, alternatives = build_lower_bound_instances(n, eps, float(rng.uniform(0.1, 10)))
        a = int(rng.integers(1, n))
        alt = alternatives[a - 1]
        rest = [x for x in range(n) if x != a]
        bound = kl_upper_bound(k, eps)
        for chosen in itertools.combinations(rest, k - 1):
            kl = winner_kl(true, alt, (a, *chosen))
            worst_gap = max(worst_gap, kl - bound)
            subsets += 1
    return {"worst_gap": worst_gap, "subsets": subsets}
