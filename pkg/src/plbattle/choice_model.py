"""Plackett-Luce choice model: exact probabilities and exact samplers.

Items are integers ``0 .. n-1``. A subset is any sequence of distinct item
indices; its order is the order the inverse-CDF samplers scan in. A top-m
ranking is a tuple of distinct members of the played subset, best first.

The winner of subset ``S`` is item ``i`` with probability
``theta[i] / sum(theta[S])``; a top-m ranking is produced by drawing winners
one after another without replacement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._kernels import sequential_top_m

__all__ = [
    "PLInstance",
    "CoinStream",
    "as_subset",
    "validate_ranking",
    "winner_prob",
    "pairwise_prob",
    "top_m_prob",
    "sample_winner",
    "sample_top_m",
    "sample_winner_coupled",
    "is_eps_optimal",
]


@dataclass(frozen=True)
class PLInstance:
    """A Plackett-Luce instance given by positive, finite scores.

    The score vector is copied and frozen on construction, so an instance can
    be shared freely between threads and trials.
    """

    thetas: np.ndarray

    def __post_init__(self):
        thetas = np.array(self.thetas, dtype=float).ravel()
        if thetas.size < 2:
            raise ValueError(f"need at least 2 items, got {thetas.size}")
        if not np.all(np.isfinite(thetas)) or np.any(thetas <= 0):
            raise ValueError("scores must be positive and finite")
        thetas.setflags(write=False)
        object.__setattr__(self, "thetas", thetas)

    @property
    def n(self) -> int:
        return int(self.thetas.size)

    @property
    def best_set(self) -> tuple[int, ...]:
        """All maximizers of the score vector, in increasing index order."""
        top = self.thetas.max()
        return tuple(int(i) for i in np.flatnonzero(self.thetas == top))

    @property
    def best(self) -> int:
        return self.best_set[0]

    def scaled(self, c: float) -> "PLInstance":
        return PLInstance(self.thetas * c)

    def __eq__(self, other):
        if not isinstance(other, PLInstance):
            return NotImplemented
        return np.array_equal(self.thetas, other.thetas)

    def __hash__(self):
        return hash(self.thetas.tobytes())

    def __repr__(self):
        return f"PLInstance({np.array2string(self.thetas, separator=', ')})"


def as_subset(s: Sequence[int], n: int) -> np.ndarray:
    """Validate ``s`` as a subset of ``range(n)`` and return it as an int array."""
    items = np.asarray(s, dtype=np.intp).ravel()
    if items.size == 0:
        raise ValueError("subset is empty")
    if items.min() < 0 or items.max() >= n:
        raise ValueError(f"subset {list(items)} has items outside [0, {n})")
    if np.unique(items).size != items.size:
        raise ValueError(f"subset {list(items)} has repeated items")
    return items


def validate_ranking(s: Sequence[int], r: Sequence[int]) -> tuple[int, ...]:
    ranked = tuple(int(x) for x in r)
    members = set(int(x) for x in s)
    if not 1 <= len(ranked) <= len(members):
        raise ValueError(f"ranking length {len(ranked)} not in [1, {len(members)}]")
    if len(set(ranked)) != len(ranked):
        raise ValueError(f"ranking {ranked} repeats an item")
    outside = [x for x in ranked if x not in members]
    if outside:
        raise ValueError(f"ranked items {outside} are not in the played subset")
    return ranked


def winner_prob(inst: PLInstance, s: Sequence[int], i: int) -> float:
    items = as_subset(s, inst.n)
    if i not in items:
        raise ValueError(f"item {i} is not in subset {list(items)}")
    return float(inst.thetas[i] / inst.thetas[items].sum())


def pairwise_prob(inst: PLInstance, i: int, j: int) -> float:
    """Probability that ``i`` beats ``j`` in a head-to-head duel."""
    if i == j:
        raise ValueError("pairwise preference needs two distinct items")
    ti, tj = inst.thetas[i], inst.thetas[j]
    return float(ti / (ti + tj))


def top_m_prob(inst: PLInstance, s: Sequence[int], r: Sequence[int]) -> float:
    """Probability that the first ``len(r)`` places of a ranking of ``s`` are ``r``."""
    items = as_subset(s, inst.n)
    ranked = validate_ranking(items, r)
    # re-sum what is left at each step; subtracting from the total cancels badly
    left = [int(x) for x in items]
    prob = 1.0
    for item in ranked:
        prob *= float(inst.thetas[item]) / sum(float(inst.thetas[x]) for x in left)
        left.remove(item)
    return prob


def sample_top_m(inst: PLInstance, s: Sequence[int], m: int, rng: np.random.Generator) -> tuple[int, ...]:
    """Draw a top-m ranking of ``s`` by sequential winner sampling.

    Consumes exactly ``m`` uniforms from ``rng``, one per rank position.
    """
    items = as_subset(s, inst.n)
    if not 1 <= m <= items.size:
        raise ValueError(f"m={m} outside [1, {items.size}]")
    out = np.empty((1, m), dtype=np.intp)
    sequential_top_m(inst.thetas[items], rng.random((1, m)), out)
    return tuple(int(x) for x in items[out[0]])


def sample_winner(inst: PLInstance, s: Sequence[int], rng: np.random.Generator) -> int:
    return sample_top_m(inst, s, 1, rng)[0]


@dataclass
class CoinStream:
    """I.i.d. Bernoulli(p) coins ``Z_1, Z_2, ...`` with a counter of coins used.

    ``history`` keeps every coin handed out so that a coupled run can be
    replayed or inspected afterwards.
    """

    p: float
    rng: np.random.Generator
    count: int = 0
    history: list = field(default_factory=list)

    @classmethod
    def for_pair(cls, inst: PLInstance, i: int, j: int, rng: np.random.Generator) -> "CoinStream":
        return cls(pairwise_prob(inst, i, j), rng)

    def next(self) -> int:
        z = int(self.rng.random() < self.p)
        self.count += 1
        self.history.append(z)
        return z


def sample_winner_coupled(
    inst: PLInstance,
    s: Sequence[int],
    i: int,
    j: int,
    coins: CoinStream,
    rng: np.random.Generator,
) -> int:
    """Draw a winner of ``s`` through the pair-coupled construction.

    With probability ``(theta_i + theta_j) / sum(theta[s])`` the next coin of
    ``coins`` decides between ``i`` (coin = 1) and ``j`` (coin = 0); otherwise
    the winner is drawn from ``s`` without ``i`` and ``j``. The coins must be
    Bernoulli(``theta_i / (theta_i + theta_j)``) for the output to have the
    plain winner law.
    """
    items = as_subset(s, inst.n)
    if i == j or i not in items or j not in items:
        raise ValueError(f"items {i}, {j} must be two distinct members of {list(items)}")
    rest = items[(items != i) & (items != j)]
    if rest.size == 0:
        return i if coins.next() else j
    pair_mass = float(inst.thetas[i] + inst.thetas[j])
    total = pair_mass + float(inst.thetas[rest].sum())
    if rng.random() * total < pair_mass:
        return i if coins.next() else j
    return sample_winner(inst, rest, rng)


def is_eps_optimal(inst: PLInstance, i: int, eps: float) -> bool:
    """True when ``i`` beats a best item with probability above ``1/2 - eps``."""
    best = inst.best
    if i == best or inst.thetas[i] == inst.thetas[best]:
        return True
    return pairwise_prob(inst, i, best) > 0.5 - eps
