"""Pairwise win counts built by breaking top-m rankings into duels.

A top-m ranking ``(r1, ..., rm)`` of a played subset ``S`` is read as
``r1`` beating everybody else in ``S``, ``r2`` beating everybody in ``S``
except ``r1``, and so on down to ``rm``. Unranked items never gain wins.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Sequence

import numpy as np

from .choice_model import validate_ranking

__all__ = [
    "PairwiseCounts",
    "rank_break_update",
    "empirical_pref",
    "copeland_winners",
    "appearance_counts",
    "increments_per_update",
]

# above this many possible codes the batch tally sorts instead of bincounting
_BINCOUNT_LIMIT = 1 << 20


def increments_per_update(k: int, m: int) -> int:
    """Number of unit increments one top-m ranking of a k-subset produces."""
    return m * k - m * (m + 1) // 2


class PairwiseCounts:
    """Dense win-count matrix ``w[i, j]`` over a fixed universe of items.

    ``w[i, j]`` counts how often ``i`` was placed ahead of ``j``. Rows and
    columns follow the order of ``universe``; lookups take item ids.
    """

    def __init__(self, universe: Sequence[int]):
        self.universe = tuple(int(x) for x in universe)
        if len(set(self.universe)) != len(self.universe):
            raise ValueError("universe has repeated items")
        self._pos = {item: p for p, item in enumerate(self.universe)}
        self.counts = np.zeros((len(self.universe), len(self.universe)), dtype=np.int64)

    def __repr__(self):
        return f"PairwiseCounts(universe={self.universe}, total={self.total()})"

    def index(self, item: int) -> int:
        try:
            return self._pos[int(item)]
        except KeyError:
            raise ValueError(f"item {item} is not tracked by these counts") from None

    def wins(self, i: int, j: int) -> int:
        return int(self.counts[self.index(i), self.index(j)])

    def comparisons(self, i: int, j: int) -> int:
        return self.wins(i, j) + self.wins(j, i)

    def total(self) -> int:
        return int(self.counts.sum())

    def update(self, s: Sequence[int], r: Sequence[int], weight: int = 1) -> "PairwiseCounts":
        ranked = validate_ranking(s, r)
        rows = [self.index(x) for x in ranked]
        cols = np.array([self.index(x) for x in s])
        alive = np.ones(cols.size, dtype=bool)
        where = {int(x): p for p, x in enumerate(s)}
        for row, item in zip(rows, ranked):
            alive[where[item]] = False
            self.counts[row, cols[alive]] += weight
        return self

    def update_batch(self, s: Sequence[int], rankings: np.ndarray) -> "PairwiseCounts":
        """Rank-break every row of ``rankings`` (shape ``(rounds, m)``, item ids).

        Equivalent to calling :meth:`update` once per row, but tallies the
        distinct ranking patterns first so the cost is independent of the
        number of rounds beyond one pass over the array.
        """
        rankings = np.asarray(rankings)
        if rankings.ndim != 2 or rankings.shape[0] == 0:
            return self
        s = np.asarray(s, dtype=np.intp)
        k, m = s.size, rankings.shape[1]
        lut = np.full(int(max(s.max(), rankings.max())) + 1, -1, dtype=np.intp)
        lut[s] = np.arange(k)
        local = lut[rankings]
        if np.any(local < 0):
            raise ValueError("ranking references an item outside the played subset")
        cols = np.array([self.index(x) for x in s])

        if m == 1:
            tally = np.bincount(local[:, 0], minlength=k)
            for p in np.flatnonzero(tally):
                others = np.delete(cols, p)
                self.counts[cols[p], others] += tally[p]
            return self

        radix = k ** np.arange(m - 1, -1, -1, dtype=np.int64)
        codes = local.astype(np.int64) @ radix
        if k**m <= _BINCOUNT_LIMIT:
            tally = np.bincount(codes, minlength=k**m)
            patterns = np.flatnonzero(tally)
            weights = tally[patterns]
        else:
            patterns, weights = np.unique(codes, return_counts=True)
        for code, weight in zip(patterns, weights):
            digits = (int(code) // radix) % k
            alive = np.ones(k, dtype=bool)
            for p in digits:
                alive[p] = False
                self.counts[cols[p], cols[alive]] += weight
        return self

    def pref(self, i: int, j: int) -> float:
        return empirical_pref(self, i, j)

    def copeland_scores(self, universe: Sequence[int] | None = None) -> dict[int, int]:
        items = self.universe if universe is None else tuple(int(x) for x in universe)
        idx = np.array([self.index(x) for x in items])
        sub = self.counts[np.ix_(idx, idx)]
        beats = sub >= sub.T
        np.fill_diagonal(beats, False)
        return {item: int(score) for item, score in zip(items, beats.sum(axis=1))}


def rank_break_update(pc: PairwiseCounts, s: Sequence[int], r: Sequence[int]) -> PairwiseCounts:
    return pc.update(s, r)


def empirical_pref(pc: PairwiseCounts, i: int, j: int) -> float:
    """``w_ij / (w_ij + w_ji)``, or exactly 1/2 when the pair was never compared."""
    if i == j:
        raise ValueError("empirical preference needs two distinct items")
    wij, wji = pc.wins(i, j), pc.wins(j, i)
    if wij + wji == 0:
        return 0.5
    return wij / (wij + wji)


def copeland_winners(pc: PairwiseCounts, universe: Sequence[int] | None = None) -> list[int]:
    """Items of ``universe`` with the most opponents ``j`` such that ``w_ij >= w_ji``.

    Returned in increasing item order; ties are all kept.
    """
    scores = pc.copeland_scores(universe)
    best = max(scores.values())
    return sorted(item for item, score in scores.items() if score == best)


def appearance_counts(s: Sequence[int], history: Iterable[Sequence[int]]) -> dict[int, int]:
    """How many of the rankings in ``history`` include each item of ``s``."""
    q = Counter({int(x): 0 for x in s})
    for ranking in history:
        for item in ranking:
            if int(item) not in q:
                raise ValueError(f"item {item} is not in the played subset")
            q[int(item)] += 1
    return dict(q)
