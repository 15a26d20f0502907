"""The query interface algorithms use: play a subset, get ranked feedback."""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from ._kernels import sequential_top_m
from .choice_model import PLInstance, as_subset

__all__ = ["BattleEnvironment", "FEEDBACK_MODES"]

FEEDBACK_MODES = ("WI", "TR", "FR")

CHUNK_ROUNDS = 1 << 16


class BattleEnvironment:
    """Hidden Plackett-Luce instance behind a round-counting play interface.

    Feedback modes:

    * ``"WI"``: the winner only (a ranking of length 1);
    * ``"TR"``: the top ``m`` places;
    * ``"FR"``: the full ranking of whatever subset was played.

    ``k`` fixes the size of every played subset. With ``variable_size=True``
    any size from 1 up to ``k`` is accepted instead, which is what
    Halving-Battle needs.

    Every round consumes exactly ``m`` uniforms from ``rng`` (row-major), so
    ``play`` called ``t`` times and ``play_many(s, t)`` see the same draws.
    """

    def __init__(
        self,
        instance: PLInstance,
        mode: str = "WI",
        m: int = 1,
        rng: np.random.Generator | None = None,
        k: int | None = None,
        variable_size: bool = False,
    ):
        if mode not in FEEDBACK_MODES:
            raise ValueError(f"unknown feedback mode {mode!r}")
        if mode == "WI":
            m = 1
        if m < 1:
            raise ValueError(f"m must be at least 1, got {m}")
        if k is not None and not 1 <= k <= instance.n:
            raise ValueError(f"k={k} outside [1, {instance.n}]")
        self._instance = instance
        self.mode = mode
        self.m = m
        self.k = k
        self.variable_size = variable_size
        self.rng = rng if rng is not None else np.random.default_rng()
        self.rounds = 0

    @property
    def n(self) -> int:
        return self._instance.n

    def __repr__(self):
        return f"BattleEnvironment(n={self.n}, mode={self.mode!r}, m={self.m}, rounds={self.rounds})"

    def ranking_length(self, size: int) -> int:
        if self.mode == "FR":
            return size
        return self.m

    def _check(self, s: Sequence[int]) -> np.ndarray:
        items = as_subset(s, self.n)
        if self.k is not None:
            if self.variable_size:
                if items.size > self.k:
                    raise ValueError(f"subset of size {items.size} exceeds k={self.k}")
            elif items.size != self.k:
                raise ValueError(f"subset of size {items.size}, environment plays k={self.k}")
        if self.ranking_length(items.size) > items.size:
            raise ValueError(f"top-{self.m} feedback needs at least {self.m} items, got {items.size}")
        return items

    def play(self, s: Sequence[int]) -> tuple[int, ...]:
        """One round of battle; returns the ranking (best first) as item ids."""
        return tuple(int(x) for x in self.play_many(s, 1)[0])

    def play_chunks(self, s: Sequence[int], rounds: int) -> Iterator[np.ndarray]:
        """Play ``s`` for ``rounds`` rounds, yielding rankings in bounded chunks.

        Each chunk is an array of item ids of shape ``(chunk_rounds, m)``. The
        round counter advances as chunks are produced.
        """
        items = self._check(s)
        m = self.ranking_length(items.size)
        weights = np.ascontiguousarray(self._instance.thetas[items])
        left = int(rounds)
        while left > 0:
            size = min(left, CHUNK_ROUNDS)
            local = np.empty((size, m), dtype=np.intp)
            sequential_top_m(weights, self.rng.random((size, m)), local)
            self.rounds += size
            left -= size
            yield items[local]

    def play_many(self, s: Sequence[int], rounds: int) -> np.ndarray:
        chunks = list(self.play_chunks(s, rounds))
        if not chunks:
            return np.empty((0, self.ranking_length(len(s))), dtype=np.intp)
        return np.concatenate(chunks)
