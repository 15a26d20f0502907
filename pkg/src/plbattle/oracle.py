"""Brute-force reference computations.

Nothing here calls the samplers or probability functions of
:mod:`plbattle.choice_model`; the oracle works from raw score vectors so it
can be used to check them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from .choice_model import PLInstance

__all__ = [
    "DiscreteDistribution",
    "MAX_ENUMERATION_SIZE",
    "enumerate_top_m_distribution",
    "enumerate_top_m_recursive",
    "empirical_distribution",
    "tv_distance",
    "winner_kl",
    "kl_upper_bound",
    "build_lower_bound_instances",
]

MAX_ENUMERATION_SIZE = 8


@dataclass(frozen=True)
class DiscreteDistribution:
    support: tuple
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        support = tuple(self.support)
        if probs.shape != (len(support),):
            raise ValueError("support and probabilities differ in length")
        if len(set(support)) != len(support):
            raise ValueError("support has repeated outcomes")
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-10:
            raise ValueError(f"probabilities must be non-negative and sum to 1 (sum={probs.sum()!r})")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)

    def as_dict(self) -> dict:
        return dict(zip(self.support, self.probs.tolist()))

    def prob(self, outcome: Hashable) -> float:
        return self.as_dict().get(outcome, 0.0)


def _scores(inst: PLInstance, s: Sequence[int]) -> dict[int, float]:
    items = [int(x) for x in s]
    if len(items) > MAX_ENUMERATION_SIZE:
        raise ValueError(f"subset of size {len(items)} exceeds the enumeration cap {MAX_ENUMERATION_SIZE}")
    if len(set(items)) != len(items) or not items:
        raise ValueError("subset must be non-empty with distinct items")
    theta = np.asarray(inst.thetas)
    return {i: float(theta[i]) for i in items}


def enumerate_top_m_distribution(inst: PLInstance, s: Sequence[int], m: int) -> DiscreteDistribution:
    """Exact law of top-m rankings of ``s`` by the closed-form product over every ordered m-tuple."""
    scores = _scores(inst, s)
    if not 1 <= m <= len(scores):
        raise ValueError(f"m={m} outside [1, {len(scores)}]")
    support, probs = [], []
    for ranking in itertools.permutations(scores, m):
        p = 1.0
        for pos, item in enumerate(ranking):
            rest = sum(v for x, v in scores.items() if x not in ranking[:pos])
            p *= scores[item] / rest
        support.append(ranking)
        probs.append(p)
    return DiscreteDistribution(tuple(support), np.array(probs))


def enumerate_top_m_recursive(inst: PLInstance, s: Sequence[int], m: int) -> DiscreteDistribution:
    """Same law built by marginalizing over the first winner and recursing on the rest."""
    scores = _scores(inst, s)
    if not 1 <= m <= len(scores):
        raise ValueError(f"m={m} outside [1, {len(scores)}]")

    def expand(remaining: tuple[int, ...], depth: int) -> dict[tuple, float]:
        mass = sum(scores[i] for i in remaining)
        if depth == 1:
            return {(i,): scores[i] / mass for i in remaining}
        out = {}
        for i in remaining:
            head = scores[i] / mass
            rest = tuple(j for j in remaining if j != i)
            for tail, q in expand(rest, depth - 1).items():
                out[(i,) + tail] = head * q
        return out

    table = expand(tuple(scores), m)
    support = tuple(sorted(table))
    return DiscreteDistribution(support, np.array([table[x] for x in support]))


def empirical_distribution(samples: Iterable[Hashable], support: Sequence[Hashable]) -> DiscreteDistribution:
    """Relative frequencies of ``samples`` over ``support`` (outcomes outside it are an error)."""
    index = {x: i for i, x in enumerate(support)}
    counts = np.zeros(len(index))
    for x in samples:
        try:
            counts[index[x]] += 1
        except KeyError:
            raise ValueError(f"sample {x!r} is outside the support") from None
    if counts.sum() == 0:
        raise ValueError("no samples")
    return DiscreteDistribution(tuple(support), counts / counts.sum())


def tv_distance(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    if set(p.support) != set(q.support):
        raise ValueError("distributions have different supports")
    qd = q.as_dict()
    return 0.5 * float(sum(abs(pp - qd[x]) for x, pp in zip(p.support, p.probs)))


def winner_kl(inst_a: PLInstance, inst_b: PLInstance, s: Sequence[int]) -> float:
    """KL divergence (natural log) between the winner laws of ``s`` under two instances."""
    if inst_a.n != inst_b.n:
        raise ValueError("instances have different numbers of items")
    idx = np.asarray(s, dtype=np.intp)
    pa = inst_a.thetas[idx] / inst_a.thetas[idx].sum()
    pb = inst_b.thetas[idx] / inst_b.thetas[idx].sum()
    return float(np.sum(pa * np.log(pa / pb)))


def kl_upper_bound(k: int, eps: float) -> float:
    """``(1/k) (R - 1/R)^2`` with ``R = (1/2 + eps) / (1/2 - eps)``."""
    ratio = (0.5 + eps) / (0.5 - eps)
    return (ratio - 1 / ratio) ** 2 / k


def build_lower_bound_instances(n: int, eps: float, theta: float = 1.0) -> tuple[PLInstance, list[PLInstance]]:
    """The hard instance family behind the winner-feedback lower bound.

    Item 0 plays the role of the best item. The true instance gives it
    ``theta (1/2 + eps)`` and everybody else ``theta (1/2 - eps)``. The
    alternative for item ``a`` (``a = 1 .. n-1``, in that order) squares the
    factors: ``a`` gets ``theta (1/2 + eps)^2``, item 0 gets
    ``theta (1/4 - eps^2)``, the rest ``theta (1/2 - eps)^2``, which makes
    ``a`` the unique best item.
    """
    if not 0 < eps <= 1 / math.sqrt(8):
        raise ValueError(f"eps must lie in (0, 1/sqrt(8)], got {eps}")
    if n < 2 or theta <= 0:
        raise ValueError("need n >= 2 and a positive theta")
    base = np.full(n, theta * (0.5 - eps))
    base[0] = theta * (0.5 + eps)
    alternatives = []
    for a in range(1, n):
        alt = np.full(n, theta * (0.5 - eps) ** 2)
        alt[0] = theta * (0.25 - eps**2)
        alt[a] = theta * (0.5 + eps) ** 2
        alternatives.append(PLInstance(alt))
    return PLInstance(base), alternatives
