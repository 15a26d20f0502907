"""(eps, delta)-PAC best-item identification by subset battles.

Five algorithms, all driven through :class:`~plbattle.environment.BattleEnvironment`:

* ``trace_the_best_wi`` / ``trace_the_best_tr``: keep a running winner and
  battle it against fresh batches of ``k - 1`` challengers.
* ``divide_and_battle_wi`` / ``divide_and_battle_tr``: split survivors into
  groups of ``k``, keep one per group, recurse.
* ``halving_battle``: keep the upper half (by win count) of every group;
  needs an environment that accepts subsets smaller than ``k``.

Every random structural choice (first running winner, challenger batches,
group composition, padding) comes from the ``rng`` passed to the algorithm,
never from the environment's feedback stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .environment import BattleEnvironment
from .rank_breaking import PairwiseCounts, copeland_winners

__all__ = [
    "PacParams",
    "AlgorithmResult",
    "trace_the_best_wi",
    "trace_the_best_tr",
    "divide_and_battle_wi",
    "divide_and_battle_tr",
    "halving_battle",
    "ALGORITHMS",
    "trace_rounds",
    "trace_iterations",
    "trace_the_best_budget",
    "divide_schedule",
    "divide_rounds",
    "divide_and_battle_plan",
    "divide_and_battle_budget",
    "halving_schedule",
    "halving_rounds",
    "halving_battle_budget",
    "theory_budget",
]


@dataclass(frozen=True)
class PacParams:
    n: int
    k: int
    eps: float
    delta: float
    m: int = 1

    def __post_init__(self):
        if not 2 <= self.k <= self.n:
            raise ValueError(f"need 2 <= k <= n, got k={self.k}, n={self.n}")
        if not 1 <= self.m <= self.k:
            raise ValueError(f"need 1 <= m <= k, got m={self.m}, k={self.k}")
        if not 0 < self.eps <= 0.5:
            raise ValueError(f"eps must lie in (0, 1/2], got {self.eps}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")


@dataclass
class AlgorithmResult:
    chosen: int
    rounds_used: int
    iterations: int
    trace: list[dict] = field(default_factory=list)


# -- round budgets ---------------------------------------------------------


def trace_rounds(p: PacParams, m: int = 1) -> int:
    """Rounds per Trace-the-Best iteration: ceil(2k / (m eps^2) * ln(2n / delta))."""
    return math.ceil(2 * p.k / (m * p.eps**2) * math.log(2 * p.n / p.delta))


def trace_iterations(n: int, k: int) -> int:
    """Iterations Trace-the-Best runs: the first batch takes k items, each later one k - 1 new."""
    return 1 + math.ceil((n - k) / (k - 1))


def trace_the_best_budget(p: PacParams, m: int = 1) -> int:
    return trace_iterations(p.n, p.k) * trace_rounds(p, m)


def divide_schedule(eps: float, delta: float, level: int) -> tuple[float, float]:
    """(eps_l, delta_l) for Divide-and-Battle level ``level`` >= 1.

    eps_l = (eps/8)(3/4)^(l-1) and delta_l = delta / 2^(l+1); the error
    terms over all levels plus the final (eps/2, delta/2) phase sum to at
    most (eps, delta).
    """
    return eps / 8 * 0.75 ** (level - 1), delta / 2 ** (level + 1)


def divide_rounds(k: int, eps_l: float, delta_l: float, m: int | None = None) -> int:
    """Group play length: WI when ``m`` is None, otherwise the top-m version."""
    if m is None:
        return math.ceil(k / (2 * eps_l**2) * math.log(k / delta_l))
    return math.ceil(4 * k / (m * eps_l**2) * math.log(2 * k / delta_l))


def _partition(items: list[int], k: int) -> tuple[list[list[int]], list[int]]:
    groups = [items[i : i + k] for i in range(0, len(items), k)]
    if groups and len(groups[-1]) < k:
        return groups[:-1], groups[-1]
    return groups, []


def divide_and_battle_plan(p: PacParams, m: int | None = None) -> list[tuple[str, int, int]]:
    """Deterministic play schedule of Divide-and-Battle as ``(phase, groups, rounds_per_group)``.

    Survivor counts depend only on ``n`` and ``k``, so the whole schedule,
    and hence the round budget, is fixed before any feedback is seen.
    """
    plan = []
    size, level = p.n, 1
    while size > p.k:
        groups = size // p.k
        leftover = size - groups * p.k
        plan.append(("level", groups, divide_rounds(p.k, *divide_schedule(p.eps, p.delta, level), m)))
        size = groups + leftover
        level += 1
    if size > 1 or not plan:
        plan.append(("final", 1, divide_rounds(p.k, p.eps / 2, p.delta / 2, m)))
    return plan


def divide_and_battle_budget(p: PacParams, m: int | None = None) -> int:
    return sum(groups * t for _, groups, t in divide_and_battle_plan(p, m))


def halving_schedule(eps: float, delta: float, level: int) -> tuple[float, float]:
    return eps / 4 * 0.75**level, delta / 2**level


def halving_rounds(k: int, eps_l: float, delta_l: float) -> int:
    return math.ceil(k / (2 * eps_l**2) * math.log(4 / delta_l))


def _lower_median_keep(size: int) -> int:
    return math.ceil(size / 2)


def halving_battle_budget(p: PacParams) -> int:
    """Round count of Halving-Battle when no win counts tie.

    Each group of size ``g >= 2`` then keeps exactly ``ceil(g/2)`` items and
    singleton groups pass through unplayed. Ties can only keep more items,
    so real runs may exceed this figure.
    """
    total, size, level = 0, p.n, 1
    while size > 1:
        sizes = [p.k] * (size // p.k) + ([size % p.k] if size % p.k else [])
        t = halving_rounds(p.k, *halving_schedule(p.eps, p.delta, level))
        total += t * sum(1 for g in sizes if g > 1)
        size = sum(_lower_median_keep(g) if g > 1 else 1 for g in sizes)
        level += 1
    return total


# -- shared plumbing ---------------------------------------------------------


def _require_mode(env: BattleEnvironment, modes: tuple[str, ...], name: str):
    if env.mode not in modes:
        raise ValueError(f"{name} needs {' or '.join(modes)} feedback, environment gives {env.mode}")


def _win_counts(env: BattleEnvironment, group: list[int], rounds: int) -> dict[int, int]:
    items = np.asarray(group)
    lut = {item: p for p, item in enumerate(group)}
    tally = np.zeros(len(group), dtype=np.int64)
    lookup = np.full(env.n, -1, dtype=np.intp)
    lookup[items] = np.arange(items.size)
    for chunk in env.play_chunks(group, rounds):
        tally += np.bincount(lookup[chunk[:, 0]], minlength=items.size)
    return {item: int(tally[lut[item]]) for item in group}


def _pair_counts(env: BattleEnvironment, group: list[int], rounds: int) -> PairwiseCounts:
    pc = PairwiseCounts(group)
    for chunk in env.play_chunks(group, rounds):
        pc.update_batch(group, chunk)
    return pc


def _argmax_smallest(w: dict[int, int]) -> int:
    best = max(w.values())
    return min(i for i, v in w.items() if v == best)


def _ratio(a: int, b: int) -> float:
    return 0.5 if a + b == 0 else a / (a + b)


def _sample(rng: np.random.Generator, pool: list[int], size: int) -> list[int]:
    return [int(x) for x in rng.choice(pool, size=size, replace=False)] if size else []


def _check_ranking_length(env: BattleEnvironment, p: PacParams, name: str):
    got = env.ranking_length(p.k)
    if got != p.m:
        raise ValueError(f"{name}: environment returns top-{got} rankings but m={p.m}")


# -- Trace-the-Best ----------------------------------------------------------


def _trace_the_best(env, p, rng, tr: bool) -> AlgorithmResult:
    n, k = env.n, p.k
    if n != p.n:
        raise ValueError(f"environment has {n} items, parameters say {p.n}")
    start = env.rounds
    m = p.m if tr else 1
    t = trace_rounds(p, m)

    r = int(rng.integers(n))
    battle = [r] + _sample(rng, [i for i in range(n) if i != r], k - 1)
    pool = [i for i in range(n) if i not in set(battle)]
    trace = []
    while True:
        if tr:
            pc = _pair_counts(env, battle, t)
            candidates = copeland_winners(pc)
            challenger = None
            for c in candidates:
                if c != r and pc.pref(c, r) > 0.5 + p.eps / 2:
                    challenger = c
                    break
            record = {"running": r, "candidates": candidates, "subset": list(battle)}
        else:
            w = _win_counts(env, battle, t)
            c = _argmax_smallest(w)
            challenger = c if c != r and _ratio(w[c], w[r]) > 0.5 + p.eps / 2 else None
            record = {"running": r, "challenger": c, "subset": list(battle), "wins": w}
        if challenger is not None:
            r = challenger
        record["next_running"] = r
        trace.append(record)

        if not pool:
            break
        if len(pool) < k - 1:
            keep = _sample(rng, [i for i in battle if i != r], k - 1 - len(pool))
            battle = [r] + keep + pool
            pool = []
        else:
            fresh = _sample(rng, pool, k - 1)
            battle = [r] + fresh
            taken = set(fresh)
            pool = [i for i in pool if i not in taken]
    return AlgorithmResult(r, env.rounds - start, len(trace), trace)


def trace_the_best_wi(env: BattleEnvironment, p: PacParams, rng: np.random.Generator | None = None) -> AlgorithmResult:
    """Trace-the-Best with winner feedback.

    Plays ``ceil(2k/eps^2 * ln(2n/delta))`` rounds per batch and replaces the
    running winner by the batch's top scorer when the latter's empirical
    preference over it exceeds ``1/2 + eps/2``.
    """
    _require_mode(env, ("WI",), "trace_the_best_wi")
    return _trace_the_best(env, p, np.random.default_rng(rng), tr=False)


def trace_the_best_tr(env: BattleEnvironment, p: PacParams, rng: np.random.Generator | None = None) -> AlgorithmResult:
    """Trace-the-Best with top-m feedback and rank-broken pairwise counts.

    Rounds per batch shrink by the factor ``m``. The challenger set is the
    Copeland argmax of the batch; the first of them (by item index) whose
    empirical preference over the running winner exceeds ``1/2 + eps/2``
    takes over.
    """
    _require_mode(env, ("TR", "FR"), "trace_the_best_tr")
    _check_ranking_length(env, p, "trace_the_best_tr")
    return _trace_the_best(env, p, np.random.default_rng(rng), tr=True)


# -- Divide-and-Battle -------------------------------------------------------


def _divide_and_battle(env, p, rng, tr: bool) -> AlgorithmResult:
    n, k = env.n, p.k
    if n != p.n:
        raise ValueError(f"environment has {n} items, parameters say {p.n}")
    start = env.rounds
    m = p.m if tr else None

    def group_winner(group, eps_l, rounds):
        if not tr:
            w = _win_counts(env, group, rounds)
            return _argmax_smallest(w), {"wins": w}
        pc = _pair_counts(env, group, rounds)
        for i in sorted(group):
            if all(pc.pref(i, j) + eps_l / 2 >= 0.5 for j in group if j != i):
                return i, {"rule": "dominant"}
        return int(rng.choice(group)), {"rule": "random"}

    survivors = [int(x) for x in rng.permutation(n)]
    trace = []
    level = 1
    while len(survivors) > k:
        groups, parked = _partition(survivors, k)
        eps_l, delta_l = divide_schedule(p.eps, p.delta, level)
        t = divide_rounds(k, eps_l, delta_l, m)
        winners = []
        for group in groups:
            c, info = group_winner(group, eps_l, t)
            winners.append(c)
            trace.append({"level": level, "group": group, "winner": c, "rounds": t, **info})
        survivors = winners + parked
        level += 1
        if len(survivors) > k:
            survivors = [int(x) for x in rng.permutation(survivors)]

    if len(survivors) == 1:
        return AlgorithmResult(survivors[0], env.rounds - start, level - 1, trace)
    outside = [i for i in range(n) if i not in set(survivors)]
    final = survivors + _sample(rng, outside, k - len(survivors))
    t = divide_rounds(k, p.eps / 2, p.delta / 2, m)
    c, info = group_winner(final, p.eps / 2, t)
    trace.append({"level": "final", "group": final, "winner": c, "rounds": t, **info})
    return AlgorithmResult(c, env.rounds - start, level, trace)


def divide_and_battle_wi(env: BattleEnvironment, p: PacParams, rng: np.random.Generator | None = None) -> AlgorithmResult:
    """Divide-and-Battle with winner feedback; each group keeps its top scorer."""
    _require_mode(env, ("WI",), "divide_and_battle_wi")
    return _divide_and_battle(env, p, np.random.default_rng(rng), tr=False)


def divide_and_battle_tr(env: BattleEnvironment, p: PacParams, rng: np.random.Generator | None = None) -> AlgorithmResult:
    """Divide-and-Battle with top-m feedback.

    A group keeps the first item (by index) whose empirical preference over
    every group mate is at least ``1/2 - eps_l/2``, or a uniformly random
    member when no item qualifies.
    """
    _require_mode(env, ("TR", "FR"), "divide_and_battle_tr")
    _check_ranking_length(env, p, "divide_and_battle_tr")
    return _divide_and_battle(env, p, np.random.default_rng(rng), tr=True)


# -- Halving-Battle ----------------------------------------------------------


def _halve(w: dict[int, int]) -> list[int]:
    """Items whose win count reaches the group's lower median.

    If that keeps everybody, keep the top ``ceil(g/2)`` by (count, smaller
    index) instead so the group always shrinks.
    """
    ranked = sorted(w, key=lambda i: (-w[i], i))
    keep_n = _lower_median_keep(len(ranked))
    threshold = w[ranked[keep_n - 1]]
    kept = [i for i in ranked if w[i] >= threshold]
    if len(kept) == len(ranked):
        kept = ranked[:keep_n]
    return sorted(kept)


def halving_battle(env: BattleEnvironment, p: PacParams, rng: np.random.Generator | None = None) -> AlgorithmResult:
    """Halving-Battle: median elimination inside groups of at most ``k`` items.

    Singleton groups advance without being played.
    """
    _require_mode(env, ("WI",), "halving_battle")
    if env.k is not None and not env.variable_size:
        raise ValueError("halving_battle needs an environment that accepts subsets smaller than k")
    if env.n != p.n:
        raise ValueError(f"environment has {env.n} items, parameters say {p.n}")
    rng = np.random.default_rng(rng)
    start = env.rounds
    survivors = [int(x) for x in rng.permutation(p.n)]
    trace = []
    level = 1
    while len(survivors) > 1:
        eps_l, delta_l = halving_schedule(p.eps, p.delta, level)
        t = halving_rounds(p.k, eps_l, delta_l)
        kept = []
        for i in range(0, len(survivors), p.k):
            group = survivors[i : i + p.k]
            if len(group) == 1:
                kept += group
                continue
            w = _win_counts(env, group, t)
            retained = _halve(w)
            kept += retained
            trace.append({"level": level, "group": group, "wins": w, "kept": retained, "rounds": t})
        survivors = [int(x) for x in rng.permutation(kept)]
        level += 1
    return AlgorithmResult(survivors[0], env.rounds - start, level - 1, trace)


ALGORITHMS = {
    "trace-wi": trace_the_best_wi,
    "divide-wi": divide_and_battle_wi,
    "halving": halving_battle,
    "trace-tr": trace_the_best_tr,
    "divide-tr": divide_and_battle_tr,
}


def theory_budget(algo: str, p: PacParams) -> int:
    """Closed-form round count; exact except for Halving-Battle (tie-free figure)."""
    if algo == "trace-wi":
        return trace_the_best_budget(p, 1)
    if algo == "trace-tr":
        return trace_the_best_budget(p, p.m)
    if algo == "divide-wi":
        return divide_and_battle_budget(p, None)
    if algo == "divide-tr":
        return divide_and_battle_budget(p, p.m)
    if algo == "halving":
        return halving_battle_budget(p)
    raise ValueError(f"unknown algorithm {algo!r}")
