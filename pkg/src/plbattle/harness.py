"""Seeded Monte-Carlo trials, summaries and parameter sweeps.

Trial ``i`` of a batch uses seed ``base_seed ^ i``. That seed is split into
two independent generators, one driving the environment's feedback and one
driving the algorithm's own random choices, so a batch is reproducible
bit-for-bit from its configuration alone.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from typing import Iterable, Sequence

import numpy as np

from .algorithms import ALGORITHMS, PacParams, theory_budget
from .choice_model import PLInstance, is_eps_optimal
from .environment import BattleEnvironment
from .instances import InstanceSpec, generate_instance

__all__ = [
    "ExperimentConfig",
    "TrialRecord",
    "CSV_COLUMNS",
    "SWEEPABLE",
    "trial_streams",
    "run_trial",
    "run_trials",
    "summarize",
    "summary_row",
    "pac_threshold",
    "scaling_sweep",
    "format_csv",
    "write_csv",
    "records_csv",
]

CSV_COLUMNS = (
    "algo", "feedback", "n", "k", "m", "eps", "delta", "trials", "success_rate",
    "se", "mean_rounds", "max_rounds", "theory_budget", "pac_check", "base_seed",
)

SWEEPABLE = ("n", "k", "m", "eps", "delta")

WI_ALGOS = ("trace-wi", "divide-wi", "halving")
TR_ALGOS = ("trace-tr", "divide-tr")


@dataclass(frozen=True)
class ExperimentConfig:
    algo: str = "trace-wi"
    feedback: str | None = None
    m: int = 1
    n: int = 20
    k: int = 5
    eps: float = 0.1
    delta: float = 0.1
    instance: str = "one-good:1,0.6"
    trials: int = 200
    base_seed: int = 0
    out: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algo!r}; expected one of {', '.join(ALGORITHMS)}")
        feedback = self.feedback
        if feedback is None:
            feedback = "WI" if self.algo in WI_ALGOS else "TR"
        if self.algo in WI_ALGOS and (feedback != "WI" or self.m != 1):
            raise ValueError(f"{self.algo} runs on winner feedback (WI, m=1)")
        if self.algo in TR_ALGOS and feedback not in ("TR", "FR"):
            raise ValueError(f"{self.algo} runs on TR or FR feedback")
        if feedback == "FR" and self.m != self.k:
            raise ValueError("full-ranking feedback means m == k")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.base_seed < 0 or self.base_seed >= 2**64:
            raise ValueError("base_seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        InstanceSpec.parse(self.instance)
        object.__setattr__(self, "feedback", feedback)
        self.params  # range checks

    @property
    def params(self) -> PacParams:
        return PacParams(n=self.n, k=self.k, eps=self.eps, delta=self.delta, m=self.m)

    def build_instance(self) -> PLInstance:
        return generate_instance(self.instance, self.n)

    @classmethod
    def from_mapping(cls, values: dict) -> "ExperimentConfig":
        """Build from string-valued settings (config file or CLI), coercing types."""
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, raw in values.items():
            name = key.replace("-", "_")
            if name == "seed":
                name = "base_seed"
            if name not in known:
                raise ValueError(f"unknown setting {key!r}")
            if raw is None:
                continue
            kwargs[name] = _coerce(name, raw)
        return cls(**kwargs)


_INT_FIELDS = {"m", "n", "k", "trials", "base_seed", "workers"}
_FLOAT_FIELDS = {"eps", "delta"}


def _coerce(name: str, raw):
    if not isinstance(raw, str):
        return raw
    raw = raw.strip()
    if name in _INT_FIELDS:
        return int(raw, 0)
    if name in _FLOAT_FIELDS:
        return float(raw)
    return raw


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    chosen: int
    eps_optimal: bool
    rounds_used: int
    wall_time: float


def trial_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """(environment rng, algorithm rng) for one trial seed."""
    env_seq, algo_seq = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(env_seq), np.random.default_rng(algo_seq)


def run_trial(cfg: ExperimentConfig, instance: PLInstance, trial: int) -> TrialRecord:
    seed = cfg.base_seed ^ trial
    env_rng, algo_rng = trial_streams(seed)
    env = BattleEnvironment(
        instance,
        mode=cfg.feedback,
        m=cfg.m,
        rng=env_rng,
        k=cfg.k,
        variable_size=cfg.algo == "halving",
    )
    start = time.perf_counter()
    result = ALGORITHMS[cfg.algo](env, cfg.params, rng=algo_rng)
    elapsed = time.perf_counter() - start
    return TrialRecord(
        trial=trial,
        seed=seed,
        chosen=result.chosen,
        eps_optimal=is_eps_optimal(instance, result.chosen, cfg.eps),
        rounds_used=result.rounds_used,
        wall_time=elapsed,
    )


def _run_indices(cfg: ExperimentConfig, indices: Sequence[int]) -> list[TrialRecord]:
    instance = cfg.build_instance()
    return [run_trial(cfg, instance, i) for i in indices]


def run_trials(cfg: ExperimentConfig) -> list[TrialRecord]:
    """Run ``cfg.trials`` independent trials, sorted by trial index."""
    indices = list(range(cfg.trials))
    if cfg.workers == 1:
        records = _run_indices(cfg, indices)
    else:
        batches = [indices[w :: cfg.workers] for w in range(cfg.workers)]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = [r for part in pool.map(_run_indices, [cfg] * len(batches), batches) for r in part]
    return sorted(records, key=lambda r: r.trial)


def summarize(records: Sequence[TrialRecord]) -> dict:
    if not records:
        raise ValueError("cannot summarize an empty set of trials")
    n = len(records)
    rate = sum(r.eps_optimal for r in records) / n
    se = math.sqrt(rate * (1 - rate) / n)
    rounds = [r.rounds_used for r in records]
    return {
        "trials": n,
        "success_rate": rate,
        "se": se,
        "half_width": 3 * se,
        "mean_rounds": sum(rounds) / n,
        "max_rounds": max(rounds),
    }


def pac_threshold(delta: float, trials: int) -> float:
    """Smallest success rate consistent with a (1 - delta) guarantee at 3 standard errors."""
    return 1 - delta - 3 * math.sqrt(delta * (1 - delta) / trials)


def summary_row(cfg: ExperimentConfig, records: Sequence[TrialRecord]) -> dict:
    stats = summarize(records)
    passed = stats["success_rate"] >= pac_threshold(cfg.delta, stats["trials"])
    return {
        "algo": cfg.algo,
        "feedback": cfg.feedback,
        "n": cfg.n,
        "k": cfg.k,
        "m": cfg.m,
        "eps": cfg.eps,
        "delta": cfg.delta,
        "trials": stats["trials"],
        "success_rate": stats["success_rate"],
        "se": stats["se"],
        "mean_rounds": stats["mean_rounds"],
        "max_rounds": stats["max_rounds"],
        "theory_budget": theory_budget(cfg.algo, cfg.params),
        "pac_check": "PASS" if passed else "FAIL",
        "base_seed": cfg.base_seed,
    }


def scaling_sweep(cfg: ExperimentConfig, variable: str, values: Iterable) -> list[dict]:
    """One summary row per value of ``variable`` with everything else fixed."""
    if variable not in SWEEPABLE:
        raise ValueError(f"cannot sweep {variable!r}; choose one of {', '.join(SWEEPABLE)}")
    values = list(values)
    if not values:
        raise ValueError("sweep grid is empty")
    rows = []
    for value in values:
        changes = {variable: _coerce(variable, value)}
        if variable == "k" and cfg.feedback == "FR":
            changes["m"] = changes["k"]
        point = replace(cfg, **changes)
        rows.append(summary_row(point, run_trials(point)))
    return rows


def _cell(value) -> str:
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def format_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def write_csv(rows: Iterable[dict], path: str | None) -> str:
    text = format_csv(rows)
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def records_csv(records: Iterable[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = [f.name for f in fields(TrialRecord)]
    writer.writerow(names)
    for rec in records:
        d = asdict(rec)
        writer.writerow([_cell(d[k]) for k in names])
    return buf.getvalue()
