"""Acceptance criteria, each at its stated tolerance.

Every test logs exactly one PASS/FAIL line (collected in the terminal
summary under "acceptance criteria") before asserting.
"""

import math
import subprocess
import sys

import numpy as np
import pytest

from plbattle import validation
from plbattle.algorithms import PacParams, trace_the_best_budget, trace_the_best_tr, trace_the_best_wi
from plbattle.choice_model import PLInstance
from plbattle.environment import BattleEnvironment
from plbattle.harness import ExperimentConfig, pac_threshold, run_trials, summary_row


def test_sampler_exactness(acceptance):
    cells = validation.sampler_exactness(n_instances=20, max_size=5, draws=100_000, seed=2024)
    worst = max(cells, key=lambda c: c.tv)
    ok = worst.tv < 0.02 and len(cells) == 20 * 15
    acceptance(1, "sampler exactness", ok, f"max TV {worst.tv:.4f} (< 0.02) over {len(cells)} (instance, subset, m) cells")
    assert ok


def test_coupling_equivalence(acceptance):
    rng = np.random.default_rng(7)
    worst_tv, worst_cond = 0.0, 0.0
    for size in (2, 3, 4, 5):
        inst = PLInstance(rng.uniform(0.1, 1.0, 5))
        s = tuple(int(x) for x in rng.choice(5, size=size, replace=False))
        i, j = s[0], s[1]
        res = validation.coupling_check(inst, s, i, j, draws=100_000, seed=size)
        worst_tv = max(worst_tv, res["tv"])
        worst_cond = max(worst_cond, abs(res["conditional"] - res["target"]))
    ok = worst_tv < 0.02 and worst_cond <= 0.01
    acceptance(2, "coupling equivalence", ok, f"max TV {worst_tv:.4f} (< 0.02), max conditional gap {worst_cond:.4f} (<= 0.01)")
    assert ok


def test_deviation_bound(acceptance):
    eta, v, reps = 0.1, 200, 500
    res = validation.pair_deviation_frequency(rounds=2000, reps=reps, eta=eta, v=v, seed=11)
    bound = math.exp(-2 * v * eta**2)
    limit = bound + 3 * math.sqrt(bound * (1 - bound) / reps)
    ok = res["upper_freq"] <= limit
    detail = f"frequency {res['upper_freq']:.4f} <= {limit:.4f} (mean pair count {res['mean_pair_count']:.0f})"
    acceptance(3, "pairwise deviation bound", ok, detail)
    assert ok


def test_pigeonhole(acceptance):
    bad = validation.pigeonhole_violations(histories=1000, seed=5)
    acceptance(4, "rank-breaking pigeonhole", bad == 0, f"{bad} violations in 1000 histories")
    assert bad == 0


def test_budget_determinism(acceptance):
    inst = PLInstance(np.r_[1.0, np.full(19, 0.6)])
    p = PacParams(20, 5, 0.1, 0.05)
    expected_wi = math.ceil(20 / 4) * math.ceil(2 * 5 / 0.1**2 * math.log(2 * 20 / 0.05))
    wi = [trace_the_best_wi(BattleEnvironment(inst, rng=np.random.default_rng(s)), p, rng=s).rounds_used for s in range(5)]
    pm = PacParams(20, 5, 0.1, 0.05, m=5)
    tr = [
        trace_the_best_tr(BattleEnvironment(inst, mode="TR", m=5, rng=np.random.default_rng(s)), pm, rng=s).rounds_used
        for s in range(5)
    ]
    # five batches of ceil(200 ln 800) = 1337 rounds, a fifth of the WI total
    ok = set(wi) == {expected_wi} == {33425} and set(tr) == {5 * 1337} == {6685} and 5 * 6685 == expected_wi
    acceptance(5, "budget determinism", ok, f"WI rounds {sorted(set(wi))} (33425), TR m=5 rounds {sorted(set(tr))} (6685)")
    assert ok


PAC_CELLS = [
    (algo, n, m)
    for n in (20, 50)
    for algo, ms in (
        ("trace-wi", (1,)),
        ("divide-wi", (1,)),
        ("halving", (1,)),
        ("trace-tr", (1, 3, 5)),
        ("divide-tr", (1, 3, 5)),
    )
    for m in ms
]


@pytest.mark.slow
def test_pac_success_all_algorithms(acceptance):
    failures = []
    worst = (2.0, None)
    for algo, n, m in PAC_CELLS:
        cfg = ExperimentConfig(algo=algo, m=m, n=n, k=5, eps=0.1, delta=0.1, instance="one-good:1,0.6", trials=200, base_seed=2019)
        row = summary_row(cfg, run_trials(cfg))
        if row["success_rate"] < worst[0]:
            worst = (row["success_rate"], f"{algo} n={n} m={m}")
        if row["pac_check"] != "PASS":
            failures.append(f"{algo} n={n} m={m} rate={row['success_rate']:.3f}")
    ok = not failures
    detail = f"{len(PAC_CELLS)} cells, lowest rate {worst[0]:.3f} ({worst[1]}) vs threshold {pac_threshold(0.1, 200):.3f}"
    if failures:
        detail += "; failing: " + ", ".join(failures)
    acceptance(6, "PAC success", ok, detail)
    assert ok


def test_k_independence_under_winner_feedback(acceptance):
    b2 = trace_the_best_budget(PacParams(100, 2, 0.1, 0.1))
    b10 = trace_the_best_budget(PacParams(100, 10, 0.1, 0.1))
    ratio = max(b2, b10) / min(b2, b10)
    ok = ratio < 1.6
    acceptance(7, "k-independence of Trace-the-Best WI budget", ok, f"k=2: {b2}, k=10: {b10}, ratio {ratio:.3f} (< 1.6)")
    assert ok


def test_kl_bound(acceptance):
    res = validation.kl_bound_check(configs=100, seed=3)
    from plbattle.oracle import build_lower_bound_instances, kl_upper_bound, winner_kl

    true, alts = build_lower_bound_instances(2, 0.1)
    spot = winner_kl(true, alts[0], (0, 1))
    ok = res["worst_gap"] <= 1e-9 and abs(spot - 0.0811) < 5e-5 and spot <= kl_upper_bound(2, 0.1)
    detail = (
        f"worst KL - bound {res['worst_gap']:.3e} over {res['subsets']} subsets; "
        f"spot KL {spot:.4f} <= {kl_upper_bound(2, 0.1):.4f}"
    )
    acceptance(8, "KL bound on hard instances", ok, detail)
    assert ok


def test_additive_transitivity(acceptance):
    bad = validation.transitivity_violations(triples=1000, seed=17)
    acceptance(9, "additive transitivity", bad == 0, f"{bad} violations over 1000 triples")
    assert bad == 0


def test_sweep_reproducible(acceptance, tmp_path):
    outputs = []
    for run in ("a", "b"):
        path = tmp_path / f"{run}.csv"
        cmd = [
            sys.executable, "-m", "plbattle", "sweep", "--algo", "trace-tr", "--m", "3", "--n", "20", "--k", "5",
            "--eps", "0.1", "--delta", "0.1", "--trials", "20", "--seed", "123456789", "--sweep", "m=1,3,5",
            "--out", str(path),
        ]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        assert proc.returncode in (0, 1), proc.stderr
        outputs.append(path.read_bytes())
    ok = outputs[0] == outputs[1] and outputs[0].count(b"\n") == 4
    acceptance(10, "sweep reproducibility", ok, f"two runs {'byte-identical' if ok else 'differ'} ({len(outputs[0])} bytes)")
    assert ok
