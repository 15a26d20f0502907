"""Command-line entry point: ``plbattle {run,sweep,oracle-check,sample}``.

Settings come from an optional flat ``key = value`` file (``--config``) and
are overridden by flags. CSV goes to ``--out`` when given, stdout otherwise.
The exit status is 1 when any emitted row fails its PAC check.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import math
import sys

import numpy as np

from . import validation
from .algorithms import ALGORITHMS
from .choice_model import PLInstance
from .environment import FEEDBACK_MODES, BattleEnvironment
from .instances import generate_instance
from .harness import SWEEPABLE, ExperimentConfig, records_csv, run_trials, scaling_sweep, summary_row, write_csv

SETTING_FLAGS = ("algo", "feedback", "n", "k", "m", "eps", "delta", "trials", "seed", "instance", "out", "workers")


def read_config_file(path: str) -> dict[str, str]:
    """Parse a header-less ``key = value`` file; ``#`` starts a comment."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    with open(path, encoding="utf-8") as fh:
        parser.read_string("[settings]\n" + fh.read(), source=path)
    return dict(parser["settings"])


def _settings(args: argparse.Namespace) -> dict:
    values = read_config_file(args.config) if args.config else {}
    for name in SETTING_FLAGS:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    return values


def parse_sweep(text: str) -> tuple[str, list[str]]:
    var, sep, raw = text.partition("=")
    var = var.strip()
    if not sep or var not in SWEEPABLE:
        raise ValueError(f"--sweep expects <var>=<v1,v2,...> with var in {', '.join(SWEEPABLE)}")
    values = [v.strip() for v in raw.split(",") if v.strip()]
    if not values:
        raise ValueError("--sweep grid is empty")
    return var, values


def _add_settings(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat key=value settings file; flags override it")
    p.add_argument("--algo", choices=list(ALGORITHMS))
    p.add_argument("--feedback", choices=FEEDBACK_MODES)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, help="base seed; trial i uses seed ^ i")
    p.add_argument("--instance", help="e.g. one-good:1,0.6 or geometric:0.9")
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--workers", type=int, help="worker processes for trials")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plbattle", description="PAC best-item identification benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one configuration and emit a summary row")
    _add_settings(run)
    run.add_argument("--records", help="also write per-trial records to this CSV path")

    sweep = sub.add_parser("sweep", help="vary one setting over a grid")
    _add_settings(sweep)
    sweep.add_argument("--sweep", required=True, metavar="VAR=V1,V2,...")

    check = sub.add_parser("oracle-check", help="validate samplers and model identities against brute-force oracles")
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--quick", action="store_true", help="smaller sample sizes")

    sample = sub.add_parser("sample", help="dump raw feedback draws as CSV")
    _add_settings(sample)
    sample.add_argument("--subset", required=True, help="comma-separated item ids to play")
    sample.add_argument("--rounds", type=int, default=10)
    return parser


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    cfg = ExperimentConfig.from_mapping(_settings(args))
    records = run_trials(cfg)
    row = summary_row(cfg, records)
    text = write_csv([row], cfg.out)
    if not cfg.out:
        sys.stdout.write(text)
    if args.records:
        _emit(records_csv(records), args.records)
    return 0 if row["pac_check"] == "PASS" else 1


def cmd_sweep(args) -> int:
    var, values = parse_sweep(args.sweep)
    cfg = ExperimentConfig.from_mapping(_settings(args))
    rows = scaling_sweep(cfg, var, values)
    text = write_csv(rows, cfg.out)
    if not cfg.out:
        sys.stdout.write(text)
    return 0 if all(r["pac_check"] == "PASS" for r in rows) else 1


def cmd_sample(args) -> int:
    settings = _settings(args)
    subset = [int(x) for x in args.subset.split(",") if x.strip()]
    n = int(settings.get("n", 20))
    mode = str(settings.get("feedback", "WI")).strip()
    m = int(settings.get("m", len(subset) if mode == "FR" else 1))
    instance = generate_instance(str(settings.get("instance", "one-good:1,0.6")), n)
    env_seq, _ = np.random.SeedSequence(int(settings.get("seed", 0))).spawn(2)
    env = BattleEnvironment(instance, mode=mode, m=m, rng=np.random.default_rng(env_seq))
    draws = env.play_many(subset, args.rounds)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["round"] + [f"pos{p}" for p in range(draws.shape[1])])
    for t, row in enumerate(draws):
        writer.writerow([t, *row.tolist()])
    _emit(buf.getvalue(), settings.get("out"))
    return 0


def cmd_oracle_check(args) -> int:
    seed = args.seed
    quick = args.quick
    draws = 100_000
    results = []

    cells = validation.sampler_exactness(n_instances=2 if quick else 20, draws=draws, seed=seed)
    worst = max(c.tv for c in cells)
    results.append(("sampler-exactness", f"max TV {worst:.4f} over {len(cells)} cells", worst < 0.02))

    gap = validation.enumeration_agreement(seed=seed)
    results.append(("enumeration-agreement", f"max gap {gap:.2e}", gap < 1e-10))

    inst = PLInstance(np.array([1.0, 0.7, 0.5, 0.3, 0.2]))
    cp = validation.coupling_check(inst, (0, 1, 2, 3, 4), 1, 3, draws=draws, seed=seed)
    ok = cp["tv"] < 0.02 and abs(cp["conditional"] - cp["target"]) <= 0.01
    results.append(("coupling", f"TV {cp['tv']:.4f}, conditional {cp['conditional']:.4f} vs {cp['target']:.4f}", ok))

    reps = 100 if quick else 500
    dev = validation.pair_deviation_frequency(reps=reps, seed=seed)
    limit = dev["bound"] + 3 * math.sqrt(dev["bound"] * (1 - dev["bound"]) / reps)
    detail = f"freq {dev['upper_freq']:.4f} <= {limit:.4f} (mean n_ij {dev['mean_pair_count']:.0f})"
    results.append(("deviation-bound", detail, dev["upper_freq"] <= limit))

    bad = validation.pigeonhole_violations(histories=1000, seed=seed)
    results.append(("pigeonhole", f"{bad} violations", bad == 0))

    kl = validation.kl_bound_check(configs=100, seed=seed)
    results.append(("kl-bound", f"worst excess {kl['worst_gap']:.3e} over {kl['subsets']} subsets", kl["worst_gap"] <= 1e-9))

    bad = validation.transitivity_violations(triples=1000, seed=seed)
    results.append(("transitivity", f"{bad} violations", bad == 0))

    for name, detail, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return 0 if all(ok for _, _, ok in results) else 1


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "oracle-check": cmd_oracle_check, "sample": cmd_sample}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, OSError, configparser.Error) as exc:
        print(f"plbattle: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
