"""Experiment harness: seeded runs over an SNR x window-length x label-fraction grid.

One run streams 10000 windows (2000 per class, shuffled) through the
attribute extractor, the conditioning map, and the evolving classifier,
scoring prequentially.
A plan fans out over grid cells and seeds, aggregates each cell with 99%
Student-t intervals, and persists CSV summaries, per-step trajectories,
confusion matrices, and final rule-base snapshots.

All results are pure functions of (cell, seed, hyperparameters), so any
cell can be reproduced in isolation.
"""

from __future__ import annotations

import csv
import json
import logging
import time
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from .classifier import RuleBase
from .features import DEFAULT_LAMBDA, condition_attributes, extract_attributes
from .metrics import StreamScore, mean_ci99, purity_score
from .waveforms import SignalConfig, StreamSpec, generate_stream

logger = logging.getLogger(__name__)

DEFAULT_SEEDS = (1, 2, 3, 4, 5)
DEFAULT_PER_CLASS = 2000


@dataclass(frozen=True)
class Hyper:
    """Classifier and extractor hyperparameters for a run."""

    rho0: float = 0.1
    delta: float = 0.1
    hr: float = 200.0
    lam: float = DEFAULT_LAMBDA


@dataclass
class ExperimentPlan:
    """Grid of cells to run: every SNR x cycles x fraction, per seed."""

    snr_list: tuple = (20.0,)
    cycles_list: tuple = (4,)
    labeled_fractions: tuple = (1.0,)
    seeds: tuple = DEFAULT_SEEDS
    per_class: int = DEFAULT_PER_CLASS
    hyper: Hyper = field(default_factory=Hyper)
    output_dir: str | None = None

    def __post_init__(self):
        if not all(0.0 <= f <= 1.0 for f in self.labeled_fractions):
            raise ValueError("labeled fractions must lie in [0, 1]")
        if not self.seeds:
            raise ValueError("at least one seed is required")

    @property
    def runs(self) -> int:
        return len(self.seeds)

    def cells(self):
        return list(product(self.snr_list, self.cycles_list, self.labeled_fractions))


@dataclass
class RunRecord:
    """Everything measured in one seeded run of one cell."""

    snr: float
    cycles: int
    fraction: float
    seed: int
    accuracy: float
    purity: float
    rules_avg: float
    rules_final: int
    wall_time: float
    confusion: np.ndarray
    trajectory: dict
    snapshot: dict


@dataclass
class ExperimentResult:
    """Aggregate of one cell over its seeds; acc and purity in percent."""

    snr: float
    cycles: int
    fraction: float
    n_runs: int
    acc_mean: float
    acc_ci99: float
    rules_mean: float
    rules_ci99: float
    time_mean: float
    time_ci99: float
    purity_mean: float
    purity_ci99: float
    confusion: np.ndarray


def cell_id(snr: float, cycles: int, fraction: float) -> str:
    """Filesystem-safe identifier for one grid cell."""
    return f"snr{snr:g}_cyc{cycles}_frac{fraction:g}".replace(".", "p")


def run_cell(
    snr: float,
    cycles: int,
    fraction: float,
    seed: int,
    hyper: Hyper = Hyper(),
    per_class: int = DEFAULT_PER_CLASS,
) -> RunRecord:
    """Run one seeded stream through extraction, learning, and scoring.

    Timing covers the full online loop (window synthesis, attribute
    extraction, learning); scoring bookkeeping is inside the loop as it
    would be in deployment.
    """
    config = SignalConfig(cycles_per_window=cycles, snr_db=snr, rng_seed=seed)
    spec = StreamSpec(per_class=per_class, labeled_fraction=fraction, rng_seed=seed)
    base = RuleBase(
        rho0=hyper.rho0,
        merge_threshold=hyper.delta,
        inactivity_horizon=hyper.hr,
    )
    score = StreamScore()
    assignments = []
    traj_acc, traj_c, traj_rho = [], [], []

    t0 = time.perf_counter()
    for waveform, label in generate_stream(spec, config):
        x = condition_attributes(extract_attributes(waveform, config, hyper.lam))
        estimate = base.learn(x, label)
        score.update_accuracy(estimate.predicted, waveform.label)
        score.update_cavg(len(base))
        assignments.append((estimate.winning_rule, waveform.label))
        traj_acc.append(score.acc)
        traj_c.append(len(base))
        traj_rho.append(base.rho)
    wall = time.perf_counter() - t0

    return RunRecord(
        snr=snr,
        cycles=cycles,
        fraction=fraction,
        seed=seed,
        accuracy=score.acc,
        purity=purity_score(assignments),
        rules_avg=score.c_avg,
        rules_final=len(base),
        wall_time=wall,
        confusion=score.confusion.copy(),
        trajectory={
            "h": np.arange(1, len(traj_acc) + 1),
            "acc": np.array(traj_acc),
            "c": np.array(traj_c, dtype=int),
            "rho": np.array(traj_rho),
        },
        snapshot=base.snapshot(),
    )


def summarize(records) -> ExperimentResult:
    """Aggregate one cell's run records with 99% t-intervals."""
    records = list(records)
    if not records:
        raise ValueError("no records to summarize")
    first = records[0]
    acc_mean, acc_ci = mean_ci99([100.0 * r.accuracy for r in records])
    rules_mean, rules_ci = mean_ci99([r.rules_avg for r in records])
    time_mean, time_ci = mean_ci99([r.wall_time for r in records])
    pur_mean, pur_ci = mean_ci99([100.0 * r.purity for r in records])
    return ExperimentResult(
        snr=first.snr,
        cycles=first.cycles,
        fraction=first.fraction,
        n_runs=len(records),
        acc_mean=acc_mean,
        acc_ci99=acc_ci,
        rules_mean=rules_mean,
        rules_ci99=rules_ci,
        time_mean=time_mean,
        time_ci99=time_ci,
        purity_mean=pur_mean,
        purity_ci99=pur_ci,
        confusion=sum(r.confusion for r in records),
    )


def run_plan(plan: ExperimentPlan):
    """Run every cell of the plan for every seed and aggregate.

    Returns the list of ExperimentResult in grid order. A failing cell is
    logged and skipped; completed cells keep their outputs. When the plan
    names an output directory, writes summary.csv plus per-run
    trajectory, confusion, rule-base, and snapshot files.
    """
    out = Path(plan.output_dir) if plan.output_dir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)

    results = []
    for snr, cycles, fraction in plan.cells():
        cid = cell_id(snr, cycles, fraction)
        try:
            records = []
            for seed in plan.seeds:
                rec = run_cell(snr, cycles, fraction, seed, plan.hyper, plan.per_class)
                records.append(rec)
                if out:
                    write_trajectory_csv(rec, out / f"trajectory_{cid}_seed{seed}.csv")
                    write_rulebase_csv(
                        rec.snapshot, out / f"rulebase_{cid}_seed{seed}.csv"
                    )
                    write_snapshot_json(
                        rec.snapshot, out / f"snapshot_{cid}_seed{seed}.json"
                    )
            result = summarize(records)
            results.append(result)
            if out:
                write_confusion_csv(result.confusion, out / f"confusion_{cid}.csv")
        except Exception:
            logger.exception("cell %s failed; continuing with remaining cells", cid)
    if out:
        write_summary_csv(results, out / "summary.csv")
    return results


def sweep(
    fractions,
    snr: float = 20.0,
    cycles: int = 4,
    seeds=DEFAULT_SEEDS,
    hyper: Hyper = Hyper(),
    per_class: int = DEFAULT_PER_CLASS,
    output_dir: str | None = None,
):
    """Labeled-fraction sweep at a fixed SNR and window length."""
    plan = ExperimentPlan(
        snr_list=(snr,),
        cycles_list=(cycles,),
        labeled_fractions=tuple(fractions),
        seeds=tuple(seeds),
        per_class=per_class,
        hyper=hyper,
        output_dir=output_dir,
    )
    return run_plan(plan)


def write_summary_csv(results, path) -> None:
    """One row per cell: accuracy, rules, time, purity, each with CI99."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "cell_id",
                "snr_db",
                "cycles",
                "labeled_fraction",
                "runs",
                "acc_mean",
                "acc_ci99",
                "rules_mean",
                "rules_ci99",
                "time_mean",
                "time_ci99",
                "purity_mean",
                "purity_ci99",
            ]
        )
        for r in results:
            writer.writerow(
                [
                    cell_id(r.snr, r.cycles, r.fraction),
                    r.snr,
                    r.cycles,
                    r.fraction,
                    r.n_runs,
                    r.acc_mean,
                    r.acc_ci99,
                    r.rules_mean,
                    r.rules_ci99,
                    r.time_mean,
                    r.time_ci99,
                    r.purity_mean,
                    r.purity_ci99,
                ]
            )


def write_trajectory_csv(record: RunRecord, path) -> None:
    """Per-step trajectory: h, running accuracy, rule count, rho."""
    traj = record.trajectory
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["h", "acc", "c", "rho"])
        for h, acc, c, rho in zip(traj["h"], traj["acc"], traj["c"], traj["rho"]):
            writer.writerow([int(h), float(acc), int(c), float(rho)])


def write_confusion_csv(confusion, path) -> None:
    """5x6 counts: rows truth 1..5, columns predicted 1..5 plus unknown."""
    confusion = np.asarray(confusion)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["truth"] + [f"pred_{k}" for k in range(1, 6)] + ["unknown"])
        for k, row in enumerate(confusion, start=1):
            writer.writerow([k] + [int(v) for v in row])


def write_rulebase_csv(snapshot: dict, path) -> None:
    """Final rules: id, class, modal values, dispersions, counters."""
    rules = snapshot["rules"]
    n = len(rules[0]["mu"]) if rules else 4
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["rule_id", "class"]
            + [f"mu{j}" for j in range(1, n + 1)]
            + [f"sigma{j}" for j in range(1, n + 1)]
            + ["update_count", "last_active"]
        )
        for r in rules:
            label = "" if r["class_label"] is None else r["class_label"]
            writer.writerow(
                [r["rule_id"], label]
                + r["mu"]
                + r["sigma"]
                + [r["update_count"], r["last_active_step"]]
            )


def write_snapshot_json(snapshot: dict, path) -> None:
    """Full rule-base state (rules, rho, step) as JSON."""
    with open(path, "w") as fh:
        json.dump(snapshot, fh, indent=2)
