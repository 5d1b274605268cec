"""Command-line entry points for dataset dumps and experiment runs.

Subcommands:
  generate  dump one cell's waveform and attribute CSVs per seed
  run       run one (snr, cycles, fraction) cell over its seeds
  plan      run the full snr x cycles x fraction grid
  sweep     run a labeled-fraction sweep at fixed snr and cycles

Every option can also come from a JSON config file (--config); explicit
flags override config values, which override built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .features import extract_attributes
from .harness import (
    DEFAULT_PER_CLASS,
    DEFAULT_SEEDS,
    ExperimentPlan,
    Hyper,
    cell_id,
    run_plan,
    sweep,
)
from .waveforms import SignalConfig, StreamSpec, generate_stream, waveforms_to_csv
from .features import attributes_to_csv

DEFAULTS = {
    "snr": [20.0],
    "cycles": [4],
    "fraction": [1.0],
    "seeds": list(DEFAULT_SEEDS),
    "rho0": 0.1,
    "delta": 0.1,
    "hr": 200.0,
    "lam": 256000.0,
    "per_class": DEFAULT_PER_CLASS,
    "out": None,
}

SWEEP_FRACTIONS = [round(0.1 * k, 1) for k in range(11)]


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file of option defaults")
    parser.add_argument(
        "--snr", type=_float_list, help="SNR in dB, comma-separated (inf allowed)"
    )
    parser.add_argument(
        "--cycles", type=_int_list, help="cycles per window, comma-separated"
    )
    parser.add_argument(
        "--fraction", type=_float_list, help="labeled fractions, comma-separated"
    )
    parser.add_argument("--seeds", type=_int_list, help="run seeds, comma-separated")
    parser.add_argument("--rho0", type=float, help="initial activation threshold")
    parser.add_argument("--delta", type=float, help="merge distance threshold")
    parser.add_argument(
        "--hr", type=float, help="inactivity horizon in steps (inf keeps all rules)"
    )
    parser.add_argument(
        "--lambda", dest="lam", type=float, help="trend smoothing penalty"
    )
    parser.add_argument("--per-class", dest="per_class", type=int,
                        help="windows per class in each stream")
    parser.add_argument("--out", help="output directory for CSV files")


def _resolve(args: argparse.Namespace) -> dict:
    merged = dict(DEFAULTS)
    if args.config:
        with open(args.config) as fh:
            config = json.load(fh)
        unknown = set(config) - set(DEFAULTS)
        if unknown:
            raise SystemExit(f"unknown config keys: {sorted(unknown)}")
        for key, value in config.items():
            if key in ("snr", "fraction"):
                value = [float(v) for v in value]
            elif key in ("cycles", "seeds"):
                value = [int(v) for v in value]
            elif key in ("rho0", "delta", "hr", "lam"):
                value = float(value)
            elif key == "per_class":
                value = int(value)
            merged[key] = value
    for key in DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    return merged


def _single(values, name: str):
    if len(values) != 1:
        raise SystemExit(f"{name} takes exactly one value here, got {values}")
    return values[0]


def _hyper(opts: dict) -> Hyper:
    return Hyper(
        rho0=opts["rho0"], delta=opts["delta"], hr=opts["hr"], lam=opts["lam"]
    )


def _print_results(results) -> None:
    print(
        f"{'cell':<24}{'acc%':>16}{'rules':>14}{'time_s':>14}{'purity%':>16}"
    )
    for r in results:
        print(
            f"{cell_id(r.snr, r.cycles, r.fraction):<24}"
            f"{r.acc_mean:8.2f} ± {r.acc_ci99:<5.2f}"
            f"{r.rules_mean:8.2f} ± {r.rules_ci99:<4.2f}"
            f"{r.time_mean:8.2f} ± {r.time_ci99:<4.2f}"
            f"{r.purity_mean:8.2f} ± {r.purity_ci99:<5.2f}"
        )


def _cmd_generate(opts: dict) -> int:
    snr = _single(opts["snr"], "--snr")
    cycles = int(_single(opts["cycles"], "--cycles"))
    fraction = _single(opts["fraction"], "--fraction")
    out = Path(opts["out"] or ".")
    out.mkdir(parents=True, exist_ok=True)
    cid = cell_id(snr, cycles, fraction)
    for seed in opts["seeds"]:
        config = SignalConfig(cycles_per_window=cycles, snr_db=snr, rng_seed=seed)
        spec = StreamSpec(
            per_class=opts["per_class"], labeled_fraction=fraction, rng_seed=seed
        )
        wpath = out / f"waveforms_{cid}_seed{seed}.csv"
        apath = out / f"attributes_{cid}_seed{seed}.csv"
        waveforms_to_csv(generate_stream(spec, config), wpath)
        attrs = (
            (extract_attributes(wf, config, opts["lam"]), label)
            for wf, label in generate_stream(spec, config)
        )
        attributes_to_csv(attrs, apath)
        print(f"wrote {wpath} and {apath}")
    return 0


def _cmd_run(opts: dict) -> int:
    plan = ExperimentPlan(
        snr_list=(_single(opts["snr"], "--snr"),),
        cycles_list=(int(_single(opts["cycles"], "--cycles")),),
        labeled_fractions=(_single(opts["fraction"], "--fraction"),),
        seeds=tuple(opts["seeds"]),
        per_class=opts["per_class"],
        hyper=_hyper(opts),
        output_dir=opts["out"],
    )
    _print_results(run_plan(plan))
    return 0


def _cmd_plan(opts: dict) -> int:
    plan = ExperimentPlan(
        snr_list=tuple(opts["snr"]),
        cycles_list=tuple(int(c) for c in opts["cycles"]),
        labeled_fractions=tuple(opts["fraction"]),
        seeds=tuple(opts["seeds"]),
        per_class=opts["per_class"],
        hyper=_hyper(opts),
        output_dir=opts["out"],
    )
    _print_results(run_plan(plan))
    return 0


def _cmd_sweep(opts: dict, fraction_given: bool) -> int:
    fractions = opts["fraction"] if fraction_given else SWEEP_FRACTIONS
    results = sweep(
        fractions,
        snr=_single(opts["snr"], "--snr"),
        cycles=int(_single(opts["cycles"], "--cycles")),
        seeds=tuple(opts["seeds"]),
        hyper=_hyper(opts),
        per_class=opts["per_class"],
        output_dir=opts["out"],
    )
    _print_results(results)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pqevolve",
        description="Streaming power-quality disturbance classification experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("generate", "dump waveform and attribute CSVs for one cell"),
        ("run", "run a single grid cell over its seeds"),
        ("plan", "run the full snr x cycles x fraction grid"),
        ("sweep", "run a labeled-fraction sweep"),
    ]:
        _add_common(sub.add_parser(name, help=help_text))

    args = parser.parse_args(argv)
    opts = _resolve(args)
    if args.command == "generate":
        return _cmd_generate(opts)
    if args.command == "run":
        return _cmd_run(opts)
    if args.command == "plan":
        return _cmd_plan(opts)
    fraction_given = args.fraction is not None or (
        args.config is not None and "fraction" in json.load(open(args.config))
    )
    return _cmd_sweep(opts, fraction_given)


if __name__ == "__main__":
    sys.exit(main())
