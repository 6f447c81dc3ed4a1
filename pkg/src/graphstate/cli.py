"""Command line interface: ``graphstate run|synth|eval``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .pipeline import RunConfig, run_pipeline
from .stream import StreamError, write_edge_stream
from .synth import ConfigError, SynthConfig, evaluate_detection, generate_stream, read_day_column, write_truth

log = logging.getLogger("graphstate")

SEED_ENV = "GRAPHSTATE_SEED"
DISCRETE_ONLY = ("delta_days",)
PROB_ONLY = ("tau_days", "cutoff")


def _positive(kind):
    def parse(text):
        value = kind(text)
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphstate", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="learn latent states from an edge CSV")
    run.add_argument("--input", required=True, help="CSV of src,dst,timestamp")
    run.add_argument("--out-dir", required=True)
    run.add_argument("--model", choices=("discrete", "prob"), default="discrete")
    # model-specific options default to None so an explicit value can be detected
    run.add_argument("--delta-days", type=_positive(float), default=None, help="window length (discrete, default 1)")
    run.add_argument("--tau-days", type=_positive(float), default=None, help="mean edge lifetime (prob, default 12)")
    run.add_argument("--cutoff", type=_positive(float), default=None, help="age-out probability (prob, default 1e-4)")
    run.add_argument("--k", type=_positive(int), default=7)
    run.add_argument("--seed", type=int, default=42, help=f"PRNG seed; ${SEED_ENV} overrides")
    run.add_argument("--restarts", type=_positive(int), default=1)
    run.add_argument("--cluster-on", choices=("detrended", "raw"), default="detrended")
    run.add_argument("--standardize", dest="standardize", action="store_true", default=True)
    run.add_argument("--no-standardize", dest="standardize", action="store_false")
    run.add_argument("--degree-denominator", choices=("active", "global"), default="active")
    run.add_argument("--dump-snapshots", action="store_true", help="also write snapshots.jsonl")

    synth = sub.add_parser("synth", help="generate a synthetic edge stream with planted events")
    synth.add_argument("--config", required=True, help="synthetic stream JSON config")
    synth.add_argument("--edges", required=True, help="output edge CSV")
    synth.add_argument("--truth", required=True, help="output ground-truth CSV")
    synth.add_argument("--seed", type=int, default=None, help="override the config seed")

    ev = sub.add_parser("eval", help="score states.csv against planted events")
    ev.add_argument("--states", required=True)
    ev.add_argument("--truth", required=True)
    ev.add_argument("--config", required=True, help="the synthetic config that produced the truth")
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    seed = args.seed
    if os.environ.get(SEED_ENV):
        seed = int(os.environ[SEED_ENV])
    ignored = PROB_ONLY if args.model == "discrete" else DISCRETE_ONLY
    for name in ignored:
        if getattr(args, name) is not None:
            log.warning("--%s has no effect with --model %s", name.replace("_", "-"), args.model)
    defaults = RunConfig(input="", out_dir="")
    return RunConfig(
        input=args.input,
        out_dir=args.out_dir,
        model=args.model,
        delta_days=args.delta_days if args.delta_days is not None else defaults.delta_days,
        tau_days=args.tau_days if args.tau_days is not None else defaults.tau_days,
        cutoff=args.cutoff if args.cutoff is not None else defaults.cutoff,
        k=args.k,
        seed=seed,
        restarts=args.restarts,
        cluster_on=args.cluster_on,
        standardize=args.standardize,
        degree_denominator=args.degree_denominator,
        dump_snapshots=args.dump_snapshots,
    )


def cmd_run(args) -> int:
    result = run_pipeline(_run_config(args))
    log.info("wrote %d timesteps, inertia %.6g", result.n_snapshots, result.model.inertia)
    return 0


def cmd_synth(args) -> int:
    cfg = SynthConfig.load(args.config)
    if args.seed is not None:
        cfg = SynthConfig(**{**cfg.__dict__, "seed": args.seed})
    stream, truth = generate_stream(cfg)
    for path in (args.edges, args.truth):
        Path(path).parent.mkdir(parents=True, exist_ok=True)
    write_edge_stream(stream, args.edges)
    write_truth(truth, args.truth)
    log.info("wrote %d edges over %d days", len(stream), cfg.n_days)
    return 0


def cmd_eval(args) -> int:
    cfg = SynthConfig.load(args.config)
    labels = read_day_column(args.states, "state")
    truth = read_day_column(args.truth, "label")
    if len(truth) != cfg.n_days:
        raise ValueError(f"{args.truth} has {len(truth)} days, config says {cfg.n_days}")
    report = evaluate_detection(labels, truth, cfg.events)
    json.dump(report.to_dict(), sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


COMMANDS = {"run": cmd_run, "synth": cmd_synth, "eval": cmd_eval}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (OSError, StreamError, ConfigError, ValueError) as exc:
        print(f"graphstate {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
