"""End-to-end run: edge CSV -> snapshots -> features -> detrend -> states -> files."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .features import FEATURE_NAMES, FeatureSeries, extract_features
from .snapshots import DAY, DecayConfig, build_snapshots, dump_snapshots
from .states import StateModel, TransitionMatrix, fit_state_space
from .stream import EdgeStream, read_edge_stream
from .trend import detrend

log = logging.getLogger(__name__)

FEATURES_HEADER = ("day",) + FEATURE_NAMES + tuple(f"{n}_detrended" for n in FEATURE_NAMES)


def fmt(x: float) -> str:
    return f"{float(x):.12g}"


def round12(a) -> np.ndarray:
    """Round to the 12 significant digits written to disk, so dumps re-read exactly."""
    return np.vectorize(lambda x: float(fmt(x)), otypes=[float])(np.asarray(a, dtype=float))


@dataclass
class RunConfig:
    input: Union[str, Path]
    out_dir: Union[str, Path]
    model: str = "discrete"
    delta_days: float = 1
    tau_days: float = 12
    cutoff: float = 1e-4
    k: int = 7
    seed: int = 42
    restarts: int = 1
    cluster_on: str = "detrended"
    standardize: bool = True
    degree_denominator: str = "active"
    dump_snapshots: bool = False

    def __post_init__(self):
        if self.model not in ("discrete", "prob"):
            raise ValueError(f"model must be 'discrete' or 'prob', got {self.model!r}")
        if self.cluster_on not in ("detrended", "raw"):
            raise ValueError(f"cluster_on must be 'detrended' or 'raw', got {self.cluster_on!r}")
        if self.degree_denominator not in ("active", "global"):
            raise ValueError(f"degree_denominator must be 'active' or 'global', got {self.degree_denominator!r}")
        for name in ("delta_days", "tau_days", "cutoff", "k", "restarts"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if not self.cutoff < 1:
            raise ValueError(f"cutoff must be below 1, got {self.cutoff}")
        if self.delta_days * DAY != int(self.delta_days * DAY):
            raise ValueError("delta_days must be a whole number of seconds")


@dataclass
class RunResult:
    features: FeatureSeries
    model: StateModel
    transitions: TransitionMatrix
    n_snapshots: int


def compute_features(stream: EdgeStream, cfg: RunConfig, snapshot_sink=None) -> FeatureSeries:
    if cfg.model == "discrete":
        snaps = build_snapshots(stream, "discrete", delta_t=int(cfg.delta_days * DAY))
    else:
        snaps = build_snapshots(stream, "prob", decay=DecayConfig(tau=cfg.tau_days * DAY, cutoff=cfg.cutoff))
    if snapshot_sink is not None:
        dump_snapshots(snaps, snapshot_sink)
    n_nodes = stream.node_count if cfg.degree_denominator == "global" else None
    return extract_features(snaps, n_nodes)


def states_from_features(raw, cfg: RunConfig) -> tuple[FeatureSeries, StateModel, TransitionMatrix]:
    """Detrend and cluster an already extracted raw feature matrix."""
    raw = np.asarray(raw, dtype=float)
    if len(raw) < cfg.k:
        raise ValueError(f"insufficient snapshots: {len(raw)} timesteps for k={cfg.k} states")
    series = detrend(FeatureSeries(round12(raw)))
    series.detrended = round12(series.detrended)
    model, trans = fit_state_space(
        series, cfg.k, cfg.seed, restarts=cfg.restarts, on=cfg.cluster_on,
        standardize_features=cfg.standardize,
    )
    return series, model, trans


def write_features(series: FeatureSeries, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(FEATURES_HEADER) + "\n")
        for day, (raw, det) in enumerate(zip(series.raw, series.detrended)):
            fh.write(",".join([str(day)] + [fmt(x) for x in (*raw, *det)]) + "\n")


def read_features(path: Union[str, Path]) -> FeatureSeries:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    raw = [[float(r[n]) for n in FEATURE_NAMES] for r in rows]
    det = [[float(r[f"{n}_detrended"]) for n in FEATURE_NAMES] for r in rows]
    return FeatureSeries(np.array(raw), np.array(det))


def write_states(labels, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("day,state\n")
        for day, s in enumerate(labels):
            fh.write(f"{day},{s}\n")


def _write_json(obj, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def run_pipeline(cfg: RunConfig) -> RunResult:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stream = read_edge_stream(cfg.input)
    log.info("read %d edges over %d nodes (%d self-loops dropped)",
             len(stream), stream.node_count, stream.dropped_self_loops)

    sink = open(out / "snapshots.jsonl", "w", encoding="utf-8", newline="\n") if cfg.dump_snapshots else None
    try:
        raw = compute_features(stream, cfg, sink).raw
    finally:
        if sink is not None:
            sink.close()

    series, model, trans = states_from_features(raw, cfg)
    write_features(series, out / "features.csv")
    write_states(model.labels, out / "states.csv")
    _write_json(trans.to_dict(), out / "transitions.json")
    _write_json(model.to_dict(), out / "model.json")
    return RunResult(series, model, trans, len(series))
