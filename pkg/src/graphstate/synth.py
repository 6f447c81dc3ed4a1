"""Synthetic edge streams with planted low-activity events, and detection scoring."""

from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .snapshots import DAY
from .stream import EdgeStream, normalize

BASELINE = "base"
DEFAULT_WEEKDAY_FACTORS = (1.0, 1.0, 1.0, 1.0, 1.0, 0.3, 0.3)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Event:
    start: int
    end: int  # inclusive
    multiplier: float

    def days(self) -> range:
        return range(self.start, self.end + 1)


@dataclass(frozen=True)
class SynthConfig:
    n_nodes: int
    n_days: int
    base_edges_per_day: float
    weekday_factors: tuple[float, ...] = DEFAULT_WEEKDAY_FACTORS
    events: tuple[Event, ...] = ()
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "weekday_factors", tuple(float(f) for f in self.weekday_factors))
        object.__setattr__(self, "events", tuple(self.events))
        if self.n_nodes < 2:
            raise ConfigError(f"n_nodes must be >= 2, got {self.n_nodes}")
        if self.n_days < 1:
            raise ConfigError(f"n_days must be >= 1, got {self.n_days}")
        if not self.base_edges_per_day > 0:
            raise ConfigError("base_edges_per_day must be positive")
        if len(self.weekday_factors) != 7 or min(self.weekday_factors) <= 0:
            raise ConfigError("weekday_factors must be 7 positive numbers")
        for ev in self.events:
            if not 0 <= ev.start <= ev.end < self.n_days:
                raise ConfigError(f"event [{ev.start}, {ev.end}] outside [0, {self.n_days})")
            if not 0 < ev.multiplier <= 1:
                raise ConfigError(f"event multiplier must lie in (0, 1], got {ev.multiplier}")
        spans = sorted((ev.start, ev.end) for ev in self.events)
        for (_, end), (start, _) in zip(spans, spans[1:]):
            if start <= end:
                raise ConfigError("events may not overlap")

    @classmethod
    def from_dict(cls, d: dict) -> "SynthConfig":
        try:
            events = tuple(Event(int(e["start"]), int(e["end"]), float(e["multiplier"]))
                           for e in d.get("events", []))
            return cls(
                n_nodes=int(d["n_nodes"]),
                n_days=int(d["n_days"]),
                base_edges_per_day=float(d["base_edges_per_day"]),
                weekday_factors=tuple(d.get("weekday_factors", DEFAULT_WEEKDAY_FACTORS)),
                events=events,
                seed=int(d.get("seed", 0)),
            )
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"invalid synth config: {exc}") from None

    @classmethod
    def load(cls, path: Union[str, Path]) -> "SynthConfig":
        with open(path, encoding="utf-8") as fh:
            try:
                return cls.from_dict(json.load(fh))
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from None

    def to_dict(self) -> dict:
        return {
            "n_nodes": self.n_nodes,
            "n_days": self.n_days,
            "base_edges_per_day": self.base_edges_per_day,
            "weekday_factors": list(self.weekday_factors),
            "events": [{"start": e.start, "end": e.end, "multiplier": e.multiplier} for e in self.events],
            "seed": self.seed,
        }

    def event_multiplier(self, day: int) -> float:
        for ev in self.events:
            if ev.start <= day <= ev.end:
                return ev.multiplier
        return 1.0

    def expected_edges(self, day: int) -> float:
        return self.base_edges_per_day * self.weekday_factors[day % 7] * self.event_multiplier(day)

    def truth_labels(self) -> list[str]:
        labels = [BASELINE] * self.n_days
        for i, ev in enumerate(self.events):
            for d in ev.days():
                labels[d] = f"event_{i}"
        return labels


def node_weights(n_nodes: int) -> np.ndarray:
    """Endpoint distribution with ``P(i)`` proportional to ``1 / (i + 1)``."""
    w = 1.0 / np.arange(1, n_nodes + 1)
    return w / w.sum()


def generate_stream(cfg: SynthConfig) -> tuple[EdgeStream, list[str]]:
    """Draw a Poisson number of edges per day between heavy-tailed endpoints."""
    rng = np.random.default_rng(cfg.seed)
    p = node_weights(cfg.n_nodes)
    raw = []
    for day in range(cfg.n_days):
        m = int(rng.poisson(cfg.expected_edges(day)))
        if m == 0:
            continue
        u = rng.choice(cfg.n_nodes, size=m, p=p)
        v = rng.choice(cfg.n_nodes, size=m, p=p)
        clash = np.flatnonzero(u == v)
        while len(clash):
            v[clash] = rng.choice(cfg.n_nodes, size=len(clash), p=p)
            clash = clash[u[clash] == v[clash]]
        t = day * DAY + rng.integers(0, DAY, size=m)
        raw.extend(zip(u.tolist(), v.tolist(), t.tolist()))
    return normalize(raw), cfg.truth_labels()


def write_truth(labels: Sequence[str], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("day,label\n")
        for day, label in enumerate(labels):
            fh.write(f"{day},{label}\n")


def read_day_column(path: Union[str, Path], column: str) -> list[str]:
    """Read ``day,<column>`` CSV, checking that days run 0, 1, 2, ..."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "day" not in reader.fieldnames or column not in reader.fieldnames:
            raise ValueError(f"{path}: expected columns 'day,{column}'")
        out = []
        for i, row in enumerate(reader):
            if int(row["day"]) != i:
                raise ValueError(f"{path}: day {row['day']} out of sequence at row {i}")
            out.append(row[column])
    return out


def _modal(labels: Sequence[str]) -> Optional[str]:
    if not labels:
        return None
    counts = Counter(labels)
    top = max(counts.values())
    return min(s for s, c in counts.items() if c == top)


@dataclass
class EventDetection:
    name: str
    start: int
    end: int
    modal_state: str
    purity: float
    distinct: bool


@dataclass
class DetectionReport:
    events: list[EventDetection]
    baseline_modal_state: Optional[str]
    pairwise_distinct: dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "baseline_modal_state": self.baseline_modal_state,
            "events": [vars(e) for e in self.events],
            "pairwise_distinct": dict(self.pairwise_distinct),
        }


def evaluate_detection(labels: Sequence[str], truth: Sequence[str], events: Sequence[Event]) -> DetectionReport:
    """Score how cleanly each planted event maps onto a single state.

    Purity is the share of an event's days carrying the event's modal state.
    The baseline modal state is taken over non-event days; modal ties go to
    the alphabetically first state.
    """
    labels = list(labels)
    if len(labels) != len(truth):
        raise ValueError(f"length mismatch: {len(labels)} state labels vs {len(truth)} truth days")
    for ev in events:
        if ev.end >= len(labels):
            raise ValueError(f"event [{ev.start}, {ev.end}] runs past {len(labels)} days")
    baseline = _modal([s for s, g in zip(labels, truth) if g == BASELINE])

    found = []
    for i, ev in enumerate(events):
        days = [labels[d] for d in ev.days()]
        modal = _modal(days)
        purity = days.count(modal) / len(days)
        found.append(EventDetection(f"event_{i}", ev.start, ev.end, modal, purity, modal != baseline))

    pairwise = {
        f"{a.name}|{b.name}": a.modal_state != b.modal_state
        for i, a in enumerate(found) for b in found[i + 1:]
    }
    return DetectionReport(found, baseline, pairwise)
