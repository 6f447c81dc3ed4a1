"""Per-timestep snapshot graphs built from an edge stream.

Two representations are supported:

* discrete: edges are bucketed into non-overlapping windows of ``delta_t``
  seconds and every pair seen in a window gets weight 1.
* probabilistic: at evaluation time ``t`` a pair last seen at ``t'`` has
  weight ``exp(-(t - t') / tau)``; pairs whose weight drops below ``cutoff``
  are aged out.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, TextIO

import numpy as np

from .stream import EdgeStream

DAY = 86400


class SnapshotError(ValueError):
    pass


@dataclass(frozen=True)
class SnapshotGraph:
    """One timestep's weighted undirected simple graph.

    Edges are held as parallel arrays sorted by ``(u, v)`` with ``u < v``.
    """

    index: int
    eval_time: int
    u: np.ndarray
    v: np.ndarray
    weight: np.ndarray

    def __post_init__(self):
        for name in ("u", "v", "weight"):
            getattr(self, name).setflags(write=False)

    @classmethod
    def from_edges(cls, index: int, eval_time: int, edges: dict[tuple[int, int], float]) -> "SnapshotGraph":
        pairs = []
        for (a, b), w in edges.items():
            if a == b:
                raise SnapshotError(f"self-loop on node {a}")
            pairs.append((min(a, b), max(a, b), float(w)))
        pairs.sort()
        if pairs:
            u, v, w = (np.array(col) for col in zip(*pairs))
        else:
            u = v = np.empty(0, dtype=np.int64)
            w = np.empty(0, dtype=float)
        return cls(index, eval_time, u.astype(np.int64), v.astype(np.int64), w.astype(float))

    @property
    def n_edges(self) -> int:
        return len(self.weight)

    @property
    def edges(self) -> dict[tuple[int, int], float]:
        return {(int(a), int(b)): float(w) for a, b, w in zip(self.u, self.v, self.weight)}

    @property
    def active_nodes(self) -> np.ndarray:
        """Sorted ids of nodes with at least one incident edge."""
        return np.unique(np.concatenate([self.u, self.v]))

    def to_json(self) -> str:
        edges = [[int(a), int(b), float(f"{w:.12g}")] for a, b, w in zip(self.u, self.v, self.weight)]
        return json.dumps({"index": self.index, "eval_time": self.eval_time, "edges": edges})


@dataclass(frozen=True)
class DiscreteConfig:
    delta_t: int = DAY
    t0: int = 0

    def __post_init__(self):
        if self.delta_t <= 0:
            raise ValueError(f"delta_t must be positive, got {self.delta_t}")


@dataclass(frozen=True)
class DecayConfig:
    tau: float = 12 * DAY
    cutoff: float = 1e-4
    grid_step: int = DAY

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if not 0 < self.cutoff < 1:
            raise ValueError(f"cutoff must lie in (0, 1), got {self.cutoff}")
        if self.grid_step <= 0:
            raise ValueError(f"grid_step must be positive, got {self.grid_step}")

    @property
    def lifetime(self) -> float:
        """Age in seconds past which a pair with no new contact is dropped."""
        return self.tau * math.log(1.0 / self.cutoff)


def window_origin(t: int, delta_t: int = DAY) -> int:
    """Start of the window containing ``t`` on a grid anchored at epoch 0."""
    return (t // delta_t) * delta_t


def n_windows(stream: EdgeStream, t0: int, delta_t: int) -> int:
    if stream.empty:
        raise SnapshotError("no snapshots derivable from an empty stream")
    if t0 > stream.t_min:
        raise SnapshotError(f"t0={t0} lies after the first edge at t={stream.t_min}")
    return -(-(stream.t_max - t0 + 1) // delta_t)


def discrete_snapshots(stream: EdgeStream, cfg: DiscreteConfig) -> list[SnapshotGraph]:
    n = n_windows(stream, cfg.t0, cfg.delta_t)
    buckets: list[dict[tuple[int, int], float]] = [{} for _ in range(n)]
    for u, v, t in stream.edges:
        buckets[(t - cfg.t0) // cfg.delta_t][(u, v)] = 1.0
    return [
        SnapshotGraph.from_edges(i, cfg.t0 + i * cfg.delta_t, bucket)
        for i, bucket in enumerate(buckets)
    ]


def decay_probability(t: float, t_prime: float, tau: float) -> float:
    """Survival probability ``exp(-(t - t_prime) / tau)`` of an edge last seen at ``t_prime``."""
    if t < t_prime:
        raise ValueError(f"evaluation time {t} precedes edge time {t_prime}")
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    return math.exp(-(t - t_prime) / tau)


def probabilistic_snapshots(
    stream: EdgeStream, cfg: DecayConfig, t0: int, n_steps: int
) -> list[SnapshotGraph]:
    """Evaluate the decayed graph at the end of each of ``n_steps`` grid cells.

    Snapshot ``i`` is evaluated at ``t0 + (i + 1) * grid_step - 1``. Each pair
    carries only its most recent contact time.
    """
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")

    pair_index: dict[tuple[int, int], int] = {}
    pair_u: list[int] = []
    pair_v: list[int] = []
    last_seen = np.empty(0, dtype=float)
    edges = stream.edges
    pos = 0
    out = []
    for i in range(n_steps):
        eval_time = t0 + (i + 1) * cfg.grid_step - 1
        updates: dict[int, int] = {}
        while pos < len(edges) and edges[pos].t <= eval_time:
            u, v, t = edges[pos]
            idx = pair_index.get((u, v))
            if idx is None:
                idx = pair_index[(u, v)] = len(pair_u)
                pair_u.append(u)
                pair_v.append(v)
            updates[idx] = t
            pos += 1
        if len(pair_u) > len(last_seen):
            grown = np.full(len(pair_u), -np.inf)
            grown[: len(last_seen)] = last_seen
            last_seen = grown
        if updates:
            idx = np.fromiter(updates.keys(), dtype=np.int64, count=len(updates))
            last_seen[idx] = np.fromiter(updates.values(), dtype=float, count=len(updates))

        seen = np.isfinite(last_seen)
        weight = np.zeros(len(last_seen))
        weight[seen] = np.exp(-(eval_time - last_seen[seen]) / cfg.tau)
        keep = np.flatnonzero(seen & (weight >= cfg.cutoff))
        u_arr = np.asarray(pair_u, dtype=np.int64)[keep]
        v_arr = np.asarray(pair_v, dtype=np.int64)[keep]
        order = np.lexsort((v_arr, u_arr))
        out.append(SnapshotGraph(i, eval_time, u_arr[order], v_arr[order], weight[keep][order]))
    return out


def build_snapshots(
    stream: EdgeStream,
    model: str,
    *,
    delta_t: int = DAY,
    decay: Optional[DecayConfig] = None,
) -> list[SnapshotGraph]:
    """Snapshots on a day-aligned grid; both models yield the same count for ``delta_t == grid_step``."""
    if model == "discrete":
        t0 = window_origin(stream.t_min, delta_t) if not stream.empty else 0
        return discrete_snapshots(stream, DiscreteConfig(delta_t=delta_t, t0=t0))
    if model == "prob":
        decay = decay or DecayConfig()
        if stream.empty:
            raise SnapshotError("no snapshots derivable from an empty stream")
        t0 = window_origin(stream.t_min, decay.grid_step)
        return probabilistic_snapshots(stream, decay, t0, n_windows(stream, t0, decay.grid_step))
    raise ValueError(f"unknown model {model!r}")


def dump_snapshots(snapshots: Iterable[SnapshotGraph], fh: TextIO) -> None:
    for g in snapshots:
        fh.write(g.to_json() + "\n")


def load_snapshots(lines: Sequence[str]) -> list[SnapshotGraph]:
    out = []
    for line in lines:
        if not line.strip():
            continue
        rec = json.loads(line)
        out.append(SnapshotGraph.from_edges(
            rec["index"], rec["eval_time"], {(a, b): w for a, b, w in rec["edges"]}
        ))
    return out
