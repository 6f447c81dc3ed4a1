"""Average degree and average clustering of (probabilistic) snapshots.

Weights are read as independent edge probabilities. The local clustering of
``v`` is the expected number of closed wedges centred on ``v`` divided by the
expected number of wedges, which is the usual coefficient on 0/1 graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .snapshots import SnapshotGraph


class FeatureVector(NamedTuple):
    avg_degree: float
    avg_clustering: float


FEATURE_NAMES = FeatureVector._fields


@dataclass
class FeatureSeries:
    """Per-timestep features; ``raw`` and ``detrended`` are ``(n, 2)`` arrays."""

    raw: np.ndarray
    detrended: Optional[np.ndarray] = None

    def __post_init__(self):
        self.raw = np.asarray(self.raw, dtype=float).reshape(-1, len(FEATURE_NAMES))
        if self.detrended is not None:
            self.detrended = np.asarray(self.detrended, dtype=float)
            if self.detrended.shape != self.raw.shape:
                raise ValueError("detrended series must align with raw series")

    def __len__(self) -> int:
        return len(self.raw)

    def __getitem__(self, i: int) -> FeatureVector:
        return FeatureVector(*map(float, self.raw[i]))


def _dense(g: SnapshotGraph) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric weight matrix over the snapshot's active nodes (ascending id)."""
    nodes = g.active_nodes
    iu = np.searchsorted(nodes, g.u)
    iv = np.searchsorted(nodes, g.v)
    w = np.zeros((len(nodes), len(nodes)))
    w[iu, iv] = g.weight
    w[iv, iu] = g.weight
    return nodes, w


def average_degree(g: SnapshotGraph, n_nodes: Optional[int] = None) -> float:
    """Twice the total weight over the node count.

    The count defaults to the active nodes of ``g``; pass ``n_nodes`` to use a
    fixed global population instead.
    """
    denom = len(g.active_nodes) if n_nodes is None else n_nodes
    if g.n_edges == 0 or denom == 0:
        return 0.0
    return 2.0 * float(np.sum(g.weight)) / denom


def local_clustering(g: SnapshotGraph, v: int) -> float:
    """Expected closed wedges over expected wedges at ``v``, by direct enumeration."""
    edges = g.edges
    nbrs: dict[int, float] = {}
    for (a, b), w in edges.items():
        if a == v:
            nbrs[b] = w
        elif b == v:
            nbrs[a] = w
    if not nbrs:
        raise ValueError(f"node {v} is not active in snapshot {g.index}")
    ordered = sorted(nbrs)
    if len(ordered) < 2:
        return 0.0
    closed = wedges = 0.0
    for a, j in enumerate(ordered):
        for k in ordered[a + 1:]:
            pair = nbrs[j] * nbrs[k]
            wedges += pair
            closed += pair * edges.get((j, k), 0.0)
    return closed / wedges if wedges > 0 else 0.0


def local_clustering_all(g: SnapshotGraph) -> tuple[np.ndarray, np.ndarray]:
    """Local clustering of every active node, vectorised.

    Returns ``(nodes, coefficients)``. With ``W`` the weight matrix (zero
    diagonal), closed wedges at ``v`` are ``(W^3)_vv / 2`` and wedges are
    ``((sum_j w_vj)^2 - sum_j w_vj^2) / 2``.
    """
    nodes, w = _dense(g)
    if len(nodes) == 0:
        return nodes, np.zeros(0)
    closed = np.einsum("ij,ij->i", w @ w, w)
    strength = w.sum(axis=1)
    wedges = strength ** 2 - (w * w).sum(axis=1)
    deg = (w > 0).sum(axis=1)
    coef = np.zeros(len(nodes))
    ok = (deg >= 2) & (wedges > 0)
    coef[ok] = closed[ok] / wedges[ok]
    # rounding can push a fully closed neighbourhood a hair past 1
    return nodes, np.clip(coef, 0.0, 1.0)


def average_clustering(g: SnapshotGraph) -> float:
    nodes, coef = local_clustering_all(g)
    if len(nodes) == 0:
        return 0.0
    return float(np.mean(coef))


def snapshot_features(g: SnapshotGraph, n_nodes: Optional[int] = None) -> FeatureVector:
    return FeatureVector(average_degree(g, n_nodes), average_clustering(g))


def extract_features(snapshots: Sequence[SnapshotGraph], n_nodes: Optional[int] = None) -> FeatureSeries:
    if len(snapshots) == 0:
        raise ValueError("cannot extract features from an empty snapshot sequence")
    return FeatureSeries(np.array([snapshot_features(g, n_nodes) for g in snapshots], dtype=float))
