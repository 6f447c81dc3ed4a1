"""Latent states: seeded k-means over snapshot features and transition counts."""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .features import FeatureSeries

STATE_LETTERS = string.ascii_uppercase
ZERO_STD = 1e-12


@dataclass(frozen=True)
class Standardization:
    mean: np.ndarray
    std: np.ndarray

    def apply(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        safe = np.where(self.std > 0, self.std, 1.0)
        out = (points - self.mean) / safe
        out[:, self.std == 0] = 0.0
        return out

    @classmethod
    def identity(cls, d: int) -> "Standardization":
        return cls(np.zeros(d), np.ones(d))


def standardize(points) -> tuple[np.ndarray, Standardization]:
    """Column-wise z-scores with population std; near-constant columns become zeros."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D array, got shape {points.shape}")
    mean = points.mean(axis=0)
    std = points.std(axis=0)
    std = np.where(std < ZERO_STD, 0.0, std)
    params = Standardization(mean, std)
    return params.apply(points), params


@dataclass
class KMeansResult:
    centroids: np.ndarray
    assignments: np.ndarray
    inertia: float
    seed: int
    n_iter: int
    inertia_history: list[float] = field(default_factory=list)


def _sq_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centroids[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def _kmeanspp(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(points)
    chosen = [int(rng.integers(n))]
    closest = _sq_distances(points, points[chosen])[:, 0]
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            # inverse-CDF draw; cumsum is evaluated in index order
            cdf = np.cumsum(closest)
            idx = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
            idx = min(idx, n - 1)
            while closest[idx] == 0:
                idx -= 1
        else:
            # every point already coincides with a centre
            rng.random()
            idx = next(i for i in range(n) if i not in chosen)
        chosen.append(idx)
        closest = np.minimum(closest, _sq_distances(points, points[[idx]])[:, 0])
    return points[chosen].copy()


def _repair_empty(points, centroids, labels, dist) -> None:
    """Give each empty cluster the point farthest from its own centroid."""
    k = len(centroids)
    for j in range(k):
        counts = np.bincount(labels, minlength=k)
        if counts[j] > 0:
            continue
        own = dist[np.arange(len(points)), labels].copy()
        own[counts[labels] < 2] = -1.0
        p = int(np.argmax(own))
        labels[p] = j
        centroids[j] = points[p]
        dist[:, j] = _sq_distances(points, centroids[[j]])[:, 0]


def kmeans(points, k: int, seed: int, max_iter: int = 300, tol: float = 1e-9) -> KMeansResult:
    """Lloyd's algorithm from a seeded k-means++ start.

    Ties in the assignment step go to the lowest centroid index. The history
    records the inertia of every assignment, so it is non-increasing.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    n = len(points)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n < k:
        raise ValueError(f"need at least k={k} points, got {n}")
    if not np.all(np.isfinite(points)):
        raise ValueError("points contain non-finite values")

    rng = np.random.default_rng(seed)
    centroids = _kmeanspp(points, k, rng)
    history = []
    n_iter = 0
    while True:
        dist = _sq_distances(points, centroids)
        labels = np.argmin(dist, axis=1)
        _repair_empty(points, centroids, labels, dist)
        history.append(float(dist[np.arange(n), labels].sum()))
        if n_iter >= max_iter:
            break
        updated = np.array([points[labels == j].mean(axis=0) for j in range(k)])
        shift = float(np.sqrt(((updated - centroids) ** 2).sum(axis=1)).max())
        centroids = updated
        n_iter += 1
        if shift < tol:
            # one more assignment pass below so labels match the final centroids
            dist = _sq_distances(points, centroids)
            labels = np.argmin(dist, axis=1)
            _repair_empty(points, centroids, labels, dist)
            history.append(float(dist[np.arange(n), labels].sum()))
            break
    return KMeansResult(centroids, labels, history[-1], seed, n_iter, history)


def best_of_restarts(points, k: int, seed: int, restarts: int = 1, **kwargs) -> KMeansResult:
    """Run seeds ``seed .. seed + restarts - 1`` and keep the lowest inertia (earliest on ties)."""
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    best = None
    for s in range(seed, seed + restarts):
        res = kmeans(points, k, s, **kwargs)
        if best is None or res.inertia < best.inertia:
            best = res
    return best


@dataclass
class StateModel:
    k: int
    centroids: np.ndarray
    labels: list[str]
    inertia: float
    seed: int
    standardization: Standardization
    centroid_order: list[int] = field(default_factory=list)
    best_seed: Optional[int] = None

    @property
    def label_string(self) -> str:
        return "".join(self.labels)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "seed": self.seed,
            "best_seed": self.best_seed,
            "standardization": {
                "mean": [_r12(x) for x in self.standardization.mean],
                "std": [_r12(x) for x in self.standardization.std],
            },
            "centroids_standardized": [[_r12(x) for x in row] for row in self.centroids],
            "centroid_order": list(self.centroid_order),
            "inertia": _r12(self.inertia),
        }


def _r12(x: float) -> float:
    return float(f"{float(x):.12g}")


def relabel_states(
    centroids, assignments, *, k: Optional[int] = None, inertia: float = 0.0, seed: int = 0,
    standardization: Optional[Standardization] = None,
) -> StateModel:
    """Rename clusters A, B, ... by ascending centroid (first feature, then second)."""
    centroids = np.asarray(centroids, dtype=float)
    if centroids.ndim == 1:
        centroids = centroids[:, None]
    k = len(centroids) if k is None else k
    if k > len(STATE_LETTERS):
        raise ValueError(f"at most {len(STATE_LETTERS)} states supported, got {k}")
    keys = [centroids[:, c] for c in reversed(range(centroids.shape[1]))]
    order = np.lexsort(keys) if keys else np.arange(k)
    rank = np.empty(k, dtype=int)
    rank[order] = np.arange(k)
    labels = [STATE_LETTERS[rank[a]] for a in np.asarray(assignments)]
    return StateModel(
        k=k,
        centroids=centroids[order],
        labels=labels,
        inertia=float(inertia),
        seed=seed,
        standardization=standardization or Standardization.identity(centroids.shape[1]),
        centroid_order=[int(i) for i in order],
    )


@dataclass
class TransitionMatrix:
    k: int
    labels: str
    counts: np.ndarray

    def to_dict(self) -> dict:
        return {"k": self.k, "labels": self.labels, "counts": self.counts.tolist()}


def transition_matrix(labels: Sequence[str], k: int) -> TransitionMatrix:
    labels = list(labels)
    if len(labels) < 2:
        raise ValueError(f"need at least 2 labels for transitions, got {len(labels)}")
    letters = STATE_LETTERS[:k]
    index = {s: i for i, s in enumerate(letters)}
    counts = np.zeros((k, k), dtype=np.int64)
    for a, b in zip(labels, labels[1:]):
        try:
            counts[index[a], index[b]] += 1
        except KeyError as exc:
            raise ValueError(f"label {exc.args[0]!r} outside states {letters}") from None
    return TransitionMatrix(k, "".join(labels), counts)


def fit_state_space(
    series: FeatureSeries,
    k: int = 7,
    seed: int = 42,
    *,
    restarts: int = 1,
    on: str = "detrended",
    standardize_features: bool = True,
) -> tuple[StateModel, TransitionMatrix]:
    if on == "detrended":
        if series.detrended is None:
            raise ValueError("series has no detrended features; run detrend() first")
        points = series.detrended
    elif on == "raw":
        points = series.raw
    else:
        raise ValueError(f"unknown feature set {on!r}")
    if len(points) < k:
        raise ValueError(f"insufficient snapshots: {len(points)} timesteps for k={k} states")

    if standardize_features:
        z, params = standardize(points)
    else:
        z, params = np.asarray(points, dtype=float), Standardization.identity(points.shape[1])
    fit = best_of_restarts(z, k, seed, restarts)
    model = relabel_states(
        fit.centroids, fit.assignments, k=k, inertia=fit.inertia, seed=seed, standardization=params,
    )
    model.best_seed = fit.seed
    return model, transition_matrix(model.labels, k)
