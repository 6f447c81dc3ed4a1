"""Brute-force reference computations used by the tests."""

from itertools import combinations, product

import numpy as np


def adjacency(edges):
    adj = {}
    for (a, b), w in edges.items():
        adj.setdefault(a, {})[b] = w
        adj.setdefault(b, {})[a] = w
    return adj


def binary_features(edges):
    """Average degree and clustering of a 0/1 graph by counting triangles over all node triples."""
    adj = adjacency({p: w for p, w in edges.items() if w > 0})
    nodes = sorted(adj)
    if not nodes:
        return 0.0, 0.0
    deg = {v: len(adj[v]) for v in nodes}
    tri = dict.fromkeys(nodes, 0)
    for a, b, c in combinations(nodes, 3):
        if b in adj[a] and c in adj[a] and c in adj[b]:
            for v in (a, b, c):
                tri[v] += 1
    coef = [tri[v] / (deg[v] * (deg[v] - 1) / 2) if deg[v] >= 2 else 0.0 for v in nodes]
    return sum(deg.values()) / len(nodes), sum(coef) / len(nodes)


def weighted_local_clustering(edges, v):
    """Expected closed / expected wedges at ``v`` by enumerating every ordered pair of other nodes."""
    adj = adjacency(edges)
    others = [x for x in adj if x != v]
    w = lambda a, b: adj.get(a, {}).get(b, 0.0)
    num = den = 0.0
    for j, k in product(others, others):
        if j < k:
            num += w(v, j) * w(v, k) * w(j, k)
            den += w(v, j) * w(v, k)
    return num / den if den > 0 else 0.0


def all_partitions_inertia(points, k):
    """Minimum within-cluster sum of squares over every assignment of points to k labels."""
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    best = np.inf
    for labels in product(range(k), repeat=len(points)):
        labels = np.array(labels)
        if len(set(labels.tolist())) < k or labels[0] != 0:
            continue
        cost = sum(((points[labels == j] - points[labels == j].mean(axis=0)) ** 2).sum() for j in range(k))
        best = min(best, cost)
    return float(best)


def lag1_autocorrelation(x):
    x = np.asarray(x, dtype=float) - np.mean(x)
    return float(np.dot(x[:-1], x[1:]) / np.dot(x, x))
