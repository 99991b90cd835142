"""Internal validity indices and partition agreement."""

from __future__ import annotations

import numpy as np
from scipy import sparse

from ..vectorize import DocTermMatrix
from .base import Clustering, ClusterError


def _non_empty_members(clustering: Clustering) -> list[list[int]]:
    members = clustering.members()
    return [members[label] for label in sorted(members)]


def silhouette(clustering: Clustering, dissim: np.ndarray) -> float:
    """Mean of (b - a) / max(a, b); singletons and a=b=0 points contribute 0."""
    groups = _non_empty_members(clustering)
    if len(groups) < 2:
        raise ClusterError("silhouette needs at least 2 non-empty clusters")
    scores = np.zeros(dissim.shape[0])
    for gi, group in enumerate(groups):
        for i in group:
            if len(group) == 1:
                continue
            a = float(dissim[i, group].sum()) / (len(group) - 1)
            b = min(
                float(dissim[i, other].mean())
                for gj, other in enumerate(groups)
                if gj != gi
            )
            denom = max(a, b)
            scores[i] = 0.0 if denom == 0.0 else (b - a) / denom
    return float(scores.mean())


def _centroid(matrix: DocTermMatrix, members: list[int]) -> np.ndarray:
    sub = matrix.matrix[members]
    mean = np.asarray(sub.mean(axis=0)).ravel() if sparse.issparse(sub) else sub.mean(axis=0)
    norm = np.linalg.norm(mean)
    return mean / norm if norm > 0 else mean


def _cosine_d(u: np.ndarray, v: np.ndarray) -> float:
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 and nv == 0.0:
        return 0.0
    if nu == 0.0 or nv == 0.0:
        return 1.0
    return float(np.clip(1.0 - np.dot(u, v) / (nu * nv), 0.0, 1.0))


def davies_bouldin(clustering: Clustering, matrix: DocTermMatrix) -> float:
    """Standard DB index with cosine dissimilarity to normalized-mean centroids."""
    groups = _non_empty_members(clustering)
    if len(groups) < 2:
        raise ClusterError("davies_bouldin needs at least 2 non-empty clusters")
    centroids = [_centroid(matrix, g) for g in groups]
    scatter = []
    for g, c in zip(groups, centroids):
        ds = []
        for i in g:
            row = matrix.row(i)
            nu, nv = row.norm(), np.linalg.norm(c)
            if nu == 0.0 and nv == 0.0:
                ds.append(0.0)
            elif nu == 0.0 or nv == 0.0:
                ds.append(1.0)
            else:
                dot = float(np.dot(row.values, c[row.indices]))
                ds.append(float(np.clip(1.0 - dot / (nu * nv), 0.0, 1.0)))
        scatter.append(float(np.mean(ds)))
    total = 0.0
    for i in range(len(groups)):
        worst = 0.0
        for j in range(len(groups)):
            if i == j:
                continue
            m = _cosine_d(centroids[i], centroids[j])
            s = scatter[i] + scatter[j]
            ratio = 0.0 if (m == 0.0 and s == 0.0) else (np.inf if m == 0.0 else s / m)
            worst = max(worst, ratio)
        total += worst
    return float(total / len(groups))


def adjusted_rand_index(labels_a, labels_b) -> float:
    """Partition agreement corrected for chance; 1.0 for identical partitions."""
    a = list(labels_a)
    b = list(labels_b)
    if len(a) != len(b):
        raise ValueError("label sequences must have equal length")
    n = len(a)
    if n < 2:
        return 1.0
    contingency: dict[tuple, int] = {}
    rows: dict = {}
    cols: dict = {}
    for x, y in zip(a, b):
        contingency[(x, y)] = contingency.get((x, y), 0) + 1
        rows[x] = rows.get(x, 0) + 1
        cols[y] = cols.get(y, 0) + 1

    def comb2(v: int) -> float:
        return v * (v - 1) / 2.0

    sum_cells = sum(comb2(v) for v in contingency.values())
    sum_rows = sum(comb2(v) for v in rows.values())
    sum_cols = sum(comb2(v) for v in cols.values())
    expected = sum_rows * sum_cols / comb2(n)
    max_index = (sum_rows + sum_cols) / 2.0
    if max_index == expected:
        return 1.0
    return float((sum_cells - expected) / (max_index - expected))
