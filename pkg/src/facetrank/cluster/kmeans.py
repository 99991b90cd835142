"""Spherical k-means over L2-normalized rows with k-means++ seeding."""

from __future__ import annotations

import numpy as np
from scipy import sparse

from ..vectorize import DocTermMatrix, l2_normalize_rows
from .base import Clustering, ClusterError


def _row_matrix(x) -> sparse.csr_matrix | np.ndarray:
    return x


def _normalize_dense(x: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(x, axis=1)
    inv = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
    return x * inv[:, None]


def _sims(x, centers: np.ndarray) -> np.ndarray:
    """Cosine similarity of every (unit) row against every (unit) center."""
    s = x @ centers.T
    return np.asarray(s.todense()) if sparse.issparse(s) else np.asarray(s)


def plusplus_seed(x, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ under cosine dissimilarity: D(x)^2-weighted center choice."""
    n = x.shape[0]
    dense = not sparse.issparse(x)
    first = int(rng.integers(n))
    centers = np.empty((k, x.shape[1]))
    centers[0] = x[first] if dense else x[first].toarray().ravel()
    d = np.clip(1.0 - _sims(x, centers[:1]).ravel(), 0.0, 1.0)
    for j in range(1, k):
        weights = d * d
        total = weights.sum()
        if total <= 0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=weights / total))
        centers[j] = x[idx] if dense else x[idx].toarray().ravel()
        d = np.minimum(d, np.clip(1.0 - _sims(x, centers[j : j + 1]).ravel(), 0.0, 1.0))
    return centers


def _mean_rows(x, members: np.ndarray) -> np.ndarray:
    sub = x[members]
    mean = np.asarray(sub.mean(axis=0)).ravel() if sparse.issparse(sub) else sub.mean(axis=0)
    norm = np.linalg.norm(mean)
    return mean / norm if norm > 0 else mean


def kmeans_core(
    x, k: int, seed: int, max_iter: int = 100
) -> tuple[np.ndarray, np.ndarray, int]:
    """Labels, centers and iterations for unit rows `x` (csr or dense)."""
    n = x.shape[0]
    if k > n:
        raise ClusterError(f"k={k} exceeds the number of documents n={n}")
    rng = np.random.default_rng(seed)
    centers = plusplus_seed(x, k, rng)
    labels = np.full(n, -1, dtype=int)
    iters = 0
    for iters in range(1, max_iter + 1):
        sims = _sims(x, centers)
        new_labels = np.argmax(sims, axis=1)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(k):
            members = np.flatnonzero(labels == j)
            if members.size:
                centers[j] = _mean_rows(x, members)
        # repair empty clusters with the worst-fit point, one point per cluster
        empty = [j for j in range(k) if not np.any(labels == j)]
        if empty:
            fit = _sims(x, centers)[np.arange(n), labels]
            order = np.argsort(fit)  # worst fit first
            used = 0
            for j in empty:
                idx = int(order[used])
                used += 1
                row = x[idx].toarray().ravel() if sparse.issparse(x) else x[idx]
                centers[j] = row
    return labels, centers, iters


def kmeans(matrix: DocTermMatrix, k: int, seed: int, max_iter: int = 100) -> Clustering:
    if matrix.weighting != "tfidf":
        raise ClusterError("kmeans expects TF-IDF weighting")
    x = l2_normalize_rows(matrix.matrix)
    labels, _, iters = kmeans_core(x, k, seed, max_iter)
    return Clustering(
        labels=tuple(int(l) for l in labels),
        doc_ids=matrix.doc_ids,
        k=k,
        algorithm="kmeans",
        seed=seed,
        iterations=iters,
    )
