"""Self-organizing map over unit rows, clustered by k-means on the codebook."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from ..vectorize import DocTermMatrix, l2_normalize_rows
from .base import Clustering, ClusterError
from .kmeans import kmeans_core


@dataclass(frozen=True)
class SomConfig:
    width: int
    height: int
    epochs: int = 100
    learning_rate: float = 0.5
    radius: float | None = None  # None -> max(width, height) / 2
    mode: str = "batch"  # batch | online
    seed: int = 0

    def resolved_radius(self) -> float:
        return self.radius if self.radius is not None else max(self.width, self.height) / 2.0


def default_grid_side(n_docs: int) -> int:
    """ceil(sqrt(5 * sqrt(n))) capped at 20."""
    return min(20, max(2, math.ceil(math.sqrt(5.0 * math.sqrt(max(n_docs, 1))))))


def _grid_coords(width: int, height: int) -> np.ndarray:
    coords = [(x, y) for y in range(height) for x in range(width)]
    return np.array(coords, dtype=float)


def _bmu(x, codebook: np.ndarray) -> np.ndarray:
    sims = x @ codebook.T
    if sparse.issparse(sims):
        sims = np.asarray(sims.todense())
    return np.argmax(np.asarray(sims), axis=1)


def _normalize(codebook: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(codebook, axis=1)
    inv = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
    return codebook * inv[:, None]


def train_som(x, config: SomConfig) -> np.ndarray:
    """Train the codebook on unit rows `x` (csr or dense); returns unit codebook rows."""
    n = x.shape[0]
    cells = config.width * config.height
    rng = np.random.default_rng(config.seed)
    init_idx = rng.choice(n, size=cells, replace=n < cells)
    codebook = (
        x[init_idx].toarray().astype(float)
        if sparse.issparse(x)
        else np.array(x[init_idx], dtype=float)
    )
    coords = _grid_coords(config.width, config.height)
    grid_d2 = ((coords[:, None, :] - coords[None, :, :]) ** 2).sum(axis=2)
    r0 = config.resolved_radius()
    epochs = max(config.epochs, 1)
    for epoch in range(epochs):
        frac = epoch / epochs
        sigma = max(r0 * (1.0 - frac), 0.5)  # linear radius decay
        h = np.exp(-grid_d2 / (2.0 * sigma * sigma))
        if config.mode == "batch":
            bmu = _bmu(x, codebook)
            weights = h[:, bmu]  # cells x docs
            num = weights @ x
            if sparse.issparse(num):
                num = np.asarray(num.todense())
            den = weights.sum(axis=1)
            updated = den > 1e-12
            codebook[updated] = num[updated] / den[updated, None]
            codebook = _normalize(codebook)
        elif config.mode == "online":
            lr = config.learning_rate * (1.0 - frac) + 0.01 * config.learning_rate * frac
            for i in rng.permutation(n):
                row = x[i].toarray().ravel() if sparse.issparse(x) else x[i]
                sims = codebook @ row
                unit = int(np.argmax(sims))
                codebook += (lr * h[:, unit])[:, None] * (row[None, :] - codebook)
            codebook = _normalize(codebook)
        else:
            raise ClusterError(f"unknown SOM mode {config.mode!r}")
    return codebook


def som_km(
    matrix: DocTermMatrix, k: int, config: SomConfig | None = None, seed: int = 0
) -> Clustering:
    """Cluster the trained codebook with k-means; documents inherit their BMU's cluster."""
    if matrix.weighting != "tfidf":
        raise ClusterError("som_km expects TF-IDF weighting")
    n = matrix.n
    if config is None:
        side = default_grid_side(n)
        config = SomConfig(width=side, height=side, seed=seed)
    if config.width * config.height < k:
        raise ClusterError(
            f"grid of {config.width}x{config.height} cells is smaller than k={k}"
        )
    x = l2_normalize_rows(matrix.matrix)
    codebook = train_som(x, config)
    unit_labels, _, _ = kmeans_core(codebook, k, seed)
    bmu = _bmu(x, codebook)
    labels = unit_labels[bmu]
    return Clustering(
        labels=tuple(int(l) for l in labels),
        doc_ids=matrix.doc_ids,
        k=k,
        algorithm="som-km",
        seed=seed,
        iterations=config.epochs,
    )
