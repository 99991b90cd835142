"""AGNES: agglomerative clustering with unweighted average linkage (UPGMA)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import Clustering, ClusterError


@dataclass(frozen=True)
class Dendrogram:
    """Merge trace: (cluster_a, cluster_b, height, new_cluster_id) per step.

    Leaves are 0..n-1; merge i creates cluster id n+i. Heights are the average
    linkage distances at which merges were accepted.
    """

    n_leaves: int
    merges: tuple[tuple[int, int, float, int], ...]

    def cut(self, k: int) -> list[list[int]]:
        """Leaf index groups after merging down to exactly k clusters."""
        if not 1 <= k <= self.n_leaves:
            raise ClusterError(f"cannot cut dendrogram of {self.n_leaves} leaves at k={k}")
        groups: dict[int, list[int]] = {i: [i] for i in range(self.n_leaves)}
        for a, b, _, new_id in self.merges[: self.n_leaves - k]:
            groups[new_id] = groups.pop(a) + groups.pop(b)
        return [sorted(g) for g in groups.values()]


def agnes_dendrogram(dissim: np.ndarray) -> Dendrogram:
    """Full UPGMA merge sequence via Lance-Williams updates."""
    n = dissim.shape[0]
    d = dissim.astype(float).copy()
    np.fill_diagonal(d, np.inf)
    sizes = {i: 1 for i in range(n)}
    cluster_id = {i: i for i in range(n)}  # row index -> current cluster id
    active = list(range(n))
    merges: list[tuple[int, int, float, int]] = []
    next_id = n
    for _ in range(n - 1):
        sub = d[np.ix_(active, active)]
        flat = int(np.argmin(sub))
        i_pos, j_pos = divmod(flat, len(active))
        if i_pos > j_pos:
            i_pos, j_pos = j_pos, i_pos
        ri, rj = active[i_pos], active[j_pos]
        height = float(d[ri, rj])
        si, sj = sizes[ri], sizes[rj]
        # UPGMA: d(k, i+j) = (si*d(k,i) + sj*d(k,j)) / (si+sj)
        merged = (si * d[ri, :] + sj * d[rj, :]) / (si + sj)
        d[ri, :] = merged
        d[:, ri] = merged
        d[ri, ri] = np.inf
        merges.append((cluster_id[ri], cluster_id[rj], height, next_id))
        sizes[ri] = si + sj
        cluster_id[ri] = next_id
        next_id += 1
        active.remove(rj)
    return Dendrogram(n_leaves=n, merges=tuple(merges))


def agnes(
    dissim: np.ndarray, k: int, doc_ids: tuple[str, ...] | None = None
) -> tuple[Clustering, Dendrogram]:
    n = dissim.shape[0]
    if k > n:
        raise ClusterError(f"k={k} exceeds the number of documents n={n}")
    dendrogram = agnes_dendrogram(dissim)
    groups = dendrogram.cut(k)
    groups.sort(key=lambda g: g[0])
    labels = [0] * n
    for label, group in enumerate(groups):
        for i in group:
            labels[i] = label
    ids = doc_ids if doc_ids is not None else tuple(str(i) for i in range(n))
    clustering = Clustering(
        labels=tuple(labels),
        doc_ids=ids,
        k=k,
        algorithm="agnes",
        seed=None,
        iterations=n - k,
    )
    return clustering, dendrogram
