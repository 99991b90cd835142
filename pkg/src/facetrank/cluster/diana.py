"""DIANA: divisive clustering via the splinter-group procedure."""

from __future__ import annotations

import numpy as np

from .base import Clustering, ClusterError


def _diameter(dissim: np.ndarray, members: list[int]) -> float:
    if len(members) < 2:
        return 0.0
    sub = dissim[np.ix_(members, members)]
    return float(sub.max())


def split_cluster(dissim: np.ndarray, members: list[int]) -> tuple[list[int], list[int]]:
    """Split one cluster into (remainder, splinter) with the standard procedure.

    The splinter seed is the point with maximal average dissimilarity to its
    cluster; points then migrate while they sit closer (on average) to the
    splinter group than to the rest of the remainder.
    """
    if len(members) < 2:
        raise ClusterError("cannot split a singleton cluster")
    sub = dissim[np.ix_(members, members)]
    avg = sub.sum(axis=1) / (len(members) - 1)
    seed_pos = int(np.argmax(avg))
    splinter = [members[seed_pos]]
    remainder = [m for i, m in enumerate(members) if i != seed_pos]
    while len(remainder) > 1:
        best_diff, best_pos = 0.0, -1
        for pos, m in enumerate(remainder):
            others = [o for o in remainder if o != m]
            a = float(dissim[m, others].mean())
            b = float(dissim[m, splinter].mean())
            if a - b > best_diff:
                best_diff, best_pos = a - b, pos
        if best_pos < 0:
            break
        splinter.append(remainder.pop(best_pos))
    return remainder, splinter


def diana(
    dissim: np.ndarray, k: int, doc_ids: tuple[str, ...] | None = None
) -> Clustering:
    n = dissim.shape[0]
    if k > n:
        raise ClusterError(f"k={k} exceeds the number of documents n={n}")
    clusters: list[list[int]] = [list(range(n))]
    steps = 0
    while len(clusters) < k:
        diameters = [_diameter(dissim, c) for c in clusters]
        candidates = [i for i, c in enumerate(clusters) if len(c) > 1]
        target = max(candidates, key=lambda i: (diameters[i], -i))
        remainder, splinter = split_cluster(dissim, clusters[target])
        clusters[target] = sorted(remainder)
        clusters.append(sorted(splinter))
        steps += 1
    labels = [0] * n
    for label, cluster in enumerate(clusters):
        for i in cluster:
            labels[i] = label
    ids = doc_ids if doc_ids is not None else tuple(str(i) for i in range(n))
    return Clustering(
        labels=tuple(labels),
        doc_ids=ids,
        k=k,
        algorithm="diana",
        seed=None,
        iterations=steps,
    )
