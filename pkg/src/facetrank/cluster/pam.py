"""PAM (k-medoids): greedy BUILD initialization plus best-swap iterations."""

from __future__ import annotations

import numpy as np

from .base import Clustering, ClusterError


def _assignment_cost(dissim: np.ndarray, medoids: list[int]) -> float:
    return float(dissim[:, medoids].min(axis=1).sum())


def pam_build(dissim: np.ndarray, k: int) -> list[int]:
    """Greedy initialization: first the most central point, then best marginal gains."""
    n = dissim.shape[0]
    medoids = [int(np.argmin(dissim.sum(axis=1)))]
    nearest = dissim[:, medoids[0]].copy()
    while len(medoids) < k:
        best_gain, best_c = -1.0, -1
        for c in range(n):
            if c in medoids:
                continue
            gain = float(np.maximum(nearest - dissim[:, c], 0.0).sum())
            if gain > best_gain:
                best_gain, best_c = gain, c
        medoids.append(best_c)
        nearest = np.minimum(nearest, dissim[:, best_c])
    return medoids


def pam(
    dissim: np.ndarray,
    k: int,
    seed: int | None = None,
    max_iter: int = 100,
    doc_ids: tuple[str, ...] | None = None,
) -> Clustering:
    """Accept the single best cost-reducing medoid/non-medoid swap per iteration."""
    n = dissim.shape[0]
    if k > n:
        raise ClusterError(f"k={k} exceeds the number of documents n={n}")
    medoids = pam_build(dissim, k)
    iters = 0
    for iters in range(1, max_iter + 1):
        med = np.array(medoids)
        d_meds = dissim[:, med]  # n x k
        order = np.argsort(d_meds, axis=1)
        d1 = d_meds[np.arange(n), order[:, 0]]
        nearest_pos = order[:, 0]
        d2 = d_meds[np.arange(n), order[:, 1]] if k > 1 else np.full(n, np.inf)
        base_cost = float(d1.sum())
        best_delta, best_swap = -1e-12, None
        non_medoids = [h for h in range(n) if h not in medoids]
        for pos in range(k):
            affected = nearest_pos == pos
            for h in non_medoids:
                dh = dissim[:, h]
                new_d = np.where(affected, np.minimum(d2, dh), np.minimum(d1, dh))
                delta = float(new_d.sum()) - base_cost
                if delta < best_delta:
                    best_delta, best_swap = delta, (pos, h)
        if best_swap is None:
            break
        medoids[best_swap[0]] = best_swap[1]
    med = np.array(medoids)
    labels = np.argmin(dissim[:, med], axis=1)
    ids = doc_ids if doc_ids is not None else tuple(str(i) for i in range(n))
    return Clustering(
        labels=tuple(int(l) for l in labels),
        doc_ids=ids,
        k=k,
        algorithm="pam",
        seed=seed,
        iterations=iters,
    )


def pam_cost(dissim: np.ndarray, clustering: Clustering) -> float:
    """Total dissimilarity of each point to its cluster medoid (recomputed)."""
    total = 0.0
    for members in clustering.members().values():
        sub = dissim[np.ix_(members, members)]
        total += float(sub.sum(axis=0).min())
    return total
