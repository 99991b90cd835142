"""Clustering algorithms, k-selection strategies, and validity indices."""

from __future__ import annotations

from dataclasses import replace

from ..vectorize import DocTermMatrix, dissimilarity_matrix
from .agnes import Dendrogram, agnes, agnes_dendrogram
from .base import Clustering, ClusterError, trivial_clustering
from .diana import diana
from .kmeans import kmeans
from .kselect import K_STRATEGIES, KSelectionInputs, select_k
from .lda import LdaConfig, LdaResult, lda_cluster, lda_fit
from .pam import pam, pam_cost
from .som import SomConfig, default_grid_side, som_km
from .validity import adjusted_rand_index, davies_bouldin, silhouette

ALGORITHMS = ("kmeans", "pam", "agnes", "diana", "lda", "som-km")


def run_algorithm(
    algo: str,
    k: int,
    seed: int,
    *,
    counts: DocTermMatrix,
    weighted: DocTermMatrix,
    lda_config: LdaConfig | None = None,
    som_config: SomConfig | None = None,
    max_iter: int = 100,
) -> Clustering:
    """Dispatch one algorithm run over prebuilt matrices."""
    if algo not in ALGORITHMS:
        raise ClusterError(f"unknown clustering algorithm {algo!r}")
    if k > counts.n:
        raise ClusterError(f"k={k} exceeds the number of documents n={counts.n}")
    if k == 1:
        return trivial_clustering(counts.doc_ids, algo, seed)
    if algo == "kmeans":
        return kmeans(weighted, k, seed, max_iter)
    if algo == "pam":
        return pam(dissimilarity_matrix(weighted), k, seed, max_iter, weighted.doc_ids)
    if algo == "agnes":
        clustering, _ = agnes(dissimilarity_matrix(weighted), k, weighted.doc_ids)
        return clustering
    if algo == "diana":
        return diana(dissimilarity_matrix(weighted), k, weighted.doc_ids)
    if algo == "lda":
        cfg = replace(lda_config or LdaConfig(topics=k), topics=k, seed=seed)
        return lda_cluster(counts, cfg)
    if som_config is not None and som_config.seed != seed:
        som_config = replace(som_config, seed=seed)
    return som_km(weighted, k, som_config, seed)


__all__ = [
    "ALGORITHMS",
    "Clustering",
    "ClusterError",
    "Dendrogram",
    "KSelectionInputs",
    "K_STRATEGIES",
    "LdaConfig",
    "LdaResult",
    "SomConfig",
    "adjusted_rand_index",
    "agnes",
    "agnes_dendrogram",
    "davies_bouldin",
    "default_grid_side",
    "diana",
    "dissimilarity_matrix",
    "kmeans",
    "lda_cluster",
    "lda_fit",
    "pam",
    "pam_cost",
    "run_algorithm",
    "select_k",
    "silhouette",
    "som_km",
    "trivial_clustering",
]
