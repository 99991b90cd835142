"""Shared clustering types."""

from __future__ import annotations

from dataclasses import dataclass


class ClusterError(ValueError):
    pass


@dataclass(frozen=True)
class Clustering:
    """Hard assignment of documents to cluster labels in [0, k)."""

    labels: tuple[int, ...]
    doc_ids: tuple[str, ...]
    k: int
    algorithm: str
    seed: int | None = None
    iterations: int = 0

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.doc_ids):
            raise ClusterError("labels and doc_ids must be parallel")
        if any(not 0 <= l < self.k for l in self.labels):
            raise ClusterError("cluster label out of range")

    def assignment(self) -> dict[str, int]:
        return dict(zip(self.doc_ids, self.labels))

    def members(self) -> dict[int, list[int]]:
        """Row indices per non-empty cluster label."""
        out: dict[int, list[int]] = {}
        for i, label in enumerate(self.labels):
            out.setdefault(label, []).append(i)
        return out

    def partition(self) -> frozenset[frozenset[str]]:
        """Label-free view, for comparisons up to relabeling."""
        groups: dict[int, set[str]] = {}
        for doc_id, label in zip(self.doc_ids, self.labels):
            groups.setdefault(label, set()).add(doc_id)
        return frozenset(frozenset(g) for g in groups.values())


def trivial_clustering(doc_ids: tuple[str, ...], algorithm: str, seed: int | None) -> Clustering:
    return Clustering(
        labels=tuple(0 for _ in doc_ids),
        doc_ids=doc_ids,
        k=1,
        algorithm=algorithm,
        seed=seed,
    )
