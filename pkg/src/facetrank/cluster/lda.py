"""Latent Dirichlet allocation via collapsed Gibbs sampling.

Consumes raw counts (the generative model is over token occurrences);
documents are labeled with their most probable topic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from ..vectorize import DocTermMatrix
from .base import Clustering, ClusterError


@dataclass(frozen=True)
class LdaConfig:
    topics: int
    alpha: float | None = None  # None -> 50 / topics
    beta: float = 0.01
    iterations: int = 1000
    burn_in: int = 200
    seed: int = 0

    def resolved_alpha(self) -> float:
        return self.alpha if self.alpha is not None else 50.0 / self.topics


@dataclass(frozen=True)
class LdaResult:
    clustering: Clustering
    theta: np.ndarray  # documents x topics, rows sum to 1
    phi: np.ndarray  # topics x terms, rows sum to 1


def lda_fit(counts: DocTermMatrix, config: LdaConfig) -> LdaResult:
    if counts.weighting != "counts":
        raise ClusterError("LDA expects raw counts, not TF-IDF weights")
    k = config.topics
    if k < 1:
        raise ClusterError("topics must be >= 1")
    n_docs, n_terms = counts.n, counts.m
    alpha = config.resolved_alpha()
    beta = config.beta
    rng = random.Random(f"lda:{config.seed}")

    # flatten each document into its token term-id sequence
    docs: list[list[int]] = []
    mat = counts.matrix
    for d in range(n_docs):
        start, end = mat.indptr[d], mat.indptr[d + 1]
        tokens: list[int] = []
        for idx, cnt in zip(mat.indices[start:end], mat.data[start:end]):
            tokens.extend([int(idx)] * int(cnt))
        docs.append(tokens)

    n_dk = [[0] * k for _ in range(n_docs)]
    n_kw = [[0] * n_terms for _ in range(k)]
    n_k = [0] * k
    z: list[list[int]] = []
    empty_label: dict[int, int] = {}
    for d, tokens in enumerate(docs):
        if not tokens:
            empty_label[d] = rng.randrange(k)  # prior draw, deterministic via seed
        zd = []
        for w in tokens:
            t = rng.randrange(k)
            zd.append(t)
            n_dk[d][t] += 1
            n_kw[t][w] += 1
            n_k[t] += 1
        z.append(zd)

    v_beta = n_terms * beta
    uniform = rng.random
    topics = range(k)
    if k > 1:
        for _ in range(config.iterations):
            for d, tokens in enumerate(docs):
                zd = z[d]
                dk = n_dk[d]
                for i, w in enumerate(tokens):
                    t = zd[i]
                    dk[t] -= 1
                    n_kw[t][w] -= 1
                    n_k[t] -= 1
                    cum = 0.0
                    weights = [0.0] * k
                    for j in topics:
                        cum += (dk[j] + alpha) * (n_kw[j][w] + beta) / (n_k[j] + v_beta)
                        weights[j] = cum
                    r = uniform() * cum
                    t = 0
                    while weights[t] < r:
                        t += 1
                    zd[i] = t
                    dk[t] += 1
                    n_kw[t][w] += 1
                    n_k[t] += 1

    theta = (np.array(n_dk, dtype=float) + alpha)
    theta /= theta.sum(axis=1, keepdims=True)
    phi = (np.array(n_kw, dtype=float) + beta)
    phi /= phi.sum(axis=1, keepdims=True)

    labels = [int(np.argmax(row)) for row in theta]  # argmax breaks ties low
    for d, t in empty_label.items():
        labels[d] = t
    clustering = Clustering(
        labels=tuple(labels),
        doc_ids=counts.doc_ids,
        k=k,
        algorithm="lda",
        seed=config.seed,
        iterations=config.iterations,
    )
    return LdaResult(clustering=clustering, theta=theta, phi=phi)


def lda_cluster(counts: DocTermMatrix, config: LdaConfig) -> Clustering:
    return lda_fit(counts, config).clustering
