"""Sparse document-term matrices, TF-IDF weighting, and cosine dissimilarities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .corpus import Corpus
from .textprep import TokenPipelineConfig, Vocabulary, preprocess


class VectorizeError(ValueError):
    pass


@dataclass(frozen=True)
class SparseVector:
    """(index, weight) pairs with strictly increasing indices; zeros never stored."""

    indices: np.ndarray
    values: np.ndarray
    dim: int

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.values, self.values)))

    def dot(self, other: "SparseVector") -> float:
        if self.dim != other.dim:
            raise VectorizeError(f"dimension mismatch: {self.dim} != {other.dim}")
        _, iu, iv = np.intersect1d(
            self.indices, other.indices, assume_unique=True, return_indices=True
        )
        return float(np.dot(self.values[iu], other.values[iv]))


class DocTermMatrix:
    """CSR documents-by-terms matrix tagged with its weighting scheme."""

    def __init__(
        self,
        matrix: sparse.csr_matrix,
        doc_ids: tuple[str, ...],
        vocab: Vocabulary,
        weighting: str,
    ):
        if weighting not in ("counts", "tfidf"):
            raise VectorizeError(f"unknown weighting {weighting!r}")
        if matrix.shape != (len(doc_ids), len(vocab)):
            raise VectorizeError("matrix shape does not match doc_ids x vocabulary")
        matrix.eliminate_zeros()
        self.matrix = matrix
        self.doc_ids = doc_ids
        self.vocab = vocab
        self.weighting = weighting

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def m(self) -> int:
        return self.matrix.shape[1]

    @property
    def nnz(self) -> int:
        return int(self.matrix.nnz)

    def row(self, i: int) -> SparseVector:
        start, end = self.matrix.indptr[i], self.matrix.indptr[i + 1]
        return SparseVector(
            indices=self.matrix.indices[start:end].copy(),
            values=self.matrix.data[start:end].astype(float),
            dim=self.m,
        )


def build_counts(
    corpus: Corpus, vocab: Vocabulary, config: TokenPipelineConfig
) -> DocTermMatrix:
    """Raw occurrence counts of in-vocabulary stems; out-of-vocabulary stems dropped."""
    index = vocab.index
    data: list[int] = []
    indices: list[int] = []
    indptr = [0]
    for doc in corpus:
        counts: dict[int, int] = {}
        for stem in preprocess(doc.body, config):
            j = index.get(stem)
            if j is not None:
                counts[j] = counts.get(j, 0) + 1
        for j in sorted(counts):
            indices.append(j)
            data.append(counts[j])
        indptr.append(len(indices))
    matrix = sparse.csr_matrix(
        (np.array(data, dtype=np.float64), np.array(indices, dtype=np.int32), indptr),
        shape=(len(corpus), len(vocab)),
    )
    return DocTermMatrix(matrix, tuple(d.doc_id for d in corpus), vocab, "counts")


def tfidf(matrix: DocTermMatrix) -> DocTermMatrix:
    """weight(d, w) = tf(d, w) * ln(N / df(w)), df taken over the matrix rows."""
    if matrix.weighting != "counts":
        raise VectorizeError("tfidf expects a counts matrix")
    n = matrix.n
    df = np.diff(matrix.matrix.tocsc().indptr)
    idf = np.zeros(matrix.m)
    present = df > 0
    idf[present] = np.log(n / df[present])
    weighted = matrix.matrix.multiply(sparse.csr_matrix(idf)).tocsr()
    return DocTermMatrix(weighted, matrix.doc_ids, matrix.vocab, "tfidf")


def smoothed_tfidf(matrix: DocTermMatrix) -> DocTermMatrix:
    """Alternative weighting tf * ln(1 + N / df), for sensitivity checks."""
    if matrix.weighting != "counts":
        raise VectorizeError("tfidf expects a counts matrix")
    n = matrix.n
    df = np.diff(matrix.matrix.tocsc().indptr)
    idf = np.zeros(matrix.m)
    present = df > 0
    idf[present] = np.log1p(n / df[present])
    weighted = matrix.matrix.multiply(sparse.csr_matrix(idf)).tocsr()
    return DocTermMatrix(weighted, matrix.doc_ids, matrix.vocab, "tfidf")


def cosine_dissimilarity(u: SparseVector, v: SparseVector) -> float:
    """1 - cos(u, v); one zero vector gives 1.0, two zero vectors give 0.0."""
    if u.dim != v.dim:
        raise VectorizeError(f"dimension mismatch: {u.dim} != {v.dim}")
    nu, nv = u.norm(), v.norm()
    if nu == 0.0 and nv == 0.0:
        return 0.0
    if nu == 0.0 or nv == 0.0:
        return 1.0
    d = 1.0 - u.dot(v) / (nu * nv)
    return min(1.0, max(0.0, d))


def l2_normalize_rows(matrix: sparse.csr_matrix) -> sparse.csr_matrix:
    """Unit-norm rows; all-zero rows stay zero."""
    norms = np.sqrt(np.asarray(matrix.multiply(matrix).sum(axis=1)).ravel())
    inv = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
    return sparse.diags(inv).dot(matrix).tocsr()


def dump_matrix(matrix: DocTermMatrix) -> str:
    """Sparse coordinate text: one `doc_id term_index weight` line per cell."""
    lines = []
    for i, doc_id in enumerate(matrix.doc_ids):
        row = matrix.row(i)
        for j, w in zip(row.indices, row.values):
            lines.append(f"{doc_id} {int(j)} {w:g}")
    return "\n".join(lines) + ("\n" if lines else "")


def dissimilarity_matrix(matrix: DocTermMatrix) -> np.ndarray:
    """Pairwise cosine dissimilarities over all rows, symmetric with zero diagonal."""
    normed = l2_normalize_rows(matrix.matrix)
    sims = np.asarray(normed.dot(normed.T).todense())
    d = 1.0 - sims
    zero = np.sqrt(np.asarray(matrix.matrix.multiply(matrix.matrix).sum(axis=1)).ravel()) == 0
    if zero.any():
        d[zero, :] = 1.0
        d[:, zero] = 1.0
        d[np.ix_(zero, zero)] = 0.0
    d = (d + d.T) / 2.0
    np.fill_diagonal(d, 0.0)
    return np.clip(d, 0.0, 1.0)
