"""Diagnostic artifacts: cluster-vs-group contingency tables, top-term lists,
and per-expert profile size distributions (the data behind heat maps and
word clouds, emitted as CSV)."""

from __future__ import annotations

import io
import math

import numpy as np

from .cluster import Clustering
from .corpus import Corpus
from .profiles import ProfileSet, Subprofile
from .textprep import TokenPipelineConfig, Vocabulary, preprocess, tokenize


class ReportError(ValueError):
    pass


def contingency(clustering: Clustering, corpus: Corpus) -> tuple[list[str], np.ndarray]:
    """Rows = sorted group ids, columns = cluster labels, cells = row fractions.

    Documents without a group id are excluded from the rows.
    """
    assignment = clustering.assignment()
    missing = [d.doc_id for d in corpus if d.doc_id not in assignment]
    if missing:
        raise ReportError(f"clustering does not cover doc_id {missing[0]!r}")
    groups = sorted(corpus.groups)
    matrix = np.zeros((len(groups), clustering.k))
    row_of = {g: i for i, g in enumerate(groups)}
    for doc in corpus:
        if doc.group_id is None:
            continue
        matrix[row_of[doc.group_id], assignment[doc.doc_id]] += 1
    sums = matrix.sum(axis=1, keepdims=True)
    with np.errstate(invalid="ignore"):
        matrix = np.where(sums > 0, matrix / sums, 0.0)
    return groups, matrix


def top_terms(
    subprofile: Subprofile,
    vocab: Vocabulary,
    config: TokenPipelineConfig,
    n: int = 50,
) -> list[tuple[str, float]]:
    """TF-IDF weights of the macro-document against corpus-level df, top n."""
    if n < 1:
        raise ReportError("n must be >= 1")
    counts: dict[str, int] = {}
    for stem in preprocess(subprofile.macro_text, config):
        if stem in vocab:
            counts[stem] = counts.get(stem, 0) + 1
    weights = []
    for term, tf in counts.items():
        df = vocab.df[vocab.index[term]]
        weights.append((term, tf * math.log(vocab.n_docs / df)))
    weights.sort(key=lambda tw: (-tw[1], tw[0]))
    return weights[:n]


def profile_size_distribution(
    profiles: ProfileSet, mode: str = "tokens"
) -> dict[str, list[tuple[str, float]]]:
    """Per expert: share of their total term mass held by each subprofile.

    mode 'tokens' counts token occurrences; 'distinct' counts distinct terms.
    """
    if mode not in ("tokens", "distinct"):
        raise ReportError(f"unknown size mode {mode!r}")
    plain = TokenPipelineConfig(stemmer="none")
    sizes: dict[str, list[tuple[str, int]]] = {}
    for sub in profiles:
        tokens = tokenize(sub.macro_text, plain)
        size = len(set(tokens)) if mode == "distinct" else len(tokens)
        sizes.setdefault(sub.expert_id, []).append((sub.subprofile_id, size))
    out: dict[str, list[tuple[str, float]]] = {}
    for expert, pairs in sizes.items():
        total = sum(size for _, size in pairs)
        if total == 0:
            out[expert] = [(sid, 1.0 / len(pairs)) for sid, _ in pairs]
        else:
            out[expert] = [(sid, size / total) for sid, size in pairs]
    return out


def contingency_csv(groups: list[str], matrix: np.ndarray) -> str:
    out = io.StringIO()
    k = matrix.shape[1]
    out.write("group," + ",".join(f"cluster{j}" for j in range(k)) + "\n")
    for g, row in zip(groups, matrix):
        out.write(g + "," + ",".join(f"{v:.6f}" for v in row) + "\n")
    return out.getvalue()


def top_terms_csv(profiles: ProfileSet, vocab: Vocabulary, config: TokenPipelineConfig, n: int = 50) -> str:
    out = io.StringIO()
    out.write("subprofile_id,expert_id,term,weight\n")
    for sub in profiles:
        for term, weight in top_terms(sub, vocab, config, n):
            out.write(f"{sub.subprofile_id},{sub.expert_id},{term},{weight:.6f}\n")
    return out.getvalue()


def profile_sizes_csv(profiles: ProfileSet, mode: str = "tokens") -> str:
    shares = profile_size_distribution(profiles, mode)
    out = io.StringIO()
    out.write("expert_id,subprofile_id,share\n")
    for expert in sorted(shares):
        for sid, share in shares[expert]:
            out.write(f"{expert},{sid},{share:.6f}\n")
    return out.getvalue()
