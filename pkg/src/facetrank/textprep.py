"""Tokenization, stopword removal, stemming, and vocabulary pruning.

The vocabulary produced here is the term space shared by clustering and
retrieval: stems that survive the document-frequency cutoff, indexed
contiguously from 0.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus
from .stemming import get_stemmer

_ALPHA_RE = re.compile(r"[^\W\d_]+", re.UNICODE)
_ALNUM_RE = re.compile(r"[^\W_]+", re.UNICODE)


class TextPrepError(ValueError):
    pass


@dataclass(frozen=True)
class TokenPipelineConfig:
    stopwords: frozenset[str] = frozenset()
    stemmer: str = "spanish"
    min_doc_fraction: float = 0.01
    lowercase: bool = True
    strip_numbers: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.min_doc_fraction < 1.0:
            raise ValueError("min_doc_fraction must be in [0, 1)")


def tokenize(text: str, config: TokenPipelineConfig) -> list[str]:
    """Maximal runs of alphabetic characters (alphanumeric when numbers are kept)."""
    if config.lowercase:
        text = text.lower()
    pattern = _ALPHA_RE if config.strip_numbers else _ALNUM_RE
    return pattern.findall(text)


def preprocess(text: str, config: TokenPipelineConfig) -> list[str]:
    """tokenize -> stopword removal -> stemming, in that order."""
    stem = get_stemmer(config.stemmer)
    stop = config.stopwords
    return [stem(t) for t in tokenize(text, config) if t not in stop]


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    df: tuple[int, ...]
    n_docs: int

    @property
    def index(self) -> dict[str, int]:
        if not hasattr(self, "_index"):
            object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.terms)})
        return self._index  # type: ignore[attr-defined]

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index


def df_threshold(min_doc_fraction: float, n_docs: int) -> int:
    """Smallest document frequency that survives pruning: ceil(fraction * n)."""
    # the 1e-9 slack guards against float fuzz on exact integer products
    return max(1, math.ceil(min_doc_fraction * n_docs - 1e-9))


def build_vocabulary(train_corpus: Corpus, config: TokenPipelineConfig) -> Vocabulary:
    """Retain exactly the stems present in at least ceil(fraction * n) documents."""
    if len(train_corpus) == 0:
        raise TextPrepError("cannot build a vocabulary from an empty corpus")
    df_counts: dict[str, int] = {}
    for doc in train_corpus:
        for stem in set(preprocess(doc.body, config)):
            df_counts[stem] = df_counts.get(stem, 0) + 1
    threshold = df_threshold(config.min_doc_fraction, len(train_corpus))
    kept = sorted(t for t, c in df_counts.items() if c >= threshold)
    if not kept:
        raise TextPrepError(
            f"vocabulary is empty after pruning (df threshold {threshold}, "
            f"{len(df_counts)} candidate stems)"
        )
    return Vocabulary(
        terms=tuple(kept),
        df=tuple(df_counts[t] for t in kept),
        n_docs=len(train_corpus),
    )


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One token per line, UTF-8; blank lines ignored."""
    with Path(path).open("r", encoding="utf-8") as f:
        return frozenset(line.strip() for line in f if line.strip())
