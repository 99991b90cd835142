"""Author-attributed corpora: JSONL loading, expert filters, reproducible splits."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator


class CorpusError(ValueError):
    """Malformed corpus file or corpus invariant violation."""


@dataclass(frozen=True)
class Document:
    """One author-attributed text unit (e.g. a parliamentary intervention)."""

    doc_id: str
    author_id: str
    group_id: str | None
    title: str
    body: str
    order_key: int


@dataclass(frozen=True)
class SplitPlan:
    train_fraction: float = 0.8
    repetitions: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must be in (0,1), got {self.train_fraction}")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")


class Corpus:
    """Immutable ordered document collection with derived expert and group sets."""

    def __init__(self, documents: Iterable[Document]):
        docs = tuple(documents)
        seen: set[str] = set()
        for d in docs:
            if d.doc_id in seen:
                raise CorpusError(f"duplicate doc_id {d.doc_id!r}")
            seen.add(d.doc_id)
            if not d.body:
                raise CorpusError(f"empty body for doc_id {d.doc_id!r}")
            if not d.author_id:
                raise CorpusError(f"empty author_id for doc_id {d.doc_id!r}")
        self.documents = docs
        self.experts = frozenset(d.author_id for d in docs)
        self.groups = frozenset(d.group_id for d in docs if d.group_id is not None)
        by_author: dict[str, list[Document]] = {}
        for d in docs:
            by_author.setdefault(d.author_id, []).append(d)
        self._by_author = {a: tuple(ds) for a, ds in by_author.items()}

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    def docs_of(self, author_id: str) -> tuple[Document, ...]:
        return self._by_author.get(author_id, ())

    def doc_count_of(self, author_id: str) -> int:
        return len(self._by_author.get(author_id, ()))


def load_corpus(path: str | Path) -> Corpus:
    """Read a UTF-8 JSON Lines corpus, preserving file order as the ordering key."""
    p = Path(path)
    docs: list[Document] = []
    with p.open("r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as e:
                raise CorpusError(f"{p}:{lineno}: invalid JSON: {e.msg}") from e
            missing = {"doc_id", "author_id", "group_id", "title", "body"} - raw.keys()
            if missing:
                raise CorpusError(f"{p}:{lineno}: missing keys: {', '.join(sorted(missing))}")
            group = raw["group_id"]
            docs.append(
                Document(
                    doc_id=str(raw["doc_id"]),
                    author_id=str(raw["author_id"]),
                    group_id=None if group is None else str(group),
                    title=str(raw["title"]),
                    body=str(raw["body"]),
                    order_key=len(docs),
                )
            )
    try:
        return Corpus(docs)
    except CorpusError as e:
        raise CorpusError(f"{p}: {e}") from e


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write the corpus back as JSON Lines (round-trips document content)."""
    with Path(path).open("w", encoding="utf-8") as f:
        for d in corpus:
            f.write(
                json.dumps(
                    {
                        "doc_id": d.doc_id,
                        "author_id": d.author_id,
                        "group_id": d.group_id,
                        "title": d.title,
                        "body": d.body,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def filter_experts_min_docs(corpus: Corpus, min_docs: int) -> Corpus:
    """Keep only documents of authors with at least `min_docs` documents."""
    if min_docs < 1:
        raise ValueError("min_docs must be >= 1")
    return Corpus(d for d in corpus if corpus.doc_count_of(d.author_id) >= min_docs)


def split_train_test(
    corpus: Corpus, plan: SplitPlan, repetition_index: int
) -> tuple[Corpus, Corpus]:
    """Partition documents into train/test, deterministic in (seed, repetition_index)."""
    if not 0 <= repetition_index < plan.repetitions:
        raise ValueError(
            f"repetition_index {repetition_index} out of range [0, {plan.repetitions})"
        )
    n = len(corpus)
    # round-half-up keeps |train| unambiguous at odd n
    n_train = int(math.floor(plan.train_fraction * n + 0.5))
    rng = random.Random(f"{plan.seed}:{repetition_index}")
    train_idx = set(rng.sample(range(n), n_train))
    train = Corpus(d for i, d in enumerate(corpus) if i in train_idx)
    test = Corpus(d for i, d in enumerate(corpus) if i not in train_idx)
    return train, test
