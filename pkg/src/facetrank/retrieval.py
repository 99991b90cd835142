"""BM25 indexing of subprofile macro-documents and score fusion into expert rankings."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .profiles import ProfileSet
from .textprep import TokenPipelineConfig, Vocabulary, preprocess


class RetrievalError(ValueError):
    pass


TASKS = ("filtering", "recommendation")


@dataclass(frozen=True)
class Query:
    text: str
    terms: tuple[str, ...]
    task: str

    def __post_init__(self) -> None:
        if self.task not in TASKS:
            raise RetrievalError(f"unknown task {self.task!r}")


@dataclass(frozen=True)
class RankedEntry:
    id: str
    score: float
    rank: int


@dataclass(frozen=True)
class RankedList:
    entries: tuple[RankedEntry, ...]
    scope: str  # subprofiles | experts

    def __post_init__(self) -> None:
        ordered = sorted(self.entries, key=lambda e: e.rank)
        if [e.rank for e in ordered] != list(range(1, len(ordered) + 1)):
            raise RetrievalError("ranks must be consecutive from 1")
        scores = [e.score for e in ordered]
        if any(a < b for a, b in zip(scores, scores[1:])):
            raise RetrievalError("scores must be non-increasing in rank order")

    def in_rank_order(self) -> list[RankedEntry]:
        return sorted(self.entries, key=lambda e: e.rank)

    def ids(self) -> list[str]:
        return [e.id for e in self.in_rank_order()]


class Index:
    """Immutable BM25 index over subprofile macro-documents."""

    def __init__(
        self,
        profiles: ProfileSet,
        vocab: Vocabulary,
        config: TokenPipelineConfig,
        k1: float = 1.2,
        b: float = 0.75,
    ):
        if len(profiles) == 0:
            raise RetrievalError("cannot index an empty profile set")
        self.k1 = k1
        self.b = b
        self.vocab = vocab
        self.config = config
        self.subprofile_ids = tuple(s.subprofile_id for s in profiles)
        self.expert_ids = tuple(s.expert_id for s in profiles)
        self.postings: dict[str, list[tuple[int, int]]] = {}
        lengths = []
        for pos, sub in enumerate(profiles):
            terms = [t for t in preprocess(sub.macro_text, config) if t in vocab]
            lengths.append(len(terms))
            counts: dict[str, int] = {}
            for t in terms:
                counts[t] = counts.get(t, 0) + 1
            for t in sorted(counts):
                self.postings.setdefault(t, []).append((pos, counts[t]))
        self.lengths = lengths
        self.n = len(lengths)
        # zero-length guard: empty macro-documents normalize as length 1
        self.avg_length = sum(lengths) / self.n or 1.0

    def idf(self, term: str) -> float:
        df = len(self.postings.get(term, ()))
        return math.log(1.0 + (self.n - df + 0.5) / (df + 0.5))


def make_query(text: str, task: str, vocab: Vocabulary, config: TokenPipelineConfig) -> Query:
    """Process the raw text with the same pipeline and vocabulary as the index."""
    terms = tuple(t for t in preprocess(text, config) if t in vocab)
    return Query(text=text, terms=terms, task=task)


def bm25_rank(index: Index, query: Query, cutoff: int | None = None) -> RankedList:
    """Score subprofiles; zero scores are excluded, ties break by subprofile id."""
    k1, b = index.k1, index.b
    scores: dict[int, float] = {}
    for w in query.terms:
        postings = index.postings.get(w)
        if not postings:
            continue
        idf = index.idf(w)
        for pos, tf in postings:
            length = index.lengths[pos] or 1
            denom = tf + k1 * (1.0 - b + b * length / index.avg_length)
            scores[pos] = scores.get(pos, 0.0) + idf * tf * (k1 + 1.0) / denom
    ranked = sorted(
        ((index.subprofile_ids[pos], s) for pos, s in scores.items() if s > 0.0),
        key=lambda item: (-item[1], item[0]),
    )
    if cutoff is not None:
        ranked = ranked[:cutoff]
    entries = tuple(
        RankedEntry(id=i, score=s, rank=r) for r, (i, s) in enumerate(ranked, start=1)
    )
    return RankedList(entries=entries, scope="subprofiles")


def fuse_by_expert(subprofile_ranking: RankedList, expert_of: dict[str, str]) -> RankedList:
    """CombLgDCS: expert score = sum of score / log2(rank + 1) over their subprofiles."""
    if subprofile_ranking.scope != "subprofiles":
        raise RetrievalError("fusion expects a subprofile ranking")
    totals: dict[str, float] = {}
    for entry in subprofile_ranking.entries:
        try:
            expert = expert_of[entry.id]
        except KeyError:
            raise RetrievalError(
                f"ranked subprofile {entry.id!r} has no owner in the profile set"
            ) from None
        totals[expert] = totals.get(expert, 0.0) + entry.score / math.log2(entry.rank + 1)
    ranked = sorted(totals.items(), key=lambda item: (-item[1], item[0]))
    entries = tuple(
        RankedEntry(id=e, score=s, rank=r) for r, (e, s) in enumerate(ranked, start=1)
    )
    return RankedList(entries=entries, scope="experts")


def comb_lg_dcs(subprofile_ranking: RankedList, profiles: ProfileSet) -> RankedList:
    return fuse_by_expert(subprofile_ranking, profiles.expert_of())


def trec_lines(ranking: RankedList, query_id: str, run_tag: str = "facetrank") -> list[str]:
    return [
        f"{query_id} Q0 {e.id} {e.rank} {e.score:.6f} {run_tag}"
        for e in ranking.in_rank_order()
    ]


def index_to_payload(index: Index) -> dict:
    """JSON-serializable snapshot sufficient to answer queries later."""
    return {
        "k1": index.k1,
        "b": index.b,
        "pipeline": {
            "stopwords": sorted(index.config.stopwords),
            "stemmer": index.config.stemmer,
            "min_doc_fraction": index.config.min_doc_fraction,
            "lowercase": index.config.lowercase,
            "strip_numbers": index.config.strip_numbers,
        },
        "vocab": {
            "terms": list(index.vocab.terms),
            "df": list(index.vocab.df),
            "n_docs": index.vocab.n_docs,
        },
        "subprofile_ids": list(index.subprofile_ids),
        "expert_ids": list(index.expert_ids),
        "lengths": list(index.lengths),
        "postings": {t: [[p, tf] for p, tf in plist] for t, plist in index.postings.items()},
    }


def index_from_payload(payload: dict) -> Index:
    index = Index.__new__(Index)
    index.k1 = float(payload["k1"])
    index.b = float(payload["b"])
    index.config = TokenPipelineConfig(
        stopwords=frozenset(payload["pipeline"]["stopwords"]),
        stemmer=payload["pipeline"]["stemmer"],
        min_doc_fraction=float(payload["pipeline"]["min_doc_fraction"]),
        lowercase=bool(payload["pipeline"]["lowercase"]),
        strip_numbers=bool(payload["pipeline"]["strip_numbers"]),
    )
    index.vocab = Vocabulary(
        terms=tuple(payload["vocab"]["terms"]),
        df=tuple(int(v) for v in payload["vocab"]["df"]),
        n_docs=int(payload["vocab"]["n_docs"]),
    )
    index.subprofile_ids = tuple(payload["subprofile_ids"])
    index.expert_ids = tuple(payload["expert_ids"])
    index.lengths = [int(v) for v in payload["lengths"]]
    index.n = len(index.lengths)
    index.avg_length = sum(index.lengths) / index.n or 1.0
    index.postings = {
        t: [(int(p), int(tf)) for p, tf in plist]
        for t, plist in payload["postings"].items()
    }
    return index
