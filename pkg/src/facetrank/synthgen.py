"""Planted-topic synthetic corpora: the ground-truth oracle for clustering
recovery and end-to-end ordering checks.

Every document carries a planted topic label (also written to group_id).
By default tokens are drawn purely from the planted topic's vocabulary; a
purity below 1.0 mixes in tokens from the author's other interests. Optional
structure mirrors a debate corpus: multi-author initiatives with shared
titles, narrow subtopics inside each topic, per-initiative theme terms, and
per-author signature vocabulary.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus, Document


class SynthError(ValueError):
    pass


@dataclass(frozen=True)
class PlantedSpec:
    topics: int
    vocab_per_topic: int = 50
    overlap_fraction: float = 0.0
    subtopics_per_topic: int = 1  # partition each topic vocabulary into narrow subareas
    subtopics_owned: int | None = None  # per owned topic; None -> all subtopics
    experts: int = 10
    docs_per_expert: int | tuple[int, int] = 20  # fixed, or an inclusive range
    doc_length: int | tuple[int, int] = 50  # fixed, or an inclusive range
    topics_per_expert: int | None = None  # None -> every expert mixes all topics
    mixtures: tuple[tuple[float, ...], ...] | None = None  # explicit, one row per expert
    purity: float = 1.0  # probability a token comes from the document's planted topic
    title_length: int = 4
    zipf_s: float = 0.0  # 0 -> uniform within-subtopic token sampling
    authors_per_initiative: int | tuple[int, int] = 1  # >1 groups docs into shared initiatives
    interventions_per_author: int | tuple[int, int] = 1  # interventions per participant
    offtopic_participation: float = 0.0  # chance a co-participant joins regardless of interest
    signature_terms: int = 0  # per-expert private vocabulary (author idiolect)
    signature_rate: float = 0.0  # token share drawn from the author's signature set
    theme_terms: int = 0  # per-initiative private vocabulary (the matter under discussion)
    theme_rate: float = 0.0  # body token share drawn from the initiative theme
    title_theme_rate: float | None = None  # defaults to theme_rate
    seed: int = 0

    def __post_init__(self) -> None:
        if self.topics < 1 or self.vocab_per_topic < 1:
            raise SynthError("need at least one topic with a non-empty vocabulary")
        if not 0.0 <= self.overlap_fraction < 1.0:
            raise SynthError("overlap_fraction must be in [0, 1)")
        if not 0.0 < self.purity <= 1.0:
            raise SynthError("purity must be in (0, 1]")
        if self.mixtures is not None and len(self.mixtures) != self.experts:
            raise SynthError("mixtures must supply one row per expert")
        if self.subtopics_per_topic < 1:
            raise SynthError("subtopics_per_topic must be >= 1")
        for bound in (self.docs_per_expert, self.doc_length):
            low = bound[0] if isinstance(bound, tuple) else bound
            if low < 1:
                raise SynthError("docs_per_expert and doc_length must be >= 1")


def _letters(value: int) -> str:
    """Alphabetic encoding so planted terms survive number-stripping tokenizers."""
    digits = "abcdefghijklmnopqrstuvwxyz"
    out = digits[value % 26]
    value //= 26
    while value:
        out = digits[value % 26] + out
        value //= 26
    return out


def _vocabularies(spec: PlantedSpec) -> tuple[list[list[list[str]]], list[str]]:
    """Per (topic, subtopic) term slices plus the cross-topic shared pool."""
    shared_n = round(spec.overlap_fraction * spec.vocab_per_topic)
    shared = [f"common{_letters(i)}" for i in range(shared_n)]
    per_topic = spec.vocab_per_topic - shared_n
    s = spec.subtopics_per_topic
    by_topic: list[list[list[str]]] = []
    for t in range(spec.topics):
        terms = [f"top{_letters(t)}w{_letters(i)}" for i in range(per_topic)]
        slices = [terms[(i * per_topic) // s : ((i + 1) * per_topic) // s] for i in range(s)]
        if any(not sl for sl in slices):
            raise SynthError("too many subtopics for the per-topic vocabulary size")
        by_topic.append(slices)
    return by_topic, shared


def _expert_mixtures(spec: PlantedSpec, rng: random.Random) -> list[dict[int, float]]:
    if spec.mixtures is not None:
        out = []
        for row in spec.mixtures:
            if len(row) != spec.topics or abs(sum(row) - 1.0) > 1e-9:
                raise SynthError("each mixture must have one weight per topic summing to 1")
            out.append({t: w for t, w in enumerate(row) if w > 0})
        return out
    mixtures = []
    for _ in range(spec.experts):
        if spec.topics_per_expert is None:
            chosen = list(range(spec.topics))
        else:
            chosen = sorted(rng.sample(range(spec.topics), spec.topics_per_expert))
        weights = [rng.random() + 0.25 for _ in chosen]
        total = sum(weights)
        mixtures.append({t: w / total for t, w in zip(chosen, weights)})
    return mixtures


def generate(spec: PlantedSpec) -> tuple[Corpus, dict[str, int]]:
    """Deterministic corpus plus doc_id -> planted topic labels."""
    rng = random.Random(f"synth:{spec.seed}")
    by_topic, shared = _vocabularies(spec)
    mixtures = _expert_mixtures(spec, rng)
    n_sub = spec.subtopics_per_topic

    owned: list[dict[int, list[int]]] = []
    for e in range(spec.experts):
        per_topic: dict[int, list[int]] = {}
        for t in mixtures[e]:
            if spec.subtopics_owned is None or spec.subtopics_owned >= n_sub:
                per_topic[t] = list(range(n_sub))
            else:
                per_topic[t] = sorted(rng.sample(range(n_sub), spec.subtopics_owned))
        owned.append(per_topic)

    def zipf_weights(n: int) -> list[float] | None:
        if spec.zipf_s <= 0:
            return None
        return [1.0 / (r + 1) ** spec.zipf_s for r in range(n)]

    def draw_token(topic: int, subtopic: int) -> str:
        vocab = by_topic[topic][subtopic] + shared
        weights = zipf_weights(len(vocab))
        if weights is None:
            return vocab[rng.randrange(len(vocab))]
        return rng.choices(vocab, weights=weights, k=1)[0]

    def resolve(bound: int | tuple[int, int]) -> int:
        if isinstance(bound, tuple):
            return rng.randint(bound[0], bound[1])
        return bound

    def own_draw(author_idx: int) -> tuple[int, int]:
        mixture = mixtures[author_idx]
        topics = list(mixture)
        t = rng.choices(topics, weights=[mixture[x] for x in topics], k=1)[0]
        subs = owned[author_idx].get(t) or list(range(n_sub))
        return t, subs[rng.randrange(len(subs))]

    signatures = [
        [f"sig{_letters(e)}w{_letters(i)}" for i in range(spec.signature_terms)]
        for e in range(spec.experts)
    ]

    def author_token(author_idx: int, main: tuple[int, int], theme: list[str]) -> str:
        if theme and rng.random() < spec.theme_rate:
            return theme[rng.randrange(len(theme))]
        if spec.signature_rate > 0 and signatures[author_idx] and rng.random() < spec.signature_rate:
            return signatures[author_idx][rng.randrange(len(signatures[author_idx]))]
        if spec.purity >= 1.0 or rng.random() < spec.purity:
            return draw_token(*main)
        return draw_token(*own_draw(author_idx))

    docs: list[Document] = []
    labels: dict[str, int] = {}

    def emit(author_idx: int, main: tuple[int, int], title: str, doc_index: int,
             theme: list[str]) -> None:
        body = " ".join(
            author_token(author_idx, main, theme) for _ in range(resolve(spec.doc_length))
        )
        doc_id = f"e{author_idx}d{doc_index}"
        docs.append(
            Document(
                doc_id=doc_id,
                author_id=f"expert{author_idx}",
                group_id=f"topic{main[0]}",
                title=title,
                body=body,
                order_key=len(docs),
            )
        )
        labels[doc_id] = main[0]

    theme_counter = 0

    def next_theme() -> list[str]:
        nonlocal theme_counter
        if spec.theme_terms < 1:
            return []
        theme = [f"ini{_letters(theme_counter)}w{_letters(i)}" for i in range(spec.theme_terms)]
        theme_counter += 1
        return theme

    title_theme_rate = (
        spec.title_theme_rate if spec.title_theme_rate is not None else spec.theme_rate
    )

    def title_token(main: tuple[int, int], theme: list[str]) -> str:
        # titles carry the initiative's matter, never author idiolect
        if theme and rng.random() < title_theme_rate:
            return theme[rng.randrange(len(theme))]
        return draw_token(*main)

    if spec.authors_per_initiative == 1 and spec.interventions_per_author == 1:
        # one single-author initiative per document
        for e in range(spec.experts):
            for j in range(resolve(spec.docs_per_expert)):
                main = own_draw(e)
                theme = next_theme()
                title_tokens = [title_token(main, theme) for _ in range(spec.title_length)]
                # the numeric tail keeps titles unique without entering the token pipeline
                title = " ".join(title_tokens) + f" {len(docs) + 1}"
                emit(e, main, title, j, theme)
    else:
        # multi-author initiatives: a seed author picks the matter, co-participants
        # join in proportion to their activity and interest in it
        activity = [resolve(spec.docs_per_expert) for _ in range(spec.experts)]
        mean_authors = (
            (spec.authors_per_initiative[0] + spec.authors_per_initiative[1]) / 2.0
            if isinstance(spec.authors_per_initiative, tuple)
            else spec.authors_per_initiative
        )
        mean_interventions = (
            (spec.interventions_per_author[0] + spec.interventions_per_author[1]) / 2.0
            if isinstance(spec.interventions_per_author, tuple)
            else spec.interventions_per_author
        )
        n_initiatives = max(1, round(sum(activity) / (mean_authors * mean_interventions)))
        doc_counter = [0] * spec.experts
        for _ in range(n_initiatives):
            seed_author = rng.choices(range(spec.experts), weights=activity, k=1)[0]
            main = own_draw(seed_author)
            topic, subtopic = main
            wanted = max(1, resolve(spec.authors_per_initiative))
            pool = [
                (e, activity[e] * mixtures[e].get(topic, 0.0))
                for e in range(spec.experts)
                if e != seed_author
                and mixtures[e].get(topic, 0.0) > 0
                and subtopic in owned[e].get(topic, ())
            ]
            anyone = [e for e in range(spec.experts) if e != seed_author]
            participants = [seed_author]
            while len(participants) < wanted and (pool or anyone):
                if anyone and rng.random() < spec.offtopic_participation:
                    # drawn into the debate regardless of their usual interests
                    weights = [activity[e] for e in anyone]
                    e = anyone[rng.choices(range(len(anyone)), weights=weights, k=1)[0]]
                elif pool:
                    pick = rng.choices(range(len(pool)), weights=[w for _, w in pool], k=1)[0]
                    e = pool.pop(pick)[0]
                else:
                    break
                if e in participants:
                    continue
                participants.append(e)
                anyone = [a for a in anyone if a != e]
                pool = [(a, w) for a, w in pool if a != e]
            theme = next_theme()
            title_tokens = [title_token(main, theme) for _ in range(spec.title_length)]
            title = " ".join(title_tokens) + f" {len(docs) + 1}"
            for e in participants:
                for _ in range(max(1, resolve(spec.interventions_per_author))):
                    emit(e, main, title, doc_counter[e], theme)
                    doc_counter[e] += 1
    return Corpus(docs), labels


def write_labels(labels: dict[str, int], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["doc_id", "topic"])
        for doc_id, topic in labels.items():
            writer.writerow([doc_id, topic])
