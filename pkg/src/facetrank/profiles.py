"""Per-expert subprofiles: macro-documents assembled from clusterings or baseline rules."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .cluster import (
    Clustering,
    KSelectionInputs,
    LdaConfig,
    SomConfig,
    run_algorithm,
    select_k,
)
from .corpus import Corpus, Document
from .textprep import TokenPipelineConfig, build_vocabulary
from .vectorize import build_counts, tfidf


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class Subprofile:
    subprofile_id: str
    expert_id: str
    doc_ids: tuple[str, ...]
    macro_text: str
    origin: str  # local | global | monolithic | committee | intervention


@dataclass
class ProfileSet:
    subprofiles: tuple[Subprofile, ...]
    provenance: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.subprofiles)

    def __len__(self) -> int:
        return len(self.subprofiles)

    def expert_of(self) -> dict[str, str]:
        return {s.subprofile_id: s.expert_id for s in self.subprofiles}

    def experts(self) -> frozenset[str]:
        return frozenset(s.expert_id for s in self.subprofiles)


def derive_seed(seed: int, *parts: str) -> int:
    """Stable child seed from a master seed and string context."""
    digest = hashlib.sha256((":".join([str(seed), *parts])).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % (2**31)


def _macro(docs: Iterable[Document]) -> tuple[tuple[str, ...], str]:
    ordered = sorted(docs, key=lambda d: d.order_key)
    return tuple(d.doc_id for d in ordered), "\n".join(d.body for d in ordered)


def _subprofiles_for(
    expert_id: str, doc_groups: list[list[Document]], origin: str
) -> list[Subprofile]:
    """Canonical per-expert ordering: by the smallest ordering key in each group."""
    ordered = sorted(doc_groups, key=lambda g: min(d.order_key for d in g))
    out = []
    for j, group in enumerate(ordered, start=1):
        doc_ids, text = _macro(group)
        out.append(
            Subprofile(
                subprofile_id=f"{expert_id}_c{j}",
                expert_id=expert_id,
                doc_ids=doc_ids,
                macro_text=text,
                origin=origin,
            )
        )
    return out


def build_monolithic(train: Corpus) -> ProfileSet:
    """One subprofile per expert containing all their training documents."""
    subs: list[Subprofile] = []
    for expert in sorted(train.experts):
        subs.extend(_subprofiles_for(expert, [list(train.docs_of(expert))], "monolithic"))
    return ProfileSet(
        subprofiles=tuple(subs),
        provenance={"strategy": "monolithic", "k_values": {e: 1 for e in sorted(train.experts)}},
    )


def build_intervention(train: Corpus) -> ProfileSet:
    """One subprofile per training document."""
    subs: list[Subprofile] = []
    k_values = {}
    for expert in sorted(train.experts):
        docs = train.docs_of(expert)
        subs.extend(_subprofiles_for(expert, [[d] for d in docs], "intervention"))
        k_values[expert] = len(docs)
    return ProfileSet(
        subprofiles=tuple(subs),
        provenance={"strategy": "intervention", "k_values": k_values},
    )


def build_committee(train: Corpus) -> ProfileSet:
    """One subprofile per (expert, group); ungrouped documents pool per expert."""
    if not any(d.group_id is not None for d in train):
        raise ProfileError("committee profiles need at least one grouped document")
    subs: list[Subprofile] = []
    k_values = {}
    for expert in sorted(train.experts):
        by_group: dict[str | None, list[Document]] = {}
        for d in train.docs_of(expert):
            by_group.setdefault(d.group_id, []).append(d)
        groups = list(by_group.values())
        subs.extend(_subprofiles_for(expert, groups, "committee"))
        k_values[expert] = len(groups)
    return ProfileSet(
        subprofiles=tuple(subs),
        provenance={"strategy": "committee", "k_values": k_values},
    )


def _cluster_corpus(
    docs: list[Document],
    algo: str,
    k_strategy: str,
    seed: int,
    pipeline: TokenPipelineConfig,
    fixed_k: int | None,
    group_count: int,
    lda_config: LdaConfig | None,
    som_config: SomConfig | None,
) -> tuple[Clustering, int]:
    corpus = Corpus(docs)
    if len(docs) == 1 or (fixed_k == 1 and k_strategy == "fixed"):
        from .cluster import trivial_clustering

        return trivial_clustering(tuple(d.doc_id for d in docs), algo, seed), 1
    vocab = build_vocabulary(corpus, pipeline)
    counts = build_counts(corpus, vocab, pipeline)
    if k_strategy == "fixed":
        if fixed_k is None:
            raise ProfileError("fixed k strategy needs an explicit k")
        k = max(1, min(fixed_k, len(docs)))
    else:
        inputs = KSelectionInputs(
            n=counts.n, m=counts.m, t=counts.nnz, group_count=group_count
        )
        k = select_k(k_strategy, inputs)
    weighted = tfidf(counts)
    clustering = run_algorithm(
        algo, k, seed, counts=counts, weighted=weighted,
        lda_config=lda_config, som_config=som_config,
    )
    return clustering, k


def build_local(
    train: Corpus,
    algo: str,
    k_strategy: str,
    seed: int,
    pipeline: TokenPipelineConfig | None = None,
    fixed_k: int | None = None,
    lda_config: LdaConfig | None = None,
    som_config: SomConfig | None = None,
) -> ProfileSet:
    """Cluster each expert's documents separately; k evaluated on local statistics."""
    pipeline = pipeline or TokenPipelineConfig()
    subs: list[Subprofile] = []
    k_values: dict[str, int] = {}
    for expert in sorted(train.experts):
        docs = list(train.docs_of(expert))
        local_groups = {d.group_id for d in docs if d.group_id is not None}
        try:
            clustering, k = _cluster_corpus(
                docs,
                algo,
                k_strategy,
                derive_seed(seed, "local", expert),
                pipeline,
                fixed_k,
                group_count=max(1, len(local_groups)),
                lda_config=lda_config,
                som_config=som_config,
            )
        except Exception as e:
            raise ProfileError(f"local clustering failed for expert {expert!r}: {e}") from e
        by_doc = dict(zip(clustering.doc_ids, clustering.labels))
        groups: dict[int, list[Document]] = {}
        for d in docs:
            groups.setdefault(by_doc[d.doc_id], []).append(d)
        subs.extend(_subprofiles_for(expert, list(groups.values()), "local"))
        k_values[expert] = k
    return ProfileSet(
        subprofiles=tuple(subs),
        provenance={
            "strategy": "local",
            "algorithm": algo,
            "k_strategy": k_strategy,
            "seed": seed,
            "k_values": k_values,
        },
    )


def build_global(
    train: Corpus,
    algo: str,
    k_strategy: str,
    seed: int,
    pipeline: TokenPipelineConfig | None = None,
    fixed_k: int | None = None,
    lda_config: LdaConfig | None = None,
    som_config: SomConfig | None = None,
) -> ProfileSet:
    """One clustering over all training documents; subprofiles per (expert, cluster)."""
    if len(train) == 0:
        raise ProfileError("cannot build profiles from an empty corpus")
    pipeline = pipeline or TokenPipelineConfig()
    clustering, k = _cluster_corpus(
        list(train.documents),
        algo,
        k_strategy,
        derive_seed(seed, "global"),
        pipeline,
        fixed_k,
        group_count=max(1, len(train.groups)),
        lda_config=lda_config,
        som_config=som_config,
    )
    by_doc = dict(zip(clustering.doc_ids, clustering.labels))
    subs: list[Subprofile] = []
    for expert in sorted(train.experts):
        groups: dict[int, list[Document]] = {}
        for d in train.docs_of(expert):
            groups.setdefault(by_doc[d.doc_id], []).append(d)
        subs.extend(_subprofiles_for(expert, list(groups.values()), "global"))
    return ProfileSet(
        subprofiles=tuple(subs),
        provenance={
            "strategy": "global",
            "algorithm": algo,
            "k_strategy": k_strategy,
            "seed": seed,
            "k_values": {"global": k},
        },
    )


STRATEGIES = ("local", "global", "monolithic", "committee", "intervention")


def save_profiles(profiles: ProfileSet, path: str | Path) -> None:
    """JSON Lines dump: one subprofile per line with the set-level provenance."""
    with Path(path).open("w", encoding="utf-8") as f:
        for s in profiles:
            f.write(
                json.dumps(
                    {
                        "subprofile_id": s.subprofile_id,
                        "expert_id": s.expert_id,
                        "doc_ids": list(s.doc_ids),
                        "origin": s.origin,
                        "provenance": profiles.provenance,
                    }
                )
                + "\n"
            )


def load_profiles(path: str | Path, corpus: Corpus) -> ProfileSet:
    """Rebuild macro texts from the corpus the profiles were derived from."""
    by_id = {d.doc_id: d for d in corpus}
    subs = []
    provenance: dict = {}
    with Path(path).open("r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            raw = json.loads(line)
            provenance = raw.get("provenance", provenance)
            try:
                docs = [by_id[i] for i in raw["doc_ids"]]
            except KeyError as e:
                raise ProfileError(f"profile references unknown doc_id {e}") from e
            doc_ids, text = _macro(docs)
            subs.append(
                Subprofile(
                    subprofile_id=raw["subprofile_id"],
                    expert_id=raw["expert_id"],
                    doc_ids=doc_ids,
                    macro_text=text,
                    origin=raw["origin"],
                )
            )
    return ProfileSet(subprofiles=tuple(subs), provenance=provenance)
