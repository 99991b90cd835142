"""Query-set construction, top-10 metrics, position fusion, and significance tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from .corpus import Corpus
from .retrieval import Query, RankedList, make_query
from .textprep import TokenPipelineConfig, Vocabulary


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class QueryCase:
    query: Query
    relevant: frozenset[str]
    source_doc_id: str

    def __post_init__(self) -> None:
        if not self.relevant:
            raise EvalError("relevant expert set must be non-empty")


def make_query_cases(
    test: Corpus,
    task: str,
    known_experts: frozenset[str],
    vocab: Vocabulary,
    config: TokenPipelineConfig,
) -> tuple[list[QueryCase], int]:
    """One case per distinct initiative (shared title) in the test corpus.

    Returns the cases plus the number of initiatives dropped because none of
    their participants has a trained profile.
    """
    if len(test) == 0:
        raise EvalError("test corpus is empty")
    initiatives: dict[str, list] = {}
    for doc in test:
        initiatives.setdefault(doc.title, []).append(doc)
    cases: list[QueryCase] = []
    dropped = 0
    for title, docs in sorted(
        initiatives.items(), key=lambda kv: min(d.order_key for d in kv[1])
    ):
        docs = sorted(docs, key=lambda d: d.order_key)
        relevant = frozenset(d.author_id for d in docs) & known_experts
        if not relevant:
            dropped += 1
            continue
        text = title if task == "recommendation" else "\n".join(d.body for d in docs)
        cases.append(
            QueryCase(
                query=make_query(text, task, vocab, config),
                relevant=relevant,
                source_doc_id=docs[0].doc_id,
            )
        )
    return cases, dropped


def precision_at_k(ranking: RankedList, relevant: frozenset[str], k: int = 10) -> float:
    if k < 1:
        raise EvalError("k must be >= 1")
    top = ranking.ids()[:k]
    return len(set(top) & relevant) / k


def recall_at_k(ranking: RankedList, relevant: frozenset[str], k: int = 10) -> float:
    if k < 1:
        raise EvalError("k must be >= 1")
    if not relevant:
        raise EvalError("relevant set must be non-empty")
    top = ranking.ids()[:k]
    return len(set(top) & relevant) / len(relevant)


def ndcg_at_k(ranking: RankedList, relevant: frozenset[str], k: int = 10) -> float:
    """Binary gains, log2(i + 1) discounting, ideal truncated at min(|relevant|, k)."""
    if k < 1:
        raise EvalError("k must be >= 1")
    top = ranking.ids()[:k]
    dcg = sum(1.0 / math.log2(i + 1) for i, item in enumerate(top, start=1) if item in relevant)
    ideal = min(len(relevant), k)
    idcg = sum(1.0 / math.log2(i + 1) for i in range(1, ideal + 1))
    return dcg / idcg if idcg > 0 else 0.0


def positions_from_values(values: dict[str, float]) -> dict[str, int]:
    """Competition ranking by value descending; ties share the smaller position."""
    ordered = sorted(values.items(), key=lambda kv: (-kv[1], kv[0]))
    positions: dict[str, int] = {}
    for i, (label, value) in enumerate(ordered):
        if i > 0 and value == ordered[i - 1][1]:
            positions[label] = positions[ordered[i - 1][0]]
        else:
            positions[label] = i + 1
    return positions


def rrf_combine(
    positions: dict[str, dict[str, int]], c: float = 60.0
) -> tuple[dict[str, float], list[str]]:
    """RRF(config) = sum over metrics of 1 / (c + position); high to low ordering."""
    metric_names = list(positions)
    if not metric_names:
        raise EvalError("need at least one metric position assignment")
    label_sets = [set(positions[m]) for m in metric_names]
    if any(s != label_sets[0] for s in label_sets[1:]):
        raise EvalError("metrics rank inconsistent configuration sets")
    rrf = {
        label: sum(1.0 / (c + positions[m][label]) for m in metric_names)
        for label in label_sets[0]
    }
    order = sorted(rrf, key=lambda label: (-rrf[label], label))
    return rrf, order


def improvement_pct(method_value: float, baseline_value: float) -> float:
    if baseline_value <= 0:
        raise EvalError("baseline value must be positive")
    return 100.0 * (method_value - baseline_value) / baseline_value


def paired_t_test(a, b) -> tuple[float, float]:
    """Two-sided paired t-test; returns (t statistic, p-value)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise EvalError("paired samples must be equal-length vectors")
    n = a.size
    if n < 2:
        raise EvalError("need at least 2 pairs")
    d = a - b
    mean = d.mean()
    sd = d.std(ddof=1)
    if sd == 0.0:
        return (0.0, 1.0) if mean == 0.0 else (math.inf if mean > 0 else -math.inf, 0.0)
    t = mean / (sd / math.sqrt(n))
    df = n - 1
    # two-sided p via the regularized incomplete beta function
    p = float(betainc(df / 2.0, 0.5, df / (df + t * t)))
    return float(t), p


def one_way_anova(groups) -> tuple[float, float]:
    """One-way ANOVA; returns (F statistic, p-value)."""
    arrays = [np.asarray(g, dtype=float) for g in groups]
    if len(arrays) < 2 or any(g.size < 2 for g in arrays):
        raise EvalError("need at least 2 groups with at least 2 values each")
    all_values = np.concatenate(arrays)
    grand = all_values.mean()
    ssb = sum(g.size * (g.mean() - grand) ** 2 for g in arrays)
    ssw = sum(float(((g - g.mean()) ** 2).sum()) for g in arrays)
    dfb = len(arrays) - 1
    dfw = all_values.size - len(arrays)
    msb = ssb / dfb
    msw = ssw / dfw
    if msw == 0.0:
        return (0.0, 1.0) if msb == 0.0 else (math.inf, 0.0)
    f = msb / msw
    p = float(betainc(dfw / 2.0, dfb / 2.0, dfw / (dfw + dfb * f)))
    return float(f), p
