"""End-to-end experiment grid: split, profile, index, query, score, fuse, report."""

from __future__ import annotations

import io
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .cluster import LdaConfig, SomConfig
from .corpus import Corpus, SplitPlan, split_train_test
from .evaluation import (
    EvalError,
    make_query_cases,
    ndcg_at_k,
    positions_from_values,
    precision_at_k,
    recall_at_k,
    rrf_combine,
)
from .profiles import (
    ProfileSet,
    build_committee,
    build_global,
    build_intervention,
    build_local,
    build_monolithic,
    derive_seed,
)
from .retrieval import Index, bm25_rank, comb_lg_dcs
from .textprep import TokenPipelineConfig, build_vocabulary

METRICS = ("r@10", "p@10", "ndcg@10")


class ExperimentError(ValueError):
    pass


@dataclass(frozen=True)
class GridRow:
    """One configuration: a clustered profile strategy or a baseline."""

    kind: str  # clustered | baseline
    scope: str | None = None  # local | global
    algo: str | None = None
    k_strategy: str | None = None
    fixed_k: int | None = None
    baseline: str | None = None  # monolithic | committee | intervention

    @property
    def label(self) -> str:
        if self.kind == "baseline":
            return self.baseline or "baseline"
        parts = [self.scope or "", self.algo or "", self.k_strategy or ""]
        if self.k_strategy == "fixed":
            parts.append(str(self.fixed_k))
        return ":".join(parts)


@dataclass
class ExperimentConfig:
    task: str
    plan: SplitPlan
    pipeline: TokenPipelineConfig
    rows: list[GridRow]
    min_docs: int = 10
    k1: float = 1.2
    b: float = 0.75
    rrf_c: float = 60.0
    jobs: int = 1
    lda_config: LdaConfig | None = None
    som_config: SomConfig | None = None


@dataclass
class RowResult:
    label: str
    means: dict = field(default_factory=dict)  # metric -> mean over repetitions
    per_rep: dict = field(default_factory=dict)  # metric -> [per-repetition mean]
    per_query: dict = field(default_factory=dict)  # metric -> [per-rep [per-query]]
    mean_k: float = 0.0
    std_k: float = 0.0


@dataclass
class ExperimentResult:
    task: str
    rows: dict  # label -> RowResult
    positions: dict  # metric -> label -> position
    rrf: dict  # label -> value
    order: list  # labels, best RRF first
    improvements: dict  # baseline label -> metric -> pct of best clustered row
    dropped_queries: int
    failures: dict  # label -> error message
    row_specs: list
    best_clustered: str | None = None


def build_profiles_for_row(
    row: GridRow, train: Corpus, cfg: ExperimentConfig, seed: int
) -> ProfileSet:
    if row.kind == "baseline":
        if row.baseline == "monolithic":
            return build_monolithic(train)
        if row.baseline == "committee":
            return build_committee(train)
        if row.baseline == "intervention":
            return build_intervention(train)
        raise ExperimentError(f"unknown baseline {row.baseline!r}")
    builder = build_local if row.scope == "local" else build_global
    return builder(
        train,
        algo=row.algo,
        k_strategy=row.k_strategy,
        seed=seed,
        pipeline=cfg.pipeline,
        fixed_k=row.fixed_k,
        lda_config=cfg.lda_config,
        som_config=cfg.som_config,
    )


def _k_stats(profiles: ProfileSet) -> tuple[float, float]:
    values = list(profiles.provenance.get("k_values", {}).values())
    if not values:
        return 0.0, 0.0
    mean = statistics.fmean(values)
    std = statistics.pstdev(values) if len(values) > 1 else 0.0
    return mean, std


def _run_cell(args) -> tuple[str, int, dict | None, str | None]:
    """One (row, repetition) evaluation; returns per-query metrics or an error."""
    row, rep, train, cases, vocab, cfg, master_seed = args
    try:
        seed = derive_seed(master_seed, row.label, str(rep))
        profiles = build_profiles_for_row(row, train, cfg, seed)
        index = Index(profiles, vocab, cfg.pipeline, k1=cfg.k1, b=cfg.b)
        per_query: dict = {m: [] for m in METRICS}
        for case in cases:
            experts = comb_lg_dcs(bm25_rank(index, case.query), profiles)
            per_query["r@10"].append(recall_at_k(experts, case.relevant))
            per_query["p@10"].append(precision_at_k(experts, case.relevant))
            per_query["ndcg@10"].append(ndcg_at_k(experts, case.relevant))
        mean_k, std_k = _k_stats(profiles)
        per_query["_k"] = (mean_k, std_k)
        return row.label, rep, per_query, None
    except Exception as e:  # a failing configuration must not sink the run
        return row.label, rep, None, f"{type(e).__name__}: {e}"


def run_experiment(corpus: Corpus, cfg: ExperimentConfig, master_seed: int = 0) -> ExperimentResult:
    from .corpus import filter_experts_min_docs

    if not cfg.rows:
        raise ExperimentError("experiment grid is empty")
    labels = [r.label for r in cfg.rows]
    if len(set(labels)) != len(labels):
        raise ExperimentError("duplicate grid rows")
    working = filter_experts_min_docs(corpus, cfg.min_docs) if cfg.min_docs > 1 else corpus
    if len(working) == 0:
        raise ExperimentError("no documents left after the min-docs filter")

    jobs: list[tuple] = []
    dropped_total = 0
    for rep in range(cfg.plan.repetitions):
        train, test = split_train_test(working, cfg.plan, rep)
        vocab = build_vocabulary(train, cfg.pipeline)
        cases, dropped = make_query_cases(
            test, cfg.task, frozenset(train.experts), vocab, cfg.pipeline
        )
        dropped_total += dropped
        if not cases:
            raise EvalError(f"repetition {rep} produced no usable query cases")
        for row in cfg.rows:
            jobs.append((row, rep, train, cases, vocab, cfg, master_seed))

    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            outcomes = list(pool.map(_run_cell, jobs))
    else:
        outcomes = [_run_cell(j) for j in jobs]

    by_label: dict[str, dict[int, dict]] = {}
    failures: dict[str, str] = {}
    for label, rep, per_query, error in outcomes:
        if error is not None:
            failures.setdefault(label, error)
        else:
            by_label.setdefault(label, {})[rep] = per_query

    rows: dict[str, RowResult] = {}
    for row in cfg.rows:
        label = row.label
        if label in failures or label not in by_label:
            failures.setdefault(label, "no successful repetitions")
            continue
        reps = by_label[label]
        result = RowResult(label=label)
        for m in METRICS:
            result.per_query[m] = [reps[r][m] for r in sorted(reps)]
            result.per_rep[m] = [statistics.fmean(v) for v in result.per_query[m]]
            result.means[m] = statistics.fmean(result.per_rep[m])
        ks = [reps[r]["_k"] for r in sorted(reps)]
        result.mean_k = statistics.fmean(k[0] for k in ks)
        result.std_k = statistics.fmean(k[1] for k in ks)
        rows[label] = result

    if not rows:
        raise ExperimentError(f"every configuration failed: {failures}")

    positions = {
        m: positions_from_values({label: rows[label].means[m] for label in rows})
        for m in METRICS
    }
    rrf, order = rrf_combine(positions, c=cfg.rrf_c)

    improvements: dict[str, dict[str, float]] = {}
    best_label: str | None = None
    clustered = [r for r in cfg.rows if r.kind == "clustered" and r.label in rows]
    baselines = [r for r in cfg.rows if r.kind == "baseline" and r.label in rows]
    if clustered and baselines:
        best_label = min((r.label for r in clustered), key=order.index)
        for base in baselines:
            improvements[base.label] = {
                m: 100.0
                * (rows[best_label].means[m] - rows[base.label].means[m])
                / rows[base.label].means[m]
                for m in METRICS
                if rows[base.label].means[m] > 0
            }

    return ExperimentResult(
        task=cfg.task,
        rows=rows,
        positions=positions,
        rrf=rrf,
        order=order,
        improvements=improvements,
        dropped_queries=dropped_total,
        failures=failures,
        row_specs=list(cfg.rows),
        best_clustered=best_label,
    )


def result_csv(result: ExperimentResult) -> str:
    """Table mirroring the per-configuration layout: metrics, positions, RRF."""
    specs = {r.label: r for r in result.row_specs}
    out = io.StringIO()
    out.write("type,algorithm,k_strategy,mean_k,r@10,p@10,ndcg@10,P-r,P-p,P-ndcg,RRF\n")
    for label in result.order:
        row = result.rows[label]
        spec = specs[label]
        if spec.kind == "baseline":
            kind, algo, strategy = "baseline", spec.baseline, "-"
        else:
            kind, algo, strategy = spec.scope, spec.algo, spec.k_strategy
            if spec.k_strategy == "fixed":
                strategy = f"fixed={spec.fixed_k}"
        out.write(
            f"{kind},{algo},{strategy},{row.mean_k:.2f},"
            f"{row.means['r@10']:.4f},{row.means['p@10']:.4f},{row.means['ndcg@10']:.4f},"
            f"{result.positions['r@10'][label]},{result.positions['p@10'][label]},"
            f"{result.positions['ndcg@10'][label]},{result.rrf[label]:.4f}\n"
        )
    return out.getvalue()


def full_grid(algos=None, scopes=("global", "local"), k_strategies=None) -> list[GridRow]:
    """The 36-configuration clustering grid plus the three baselines."""
    from .cluster import ALGORITHMS, K_STRATEGIES

    algos = list(algos) if algos else list(ALGORITHMS)
    k_strategies = list(k_strategies) if k_strategies else list(K_STRATEGIES)
    rows = [
        GridRow(kind="clustered", scope=scope, algo=algo, k_strategy=ks)
        for scope in scopes
        for algo in algos
        for ks in k_strategies
    ]
    rows += [
        GridRow(kind="baseline", baseline=b)
        for b in ("monolithic", "committee", "intervention")
    ]
    return rows
