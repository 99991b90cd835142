"""Command line entry point: ingest, synth, cluster, profiles, index, query,
experiment, report.

Exit codes: 0 ok, 2 configuration error, 3 corpus/artifact error, 4 stage failure.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from dataclasses import asdict
from pathlib import Path

from .cluster import (
    ALGORITHMS,
    Clustering,
    ClusterError,
    KSelectionInputs,
    LdaConfig,
    SomConfig,
    select_k,
    run_algorithm,
)
from .corpus import CorpusError, SplitPlan, filter_experts_min_docs, load_corpus, save_corpus
from .evaluation import EvalError
from .experiment import ExperimentConfig, ExperimentError, GridRow, result_csv, run_experiment
from .profiles import (
    ProfileError,
    ProfileSet,
    build_committee,
    build_global,
    build_intervention,
    build_local,
    build_monolithic,
    load_profiles,
    save_profiles,
)
from .report import contingency, contingency_csv, profile_sizes_csv, top_terms_csv
from .retrieval import (
    Index,
    RetrievalError,
    bm25_rank,
    fuse_by_expert,
    index_from_payload,
    index_to_payload,
    make_query,
    trec_lines,
)
from .stemming import STEMMERS
from .synthgen import PlantedSpec, generate, write_labels
from .textprep import TextPrepError, TokenPipelineConfig, build_vocabulary, load_stopwords
from .vectorize import build_counts, tfidf

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CORPUS = 3
EXIT_STAGE = 4


class ConfigError(ValueError):
    pass


def _add_pipeline_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--stopwords", help="stopword file, one token per line")
    parser.add_argument("--stemmer", default="spanish", choices=sorted(STEMMERS))
    parser.add_argument("--min-df-fraction", type=float, default=0.01)
    parser.add_argument("--keep-numbers", action="store_true")


def _pipeline_from_args(args: argparse.Namespace) -> TokenPipelineConfig:
    stopwords = load_stopwords(args.stopwords) if args.stopwords else frozenset()
    return TokenPipelineConfig(
        stopwords=stopwords,
        stemmer=args.stemmer,
        min_doc_fraction=args.min_df_fraction,
        strip_numbers=not args.keep_numbers,
    )


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="facetrank")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--out-dir", default="out")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a corpus and persist the filtered form")
    p.add_argument("--corpus", required=True)
    p.add_argument("--min-docs", type=int, default=10)

    p = sub.add_parser("synth", help="generate a planted-topic corpus plus labels")
    p.add_argument("--topics", type=int, required=True)
    p.add_argument("--experts", type=int, default=10)
    p.add_argument("--docs-per-expert", type=int, default=20)
    p.add_argument("--doc-length", type=int, default=50)
    p.add_argument("--vocab-per-topic", type=int, default=50)
    p.add_argument("--overlap-fraction", type=float, default=0.0)
    p.add_argument("--topics-per-expert", type=int)
    p.add_argument("--purity", type=float, default=1.0)
    p.add_argument("--title-length", type=int, default=4)

    p = sub.add_parser("cluster", help="cluster all documents of a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    p.add_argument("--k-strategy", default="mn_over_t",
                   choices=("groups", "mn_over_t", "sqrt_n_half", "fixed"))
    p.add_argument("--k", type=int, help="cluster count for --k-strategy fixed")
    p.add_argument("--cluster-seed", type=int)
    _add_pipeline_flags(p)

    p = sub.add_parser("profiles", help="build per-expert subprofiles")
    p.add_argument("--corpus", required=True)
    p.add_argument("--strategy", required=True,
                   choices=("local", "global", "monolithic", "committee", "intervention"))
    p.add_argument("--algo", choices=ALGORITHMS)
    p.add_argument("--k-strategy", default="mn_over_t",
                   choices=("groups", "mn_over_t", "sqrt_n_half", "fixed"))
    p.add_argument("--k", type=int)
    _add_pipeline_flags(p)

    p = sub.add_parser("index", help="build a BM25 index over saved profiles")
    p.add_argument("--corpus", required=True)
    p.add_argument("--profiles", required=True)
    p.add_argument("--k1", type=float, default=1.2)
    p.add_argument("--b", type=float, default=0.75)
    _add_pipeline_flags(p)

    p = sub.add_parser("query", help="rank experts for a query against a saved index")
    p.add_argument("--index", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--task", default="recommendation", choices=("filtering", "recommendation"))
    p.add_argument("--query-id", default="q1")

    p = sub.add_parser("experiment", help="run a full evaluation grid from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--corpus", help="override corpus.path")
    p.add_argument("--task", choices=("filtering", "recommendation"))
    p.add_argument("--min-docs", type=int)
    p.add_argument("--train-fraction", type=float)
    p.add_argument("--repetitions", type=int)
    p.add_argument("--k1", type=float)
    p.add_argument("--b", type=float)

    p = sub.add_parser("report", help="contingency, top-term and profile-size tables")
    p.add_argument("--corpus", required=True)
    p.add_argument("--clustering", help="clustering CSV for the contingency table")
    p.add_argument("--profiles", help="profiles JSONL for term and size tables")
    p.add_argument("--top-n", type=int, default=50)
    _add_pipeline_flags(p)

    return parser


# ---------------------------------------------------------------------------
# experiment config files: flat `section.key = value` lines
# ---------------------------------------------------------------------------

_LIST_KEYS = {"grid.scopes", "grid.algos", "grid.k_strategies", "grid.baselines"}
_KNOWN_KEYS = _LIST_KEYS | {
    "corpus.path", "corpus.min_docs", "task", "seed", "jobs",
    "split.train_fraction", "split.repetitions",
    "pipeline.stemmer", "pipeline.stopwords", "pipeline.min_df_fraction",
    "pipeline.lowercase", "pipeline.strip_numbers",
    "retrieval.k1", "retrieval.b", "rrf.c", "grid.fixed_k",
    "lda.iterations", "lda.burn_in", "lda.alpha", "lda.beta",
    "som.width", "som.height", "som.epochs",
}


def parse_config_file(path: str | Path) -> dict:
    values: dict[str, str] = {}
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    with p.open("r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{p}:{lineno}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            key = key.strip()
            if key not in _KNOWN_KEYS:
                raise ConfigError(f"{p}:{lineno}: unknown key {key!r}")
            values[key] = value.strip()
    return values


def _as_bool(raw: str) -> bool:
    if raw.lower() in ("true", "1", "yes"):
        return True
    if raw.lower() in ("false", "0", "no"):
        return False
    raise ConfigError(f"expected a boolean, got {raw!r}")


def experiment_setup(values: dict, args: argparse.Namespace) -> tuple[str, int, ExperimentConfig]:
    """Merge config-file values with CLI overrides; flags win."""
    def pick(flag_value, key: str, cast, default):
        if flag_value is not None:
            return flag_value
        if key in values and values[key] != "":
            try:
                return cast(values[key])
            except (TypeError, ValueError) as e:
                raise ConfigError(f"bad value for {key}: {e}") from e
        return default

    corpus_path = args.corpus or values.get("corpus.path")
    if not corpus_path:
        raise ConfigError("corpus.path is required (or pass --corpus)")
    task = args.task or values.get("task")
    if task not in ("filtering", "recommendation"):
        raise ConfigError("task must be 'filtering' or 'recommendation'")

    seed = pick(None if args.seed == 0 else args.seed, "seed", int, 0)
    plan = SplitPlan(
        train_fraction=pick(args.train_fraction, "split.train_fraction", float, 0.8),
        repetitions=pick(args.repetitions, "split.repetitions", int, 5),
        seed=seed,
    )
    stop_path = values.get("pipeline.stopwords", "")
    pipeline = TokenPipelineConfig(
        stopwords=load_stopwords(stop_path) if stop_path else frozenset(),
        stemmer=values.get("pipeline.stemmer", "spanish"),
        min_doc_fraction=pick(None, "pipeline.min_df_fraction", float, 0.01),
        lowercase=_as_bool(values.get("pipeline.lowercase", "true")),
        strip_numbers=_as_bool(values.get("pipeline.strip_numbers", "true")),
    )

    rows: list[GridRow] = []
    scopes = [s for s in values.get("grid.scopes", "").split(",") if s.strip()]
    algos = [s.strip() for s in values.get("grid.algos", "").split(",") if s.strip()]
    strategies = [s.strip() for s in values.get("grid.k_strategies", "").split(",") if s.strip()]
    fixed_k = pick(None, "grid.fixed_k", int, None)
    for scope in (s.strip() for s in scopes):
        if scope not in ("local", "global"):
            raise ConfigError(f"unknown grid scope {scope!r}")
        for algo in algos:
            if algo not in ALGORITHMS:
                raise ConfigError(f"unknown grid algorithm {algo!r}")
            for strategy in strategies:
                if strategy not in ("groups", "mn_over_t", "sqrt_n_half", "fixed"):
                    raise ConfigError(f"unknown k strategy {strategy!r}")
                if strategy == "fixed" and fixed_k is None:
                    raise ConfigError("grid.fixed_k is required with the fixed strategy")
                rows.append(GridRow(kind="clustered", scope=scope, algo=algo,
                                    k_strategy=strategy,
                                    fixed_k=fixed_k if strategy == "fixed" else None))
    for baseline in (s.strip() for s in values.get("grid.baselines", "").split(",")):
        if not baseline:
            continue
        if baseline not in ("monolithic", "committee", "intervention"):
            raise ConfigError(f"unknown baseline {baseline!r}")
        rows.append(GridRow(kind="baseline", baseline=baseline))
    if not rows:
        raise ConfigError("the grid is empty: set grid.* keys")

    lda_config = None
    if any(v.startswith("lda.") for v in values):
        lda_config = LdaConfig(
            topics=2,  # overridden per run
            alpha=pick(None, "lda.alpha", float, None),
            beta=pick(None, "lda.beta", float, 0.01),
            iterations=pick(None, "lda.iterations", int, 1000),
            burn_in=pick(None, "lda.burn_in", int, 200),
        )
    som_config = None
    if "som.width" in values and "som.height" in values:
        som_config = SomConfig(
            width=pick(None, "som.width", int, 8),
            height=pick(None, "som.height", int, 8),
            epochs=pick(None, "som.epochs", int, 100),
        )

    cfg = ExperimentConfig(
        task=task,
        plan=plan,
        pipeline=pipeline,
        rows=rows,
        min_docs=pick(args.min_docs, "corpus.min_docs", int, 10),
        k1=pick(args.k1, "retrieval.k1", float, 1.2),
        b=pick(args.b, "retrieval.b", float, 0.75),
        rrf_c=pick(None, "rrf.c", float, 60.0),
        jobs=pick(None if args.jobs == (os.cpu_count() or 1) else args.jobs, "jobs", int, 1),
        lda_config=lda_config,
        som_config=som_config,
    )
    return corpus_path, seed, cfg


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_ingest(args) -> int:
    corpus = load_corpus(args.corpus)
    filtered = filter_experts_min_docs(corpus, args.min_docs) if args.min_docs > 1 else corpus
    out = _out_dir(args)
    save_corpus(filtered, out / "corpus.jsonl")
    print(
        f"ingested {len(corpus)} documents; kept {len(filtered)} from "
        f"{len(filtered.experts)} experts across {len(filtered.groups)} groups"
    )
    print(f"wrote {out / 'corpus.jsonl'}")
    return EXIT_OK


def cmd_synth(args) -> int:
    spec = PlantedSpec(
        topics=args.topics,
        vocab_per_topic=args.vocab_per_topic,
        overlap_fraction=args.overlap_fraction,
        experts=args.experts,
        docs_per_expert=args.docs_per_expert,
        doc_length=args.doc_length,
        topics_per_expert=args.topics_per_expert,
        purity=args.purity,
        title_length=args.title_length,
        seed=args.seed,
    )
    corpus, labels = generate(spec)
    out = _out_dir(args)
    save_corpus(corpus, out / "corpus.jsonl")
    write_labels(labels, out / "labels.csv")
    print(f"wrote {out / 'corpus.jsonl'} ({len(corpus)} documents) and {out / 'labels.csv'}")
    return EXIT_OK


def _clustering_to_csv(clustering: Clustering, strategy: str, path: Path) -> None:
    with path.open("w", encoding="utf-8") as f:
        f.write(
            f"# algorithm={clustering.algorithm} k={clustering.k} "
            f"strategy={strategy} seed={clustering.seed}\n"
        )
        f.write("doc_id,cluster_label\n")
        for doc_id, label in zip(clustering.doc_ids, clustering.labels):
            f.write(f"{doc_id},{label}\n")


def _clustering_from_csv(path: Path) -> Clustering:
    if not path.exists():
        raise CorpusError(f"clustering file not found: {path}")
    doc_ids, labels = [], []
    algorithm, seed = "unknown", None
    with path.open("r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line or line == "doc_id,cluster_label":
                continue
            if line.startswith("#"):
                for part in line[1:].split():
                    key, _, value = part.partition("=")
                    if key == "algorithm":
                        algorithm = value
                    elif key == "seed" and value != "None":
                        seed = int(value)
                continue
            doc_id, _, label = line.partition(",")
            doc_ids.append(doc_id)
            labels.append(int(label))
    k = max(labels) + 1 if labels else 1
    return Clustering(labels=tuple(labels), doc_ids=tuple(doc_ids), k=k,
                      algorithm=algorithm, seed=seed)


def cmd_cluster(args) -> int:
    corpus = load_corpus(args.corpus)
    pipeline = _pipeline_from_args(args)
    vocab = build_vocabulary(corpus, pipeline)
    counts = build_counts(corpus, vocab, pipeline)
    seed = args.cluster_seed if args.cluster_seed is not None else args.seed
    if args.k_strategy == "fixed":
        if args.k is None:
            raise ConfigError("--k is required with --k-strategy fixed")
        k = max(1, min(args.k, counts.n))
    else:
        k = select_k(
            args.k_strategy,
            KSelectionInputs(n=counts.n, m=counts.m, t=counts.nnz,
                             group_count=max(1, len(corpus.groups))),
        )
    clustering = run_algorithm(args.algo, k, seed, counts=counts, weighted=tfidf(counts))
    out = _out_dir(args)
    path = out / "clustering.csv"
    _clustering_to_csv(clustering, args.k_strategy, path)
    print(f"clustered {counts.n} documents into k={k} with {args.algo}; wrote {path}")
    return EXIT_OK


def cmd_profiles(args) -> int:
    corpus = load_corpus(args.corpus)
    pipeline = _pipeline_from_args(args)
    if args.strategy == "monolithic":
        profiles = build_monolithic(corpus)
    elif args.strategy == "committee":
        profiles = build_committee(corpus)
    elif args.strategy == "intervention":
        profiles = build_intervention(corpus)
    else:
        if args.algo is None:
            raise ConfigError("--algo is required for clustered strategies")
        builder = build_local if args.strategy == "local" else build_global
        profiles = builder(corpus, algo=args.algo, k_strategy=args.k_strategy,
                           seed=args.seed, pipeline=pipeline, fixed_k=args.k)
    out = _out_dir(args)
    path = out / "profiles.jsonl"
    save_profiles(profiles, path)
    print(f"built {len(profiles)} subprofiles for {len(profiles.experts())} experts; wrote {path}")
    return EXIT_OK


def cmd_index(args) -> int:
    corpus = load_corpus(args.corpus)
    profiles_path = Path(args.profiles)
    if not profiles_path.exists():
        raise CorpusError(f"profiles file not found: {profiles_path}")
    profiles = load_profiles(profiles_path, corpus)
    pipeline = _pipeline_from_args(args)
    vocab = build_vocabulary(corpus, pipeline)
    index = Index(profiles, vocab, pipeline, k1=args.k1, b=args.b)
    out = _out_dir(args)
    path = out / "index.json"
    with path.open("w", encoding="utf-8") as f:
        json.dump(index_to_payload(index), f)
    print(f"indexed {index.n} subprofiles over {len(vocab)} terms; wrote {path}")
    return EXIT_OK


def cmd_query(args) -> int:
    path = Path(args.index)
    if not path.exists():
        raise CorpusError(f"index file not found: {path}")
    with path.open("r", encoding="utf-8") as f:
        index = index_from_payload(json.load(f))
    query = make_query(args.query, args.task, index.vocab, index.config)
    expert_of = dict(zip(index.subprofile_ids, index.expert_ids))
    ranking = fuse_by_expert(bm25_rank(index, query), expert_of)
    for line in trec_lines(ranking, args.query_id):
        print(line)
    return EXIT_OK


def cmd_experiment(args) -> int:
    values = parse_config_file(args.config)
    corpus_path, seed, cfg = experiment_setup(values, args)
    try:
        corpus = load_corpus(corpus_path)
    except (CorpusError, OSError) as e:
        print(f"corpus error: {e}", file=sys.stderr)
        return EXIT_CORPUS
    out = _out_dir(args)
    manifest = {
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "master_seed": seed,
        "corpus_path": str(corpus_path),
        "task": cfg.task,
        "min_docs": cfg.min_docs,
        "plan": asdict(cfg.plan),
        "pipeline": {
            "stopwords": sorted(cfg.pipeline.stopwords),
            "stemmer": cfg.pipeline.stemmer,
            "min_doc_fraction": cfg.pipeline.min_doc_fraction,
            "lowercase": cfg.pipeline.lowercase,
            "strip_numbers": cfg.pipeline.strip_numbers,
        },
        "retrieval": {"k1": cfg.k1, "b": cfg.b},
        "rrf_c": cfg.rrf_c,
        "jobs": cfg.jobs,
        "grid": [asdict(r) for r in cfg.rows],
        "lda": asdict(cfg.lda_config) if cfg.lda_config else None,
        "som": asdict(cfg.som_config) if cfg.som_config else None,
        "outputs": {
            "results_csv": str(out / f"results_{cfg.task}.csv"),
            "runs_dir": str(out / "runs"),
        },
    }
    with (out / "manifest.json").open("w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2)
    try:
        result = run_experiment(corpus, cfg, master_seed=seed)
    except (ExperimentError, EvalError, TextPrepError, ProfileError, ClusterError) as e:
        print(f"stage failure: {e}", file=sys.stderr)
        return EXIT_STAGE
    csv_path = out / f"results_{cfg.task}.csv"
    csv_path.write_text(result_csv(result), encoding="utf-8")
    runs_dir = out / "runs"
    runs_dir.mkdir(exist_ok=True)
    for label, row in result.rows.items():
        safe = label.replace(":", "_")
        with (runs_dir / f"{safe}.json").open("w", encoding="utf-8") as f:
            json.dump(
                {
                    "label": label,
                    "means": row.means,
                    "per_rep": row.per_rep,
                    "per_query": row.per_query,
                    "mean_k": row.mean_k,
                    "std_k": row.std_k,
                },
                f,
            )
    print(f"wrote {csv_path} ({len(result.rows)} configurations)")
    if result.failures:
        for label, error in sorted(result.failures.items()):
            print(f"failed configuration {label}: {error}", file=sys.stderr)
    if result.improvements:
        best = result.best_clustered
        for baseline, pcts in sorted(result.improvements.items()):
            summary = ", ".join(f"{m} {v:+.2f}%" for m, v in pcts.items())
            print(f"best clustered ({best}) vs {baseline}: {summary}")
    return EXIT_OK


def cmd_report(args) -> int:
    corpus = load_corpus(args.corpus)
    pipeline = _pipeline_from_args(args)
    out = _out_dir(args)
    wrote = []
    if args.clustering:
        clustering = _clustering_from_csv(Path(args.clustering))
        groups, matrix = contingency(clustering, corpus)
        path = out / "contingency.csv"
        path.write_text(contingency_csv(groups, matrix), encoding="utf-8")
        wrote.append(path)
    if args.profiles:
        profiles = load_profiles(Path(args.profiles), corpus)
        vocab = build_vocabulary(corpus, pipeline)
        path = out / "top_terms.csv"
        path.write_text(top_terms_csv(profiles, vocab, pipeline, args.top_n), encoding="utf-8")
        wrote.append(path)
        path = out / "profile_sizes.csv"
        path.write_text(profile_sizes_csv(profiles), encoding="utf-8")
        wrote.append(path)
    if not wrote:
        raise ConfigError("report needs --clustering and/or --profiles")
    print("wrote " + ", ".join(str(p) for p in wrote))
    return EXIT_OK


_COMMANDS = {
    "ingest": cmd_ingest,
    "synth": cmd_synth,
    "cluster": cmd_cluster,
    "profiles": cmd_profiles,
    "index": cmd_index,
    "query": cmd_query,
    "experiment": cmd_experiment,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code else 0
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (CorpusError, FileNotFoundError) as e:
        print(f"corpus error: {e}", file=sys.stderr)
        return EXIT_CORPUS
    except (TextPrepError, ProfileError, ClusterError, RetrievalError, EvalError, ExperimentError) as e:
        print(f"stage failure: {e}", file=sys.stderr)
        return EXIT_STAGE


if __name__ == "__main__":
    sys.exit(main())
