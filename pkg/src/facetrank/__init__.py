"""facetrank: multi-faceted expert profiles from document clustering.

Pipeline: ingest author-attributed documents, cluster them locally or
globally into topical subprofiles, index the subprofile macro-documents with
BM25, fuse subprofile scores into expert rankings, and evaluate against
monolithic / committee / intervention baselines.
"""

__version__ = "0.1.0"

from .corpus import Corpus, Document, SplitPlan, filter_experts_min_docs, load_corpus, split_train_test
from .profiles import (
    ProfileSet,
    Subprofile,
    build_committee,
    build_global,
    build_intervention,
    build_local,
    build_monolithic,
)
from .retrieval import Index, Query, RankedList, bm25_rank, comb_lg_dcs, make_query
from .textprep import TokenPipelineConfig, Vocabulary, build_vocabulary, preprocess, tokenize

__all__ = [
    "Corpus",
    "Document",
    "Index",
    "ProfileSet",
    "Query",
    "RankedList",
    "SplitPlan",
    "Subprofile",
    "TokenPipelineConfig",
    "Vocabulary",
    "bm25_rank",
    "build_committee",
    "build_global",
    "build_intervention",
    "build_local",
    "build_monolithic",
    "build_vocabulary",
    "comb_lg_dcs",
    "filter_experts_min_docs",
    "load_corpus",
    "make_query",
    "preprocess",
    "split_train_test",
    "tokenize",
]
