import numpy as np
import pytest

from facetrank.cluster import (
    ClusterError,
    LdaConfig,
    SomConfig,
    adjusted_rand_index,
    lda_cluster,
    lda_fit,
    som_km,
)
from facetrank.corpus import Corpus
from facetrank.synthgen import PlantedSpec, generate
from facetrank.textprep import TokenPipelineConfig, build_vocabulary
from facetrank.vectorize import build_counts, tfidf

from conftest import make_doc

CFG = TokenPipelineConfig(stemmer="none")


def planted_counts(topics=2, experts=4, docs=10, seed=3):
    spec = PlantedSpec(topics=topics, experts=experts, docs_per_expert=docs,
                       doc_length=40, seed=seed)
    corpus, labels = generate(spec)
    vocab = build_vocabulary(corpus, CFG)
    counts = build_counts(corpus, vocab, CFG)
    truth = [labels[d] for d in counts.doc_ids]
    return counts, truth


def test_lda_k1_all_zero():
    counts, _ = planted_counts()
    result = lda_cluster(counts, LdaConfig(topics=1, iterations=5, burn_in=1, seed=0))
    assert set(result.labels) == {0}


def test_lda_distributions_row_stochastic():
    counts, _ = planted_counts()
    result = lda_fit(counts, LdaConfig(topics=2, iterations=50, burn_in=10, seed=1))
    assert np.allclose(result.theta.sum(axis=1), 1.0, atol=1e-9)
    assert np.allclose(result.phi.sum(axis=1), 1.0, atol=1e-9)


def test_lda_rejects_tfidf():
    docs = [make_doc(f"d{i}", "a", "x y", order=i) for i in range(4)]
    corpus = Corpus(docs)
    vocab = build_vocabulary(corpus, CFG)
    weighted = tfidf(build_counts(corpus, vocab, CFG))
    with pytest.raises(ClusterError):
        lda_cluster(weighted, LdaConfig(topics=2))


def test_lda_deterministic():
    counts, _ = planted_counts()
    cfg = LdaConfig(topics=2, iterations=30, burn_in=5, seed=9)
    assert lda_cluster(counts, cfg).labels == lda_cluster(counts, cfg).labels


def test_lda_recovers_planted_topics_across_seeds():
    counts, truth = planted_counts()
    scores = []
    for seed in range(5):
        cfg = LdaConfig(topics=2, iterations=500, burn_in=100, seed=seed)
        result = lda_cluster(counts, cfg)
        scores.append(adjusted_rand_index(result.labels, truth))
    assert sum(scores) / len(scores) >= 0.9


def test_som_identical_documents_collapse():
    docs = [make_doc(f"d{i}", "a", "same words here", order=i) for i in range(8)]
    corpus = Corpus(docs)
    vocab = build_vocabulary(corpus, CFG)
    weighted = tfidf(build_counts(corpus, vocab, CFG))
    result = som_km(weighted, 2, SomConfig(width=2, height=2, epochs=10, seed=0), seed=0)
    assert len(set(result.labels)) == 1


def test_som_grid_too_small():
    docs = [make_doc(f"d{i}", "a", f"w{'x' * i}", order=i) for i in range(6)]
    corpus = Corpus(docs)
    vocab = build_vocabulary(corpus, CFG)
    weighted = tfidf(build_counts(corpus, vocab, CFG))
    with pytest.raises(ClusterError):
        som_km(weighted, 5, SomConfig(width=2, height=2), seed=0)


def test_som_k_equals_cells_refines_bmu_partition():
    # 2x2 grid and k=4: codebook k-means puts every unit in its own cluster,
    # so the document clustering must equal the BMU partition
    spec = PlantedSpec(topics=4, experts=4, docs_per_expert=6, doc_length=30, seed=2)
    corpus, _ = generate(spec)
    vocab = build_vocabulary(corpus, CFG)
    weighted = tfidf(build_counts(corpus, vocab, CFG))
    from facetrank.cluster.som import _bmu, train_som
    from facetrank.vectorize import l2_normalize_rows

    config = SomConfig(width=2, height=2, epochs=30, seed=4)
    result = som_km(weighted, 4, config, seed=4)
    codebook = train_som(l2_normalize_rows(weighted.matrix), config)
    bmu = _bmu(l2_normalize_rows(weighted.matrix), codebook)
    won = {int(u) for u in bmu}
    if len(won) == 4:
        mapping = {}
        for label, unit in zip(result.labels, bmu):
            mapping.setdefault(int(unit), set()).add(label)
        assert all(len(v) == 1 for v in mapping.values())


def test_som_recovers_planted_topics(planted):
    _, corpus, labels = planted
    vocab = build_vocabulary(corpus, CFG)
    weighted = tfidf(build_counts(corpus, vocab, CFG))
    truth = [labels[d] for d in weighted.doc_ids]
    scores = []
    for seed in range(5):
        result = som_km(weighted, 3, SomConfig(width=4, height=4, epochs=50, seed=seed), seed=seed)
        scores.append(adjusted_rand_index(result.labels, truth))
    assert sum(scores) / len(scores) >= 0.8
