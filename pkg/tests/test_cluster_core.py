"""k selection, k-means, and PAM."""

import itertools

import numpy as np
import pytest

from facetrank.cluster import (
    ClusterError,
    KSelectionInputs,
    adjusted_rand_index,
    dissimilarity_matrix,
    kmeans,
    pam,
    pam_cost,
    select_k,
)
from facetrank.corpus import Corpus
from facetrank.textprep import TokenPipelineConfig, build_vocabulary
from facetrank.vectorize import build_counts, tfidf

from conftest import make_doc

CFG = TokenPipelineConfig(stemmer="none")


def matrices(bodies):
    docs = [make_doc(f"d{i}", "a", b, order=i) for i, b in enumerate(bodies)]
    corpus = Corpus(docs)
    vocab = build_vocabulary(corpus, CFG)
    counts = build_counts(corpus, vocab, CFG)
    return counts, tfidf(counts)


# --- select_k -------------------------------------------------------------

def test_select_k_mn_over_t_reported_value():
    inputs = KSelectionInputs(n=10025, m=4208, t=1_702_296, group_count=26)
    assert select_k("mn_over_t", inputs) == 24


def test_select_k_sqrt_reported_value():
    inputs = KSelectionInputs(n=10025, m=4208, t=1_702_296, group_count=26)
    assert select_k("sqrt_n_half", inputs) == 70


def test_select_k_groups():
    inputs = KSelectionInputs(n=10025, m=4208, t=1_702_296, group_count=26)
    assert select_k("groups", inputs) == 26


def test_select_k_clamped():
    inputs = KSelectionInputs(n=3, m=100, t=10, group_count=50)
    assert select_k("groups", inputs) == 3
    assert select_k("mn_over_t", inputs) == 3
    tiny = KSelectionInputs(n=5, m=2, t=10, group_count=0)
    assert select_k("groups", tiny) == 1
    assert select_k("mn_over_t", tiny) == 1


def test_select_k_unknown_strategy():
    with pytest.raises(ClusterError):
        select_k("magic", KSelectionInputs(n=5, m=5, t=5, group_count=1))


# --- kmeans ---------------------------------------------------------------

def test_kmeans_k1_single_cluster():
    _, weighted = matrices(["a b", "b c", "c d"])
    result = kmeans(weighted, 1, seed=0)
    assert set(result.labels) == {0}


def test_kmeans_separates_duplicate_groups():
    _, weighted = matrices(["aa bb"] * 3 + ["cc dd"] * 3)
    result = kmeans(weighted, 2, seed=1)
    assert len({result.labels[i] for i in range(3)}) == 1
    assert len({result.labels[i] for i in range(3, 6)}) == 1
    assert result.labels[0] != result.labels[3]


def test_kmeans_recovers_planted_topics(planted):
    _, corpus, labels = planted
    vocab = build_vocabulary(corpus, CFG)
    counts = build_counts(corpus, vocab, CFG)
    result = kmeans(tfidf(counts), 2 if False else 3, seed=42)
    truth = [labels[d] for d in counts.doc_ids]
    assert adjusted_rand_index(result.labels, truth) == pytest.approx(1.0)


def test_kmeans_deterministic(planted):
    _, corpus, _ = planted
    vocab = build_vocabulary(corpus, CFG)
    weighted = tfidf(build_counts(corpus, vocab, CFG))
    a = kmeans(weighted, 3, seed=5)
    b = kmeans(weighted, 3, seed=5)
    assert a.labels == b.labels


def test_kmeans_partition_invariant_to_row_order(planted):
    _, corpus, _ = planted
    reordered = Corpus(list(corpus)[::-1])
    for source in (corpus, reordered):
        vocab = build_vocabulary(source, CFG)
        weighted = tfidf(build_counts(source, vocab, CFG))
        result = kmeans(weighted, 3, seed=42)
        if source is corpus:
            forward = result.partition()
        else:
            assert result.partition() == forward


def test_kmeans_converged_labels_are_argmax(planted):
    _, corpus, _ = planted
    vocab = build_vocabulary(corpus, CFG)
    weighted = tfidf(build_counts(corpus, vocab, CFG))
    result = kmeans(weighted, 3, seed=42)
    # recompute centroids from the assignment and check every label is optimal
    from facetrank.vectorize import l2_normalize_rows

    x = l2_normalize_rows(weighted.matrix)
    centers = np.zeros((3, weighted.m))
    labels = np.array(result.labels)
    for j in range(3):
        mean = np.asarray(x[labels == j].mean(axis=0)).ravel()
        centers[j] = mean / np.linalg.norm(mean)
    sims = np.asarray((x @ centers.T))
    assert np.array_equal(np.argmax(sims, axis=1), labels)


def test_kmeans_k_too_large():
    _, weighted = matrices(["a b", "c d"])
    with pytest.raises(ClusterError):
        kmeans(weighted, 3, seed=0)


# --- pam ------------------------------------------------------------------

def hand_dissim():
    d = np.array(
        [
            [0.0, 0.1, 0.8, 0.85],
            [0.1, 0.0, 0.9, 0.95],
            [0.8, 0.9, 0.0, 0.2],
            [0.85, 0.95, 0.2, 0.0],
        ]
    )
    return d


def test_pam_k_equals_n_zero_cost():
    d = hand_dissim()
    result = pam(d, 4)
    assert len(set(result.labels)) == 4
    assert pam_cost(d, result) == 0.0


def test_pam_two_tight_pairs_brute_force():
    d = hand_dissim()
    result = pam(d, 2)
    assert result.partition() == frozenset(
        {frozenset({"0", "1"}), frozenset({"2", "3"})}
    )
    best = min(
        sum(min(d[i, a], d[i, b]) for i in range(4))
        for a, b in itertools.combinations(range(4), 2)
    )
    assert pam_cost(d, result) == pytest.approx(best)


def test_pam_cost_non_increasing_over_iterations(planted):
    _, corpus, _ = planted
    vocab = build_vocabulary(corpus, CFG)
    weighted = tfidf(build_counts(corpus, vocab, CFG))
    d = dissimilarity_matrix(weighted)
    costs = [pam_cost(d, pam(d, 4, max_iter=i)) for i in range(1, 6)]
    assert all(a >= b - 1e-9 for a, b in zip(costs, costs[1:]))


def test_pam_recovers_planted_topics(planted):
    _, corpus, labels = planted
    vocab = build_vocabulary(corpus, CFG)
    weighted = tfidf(build_counts(corpus, vocab, CFG))
    d = dissimilarity_matrix(weighted)
    result = pam(d, 3, doc_ids=weighted.doc_ids)
    truth = [labels[doc] for doc in weighted.doc_ids]
    assert adjusted_rand_index(result.labels, truth) == pytest.approx(1.0)


def test_all_algorithms_partition_invariant_to_document_order():
    from facetrank.cluster import LdaConfig, SomConfig, run_algorithm
    from facetrank.synthgen import PlantedSpec, generate

    spec = PlantedSpec(topics=2, experts=4, docs_per_expert=10, doc_length=30, seed=6)
    corpus, _ = generate(spec)
    reordered = Corpus(list(corpus)[::-1])
    partitions = {}
    for source, tag in ((corpus, "fwd"), (reordered, "rev")):
        vocab = build_vocabulary(source, CFG)
        counts = build_counts(source, vocab, CFG)
        weighted = tfidf(counts)
        for algo in ("kmeans", "pam", "agnes", "diana", "lda", "som-km"):
            clustering = run_algorithm(
                algo, 2, 42, counts=counts, weighted=weighted,
                lda_config=LdaConfig(topics=2, iterations=250, burn_in=50),
                som_config=SomConfig(width=3, height=3, epochs=30),
            )
            partitions[(algo, tag)] = clustering.partition()
    for algo in ("kmeans", "pam", "agnes", "diana", "lda", "som-km"):
        assert partitions[(algo, "fwd")] == partitions[(algo, "rev")], algo


def test_all_algorithms_rerun_identical():
    from facetrank.cluster import LdaConfig, SomConfig, run_algorithm
    from facetrank.synthgen import PlantedSpec, generate

    spec = PlantedSpec(topics=2, experts=3, docs_per_expert=8, doc_length=25, seed=9)
    corpus, _ = generate(spec)
    vocab = build_vocabulary(corpus, CFG)
    counts = build_counts(corpus, vocab, CFG)
    weighted = tfidf(counts)
    for algo in ("kmeans", "pam", "agnes", "diana", "lda", "som-km"):
        runs = [
            run_algorithm(
                algo, 2, 7, counts=counts, weighted=weighted,
                lda_config=LdaConfig(topics=2, iterations=40, burn_in=5),
                som_config=SomConfig(width=2, height=2, epochs=20),
            ).labels
            for _ in range(2)
        ]
        assert runs[0] == runs[1], algo
