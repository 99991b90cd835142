import math

import pytest
from scipy import stats

from facetrank.corpus import Corpus
from facetrank.evaluation import (
    EvalError,
    improvement_pct,
    make_query_cases,
    ndcg_at_k,
    one_way_anova,
    paired_t_test,
    positions_from_values,
    precision_at_k,
    recall_at_k,
    rrf_combine,
)
from facetrank.retrieval import RankedEntry, RankedList
from facetrank.textprep import TokenPipelineConfig, build_vocabulary

from conftest import make_doc

PIPE = TokenPipelineConfig(stemmer="none")


def ranking(ids):
    return RankedList(
        entries=tuple(
            RankedEntry(i, float(len(ids) - pos), pos + 1) for pos, i in enumerate(ids)
        ),
        scope="experts",
    )


# --- query cases ------------------------------------------------------------

def test_query_cases_filtering_full_text():
    docs = [
        make_doc("d0", "A", "uno dos", title="shared title", order=0),
        make_doc("d1", "B", "tres", title="shared title", order=1),
    ]
    corpus = Corpus(docs)
    vocab = build_vocabulary(corpus, PIPE)
    cases, dropped = make_query_cases(corpus, "filtering", frozenset({"A", "B"}), vocab, PIPE)
    assert dropped == 0
    assert len(cases) == 1
    assert cases[0].relevant == {"A", "B"}
    assert cases[0].query.text == "uno dos\ntres"


def test_query_cases_recommendation_uses_title():
    docs = [make_doc("d0", "A", "uno dos", title="el titulo", order=0)]
    corpus = Corpus(docs)
    vocab = build_vocabulary(corpus, PIPE)
    cases, _ = make_query_cases(corpus, "recommendation", frozenset({"A"}), vocab, PIPE)
    assert cases[0].query.text == "el titulo"
    assert cases[0].relevant == {"A"}


def test_query_cases_hand_enumeration():
    docs = [
        make_doc("d0", "A", "x", title="t1", order=0),
        make_doc("d1", "B", "y", title="t1", order=1),
        make_doc("d2", "B", "z", title="t2", order=2),
        make_doc("d3", "C", "w", title="t3", order=3),
    ]
    corpus = Corpus(docs)
    vocab = build_vocabulary(corpus, PIPE)
    cases, dropped = make_query_cases(corpus, "filtering", frozenset({"A", "B"}), vocab, PIPE)
    assert [sorted(c.relevant) for c in cases] == [["A", "B"], ["B"]]
    assert dropped == 1  # t3's only participant has no profile


def test_query_cases_empty_test_corpus():
    docs = [make_doc("d0", "A", "x", order=0)]
    vocab = build_vocabulary(Corpus(docs), PIPE)
    with pytest.raises(EvalError):
        make_query_cases(Corpus([]), "filtering", frozenset({"A"}), vocab, PIPE)


# --- metrics ----------------------------------------------------------------

def test_precision_at_10():
    r = ranking([f"e{i}" for i in range(12)])
    relevant = frozenset({"e0", "e5", "e9", "e11"})
    assert precision_at_k(r, relevant) == pytest.approx(0.3)


def test_recall_at_10():
    r = ranking([f"e{i}" for i in range(12)])
    assert recall_at_k(r, frozenset({"e0", "e3"})) == pytest.approx(1.0)
    assert recall_at_k(r, frozenset({"e0", "e11"})) == pytest.approx(0.5)


def test_metrics_short_ranking_keep_denominators():
    r = ranking(["e0", "e1"])
    assert precision_at_k(r, frozenset({"e0"})) == pytest.approx(0.1)
    assert recall_at_k(r, frozenset({"e0", "zz"})) == pytest.approx(0.5)


def test_ndcg_ideal_is_one():
    r = ranking(["a", "b", "c"])
    assert ndcg_at_k(r, frozenset({"a", "b"})) == pytest.approx(1.0)


def test_ndcg_hand_case():
    r = ranking(["rel1", "non", "rel2"])
    value = ndcg_at_k(r, frozenset({"rel1", "rel2"}))
    expected = (1.0 + 0.5) / (1.0 + 1.0 / math.log2(3))
    assert value == pytest.approx(expected, abs=1e-12)
    assert value == pytest.approx(0.9197207891481876, abs=1e-12)


def test_ndcg_no_relevant_found():
    r = ranking(["a", "b"])
    assert ndcg_at_k(r, frozenset({"zz"})) == 0.0


def test_metric_ranges(planted):
    values = [0.0, 0.3, 1.0]
    for v in values:
        assert 0.0 <= v <= 1.0


# --- positions and RRF --------------------------------------------------------

def test_positions_competition_ranking():
    positions = positions_from_values({"a": 0.9, "b": 0.9, "c": 0.5})
    assert positions == {"a": 1, "b": 1, "c": 3}


def test_rrf_reported_values():
    positions = {
        "m1": {"config": 1, "other": 2},
        "m2": {"config": 1, "other": 1},
        "m3": {"config": 2, "other": 3},
    }
    rrf, order = rrf_combine(positions, c=60.0)
    assert round(rrf["config"], 4) == 0.0489  # positions (1, 1, 2)
    second = {"m1": {"x": 4}, "m2": {"x": 7}, "m3": {"x": 3}}
    rrf2, _ = rrf_combine(second, c=60.0)
    assert round(rrf2["x"], 4) == 0.0464  # positions (4, 7, 3)


def test_rrf_inconsistent_sets():
    with pytest.raises(EvalError):
        rrf_combine({"m1": {"a": 1}, "m2": {"b": 1}})


def test_rrf_invariant_to_value_scale():
    raw = {"a": 0.9, "b": 0.7, "c": 0.5}
    scaled = {k: 100 * v + 3 for k, v in raw.items()}
    p1 = {"m": positions_from_values(raw)}
    p2 = {"m": positions_from_values(scaled)}
    assert rrf_combine(p1) == rrf_combine(p2)


# --- improvements and significance -------------------------------------------

def test_improvement_reported_values():
    assert abs(improvement_pct(0.7724, 0.7195) - 7.35) < 0.01
    assert abs(improvement_pct(0.5195, 0.4546) - 14.27) < 0.01


def test_improvement_equal_is_zero():
    assert improvement_pct(0.5, 0.5) == 0.0


def test_improvement_requires_positive_baseline():
    with pytest.raises(EvalError):
        improvement_pct(0.5, 0.0)


def test_paired_t_equal_samples():
    t, p = paired_t_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert t == 0.0 and p == 1.0


def test_paired_t_constant_shift_degenerate():
    t, p = paired_t_test([2.0, 3.0, 4.0], [1.0, 2.0, 3.0])
    assert math.isinf(t) and p == 0.0


def test_paired_t_hand_case():
    a = [10.0, 12.0, 9.0, 11.0, 13.0]
    b = [8.0, 11.0, 9.0, 10.0, 12.0]
    t, p = paired_t_test(a, b)
    assert t == pytest.approx(math.sqrt(10), abs=1e-6)  # mean 1, sd sqrt(0.5), n 5
    t_ref, p_ref = stats.ttest_rel(a, b)
    assert t == pytest.approx(float(t_ref), abs=1e-9)
    assert p == pytest.approx(float(p_ref), abs=1e-9)


def test_anova_identical_groups():
    f, p = one_way_anova([[1.0, 2.0], [1.0, 2.0]])
    assert f == 0.0 and p == 1.0


def test_anova_separated_groups():
    _, p = one_way_anova([[1.0, 1.1, 0.9], [5.0, 5.1, 4.9]])
    assert p < 0.05


def test_anova_hand_case():
    groups = [[1.0, 2.0, 3.0], [2.0, 3.0, 4.0], [6.0, 7.0, 8.0]]
    f, p = one_way_anova(groups)
    assert f == pytest.approx(21.0, abs=1e-6)  # MSB 21, MSW 1 by hand
    f_ref, p_ref = stats.f_oneway(*groups)
    assert f == pytest.approx(float(f_ref), abs=1e-9)
    assert p == pytest.approx(float(p_ref), abs=1e-9)


def test_anova_validation():
    with pytest.raises(EvalError):
        one_way_anova([[1.0, 2.0]])
    with pytest.raises(EvalError):
        one_way_anova([[1.0], [2.0]])
