import pytest

from facetrank.corpus import Corpus
from facetrank.stemming import spanish_stem
from facetrank.textprep import (
    TextPrepError,
    TokenPipelineConfig,
    Vocabulary,
    build_vocabulary,
    df_threshold,
    load_stopwords,
    preprocess,
    tokenize,
)

from conftest import make_doc


def test_tokenize_strips_numbers():
    cfg = TokenPipelineConfig(stemmer="none")
    assert tokenize("La Cámara aprueba 3 leyes", cfg) == ["la", "cámara", "aprueba", "leyes"]


def test_tokenize_empty():
    assert tokenize("", TokenPipelineConfig(stemmer="none")) == []


def test_tokenize_splits_on_punctuation():
    cfg = TokenPipelineConfig(stemmer="none")
    assert tokenize("X-ray/beta", cfg) == ["x", "ray", "beta"]


def test_tokenize_keeps_numbers_when_configured():
    cfg = TokenPipelineConfig(stemmer="none", strip_numbers=False)
    assert tokenize("abc 42 x9", cfg) == ["abc", "42", "x9"]


def test_preprocess_removes_stopwords_before_stemming():
    cfg = TokenPipelineConfig(stopwords=frozenset({"la"}), stemmer="spanish")
    assert preprocess("la casa", cfg) == [spanish_stem("casa")]


def test_preprocess_identity_stemmer():
    cfg = TokenPipelineConfig(stopwords=frozenset({"el"}), stemmer="none")
    assert preprocess("el gato negro", cfg) == ["gato", "negro"]


def test_preprocess_spanish_merges_inflections():
    cfg = TokenPipelineConfig(stemmer="spanish")
    assert preprocess("casas", cfg) == preprocess("casa", cfg)


def test_preprocess_unknown_stemmer():
    cfg = TokenPipelineConfig(stemmer="martian")
    with pytest.raises(ValueError, match="martian"):
        preprocess("hola", cfg)


def _corpus_with_df(n_docs, rare_in):
    docs = []
    for i in range(n_docs):
        body = "shared rareterm" if i < rare_in else "shared"
        docs.append(make_doc(f"d{i}", "a", body, order=i))
    return Corpus(docs)


def test_vocabulary_boundary_retained_at_100_docs():
    corpus = _corpus_with_df(100, rare_in=1)
    vocab = build_vocabulary(corpus, TokenPipelineConfig(stemmer="none"))
    assert "rareterm" in vocab  # threshold ceil(0.01 * 100) = 1


def test_vocabulary_boundary_pruned_at_200_docs():
    corpus = _corpus_with_df(200, rare_in=1)
    vocab = build_vocabulary(corpus, TokenPipelineConfig(stemmer="none"))
    assert "rareterm" not in vocab  # 1 < ceil(0.01 * 200) = 2


def test_df_threshold_exact_integer_products():
    assert df_threshold(0.01, 100) == 1
    assert df_threshold(0.01, 200) == 2
    assert df_threshold(0.01, 250) == 3  # ceil(2.5)
    assert df_threshold(0.0, 50) == 1


def test_vocabulary_counts_presence_not_occurrences():
    docs = [
        make_doc("d0", "a", "term term term", order=0),
        make_doc("d1", "a", "other", order=1),
    ]
    vocab = build_vocabulary(Corpus(docs), TokenPipelineConfig(stemmer="none"))
    assert vocab.df[vocab.index["term"]] == 1


def test_vocabulary_order_independent(tiny_corpus):
    cfg = TokenPipelineConfig(stemmer="none")
    forward = build_vocabulary(tiny_corpus, cfg)
    reversed_corpus = Corpus(list(tiny_corpus)[::-1])
    backward = build_vocabulary(reversed_corpus, cfg)
    assert forward.terms == backward.terms
    assert forward.df == backward.df


def test_vocabulary_index_round_trip(tiny_corpus):
    vocab = build_vocabulary(tiny_corpus, TokenPipelineConfig(stemmer="none"))
    for i, term in enumerate(vocab.terms):
        assert vocab.index[term] == i


def test_pruning_monotone(tiny_corpus):
    low = build_vocabulary(tiny_corpus, TokenPipelineConfig(stemmer="none", min_doc_fraction=0.0))
    high = build_vocabulary(tiny_corpus, TokenPipelineConfig(stemmer="none", min_doc_fraction=0.3))
    assert set(high.terms) <= set(low.terms)


def test_empty_vocabulary_raises():
    docs = [make_doc(f"d{i}", "a", "w" + "x" * i, order=i) for i in range(100)]
    cfg = TokenPipelineConfig(stemmer="none", min_doc_fraction=0.05)
    with pytest.raises(TextPrepError, match="empty"):
        build_vocabulary(Corpus(docs), cfg)


def test_load_stopwords(tmp_path):
    path = tmp_path / "stop.txt"
    path.write_text("la\nel\n\n  de \n", encoding="utf-8")
    assert load_stopwords(path) == {"la", "el", "de"}
