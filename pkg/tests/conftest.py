import pytest

from facetrank.corpus import Corpus, Document
from facetrank.synthgen import PlantedSpec, generate
from facetrank.textprep import TokenPipelineConfig


def make_doc(doc_id, author, body, group=None, title="", order=None):
    return Document(
        doc_id=doc_id,
        author_id=author,
        group_id=group,
        title=title or f"title {doc_id}",
        body=body,
        order_key=order if order is not None else int(doc_id.strip("d") or 0),
    )


@pytest.fixture
def plain_config():
    return TokenPipelineConfig(stemmer="none")


@pytest.fixture
def tiny_corpus():
    return Corpus(
        [
            make_doc("d0", "alice", "apple banana apple", group="fruit", order=0),
            make_doc("d1", "alice", "banana cherry", group="fruit", order=1),
            make_doc("d2", "bob", "stone iron stone", group="rock", order=2),
            make_doc("d3", "bob", "iron copper", group="rock", order=3),
            make_doc("d4", "carol", "apple iron", group=None, order=4),
        ]
    )


@pytest.fixture(scope="session")
def planted():
    """3 disjoint topics, 10 experts, 20 docs each: the clustering oracle corpus."""
    spec = PlantedSpec(topics=3, experts=10, docs_per_expert=20, doc_length=50, seed=7)
    corpus, labels = generate(spec)
    return spec, corpus, labels
