import pytest

from fieldsim.corpus import TagSet, Triplet, build_lexicon


@pytest.fixture
def tiny_triplets():
    """A handful of English-like verb rows, two cells per lemma."""
    pst = TagSet.parse("V;PST")
    prs = TagSet.parse("V;PRS;3;SG")
    return [
        Triplet("walk", pst, "walked"),
        Triplet("walk", prs, "walks"),
        Triplet("talk", pst, "talked"),
        Triplet("talk", prs, "talks"),
        Triplet("go", pst, "went"),
        Triplet("go", prs, "goes"),
    ]


@pytest.fixture
def tiny_lexicon(tiny_triplets):
    return build_lexicon(tiny_triplets)
