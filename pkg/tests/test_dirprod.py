import itertools

import pytest
from hypothesis import given, strategies as st

from ordfree.builtin import dirprod_corpus, shared_coordinate_instance
from ordfree.dirprod import (
    DegreeMismatch,
    DirProdError,
    FinSupportElement,
    commutator,
    evaluate,
    identity,
    invert,
    multiply,
    pigeonhole_probe,
    relation_search,
    support,
    verify_triple,
)
from ordfree.freegroup import Word

SIGMA, TAU = (1, 0, 2), (1, 2, 0)


@st.composite
def elements(draw):
    coords = {}
    for a in range(5):
        if draw(st.booleans()):
            coords[a] = draw(st.permutations(range(3 + a % 2)))
    return FinSupportElement(coords)


def test_commutator_examples():
    g1, g2 = FinSupportElement({0: SIGMA}), FinSupportElement({1: TAU})
    assert commutator(g1, g2).is_identity()
    assert multiply(g1, invert(g1)).is_identity()
    assert commutator(g1, g1).is_identity()


def test_support_examples():
    assert support(FinSupportElement({0: SIGMA, 1: (0, 1, 2), 2: TAU})) == [0, 2]
    assert support(identity()) == []
    g, h = FinSupportElement({0: SIGMA}), FinSupportElement({3: TAU})
    assert support(multiply(g, h)) == [0, 3]


def test_validation():
    with pytest.raises(DirProdError):
        FinSupportElement({0: (0, 0, 1)})
    with pytest.raises(DegreeMismatch):
        multiply(FinSupportElement({0: SIGMA}), FinSupportElement({0: (1, 0)}))


@given(elements(), elements())
def test_support_laws(g, h):
    sg, sh = set(support(g)), set(support(h))
    assert set(support(invert(g))) == sg
    assert set(support(multiply(g, h))) <= sg | sh
    if not sg & sh:
        assert commutator(g, h).is_identity()


@given(elements(), elements(), elements())
def test_associative(a, b, c):
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


def test_relation_examples():
    c5 = (1, 2, 3, 4, 0)
    rel = relation_search([FinSupportElement({0: c5}), FinSupportElement({1: c5})], 8)
    assert str(rel.word) == "a b a^-1 b^-1"
    assert str(relation_search([identity()], 3).word) == "a"
    assert relation_search([FinSupportElement({0: c5})], 3) is None
    with pytest.raises(DirProdError):
        relation_search([], 4)


def test_relation_corpus():
    corpus = dirprod_corpus()
    for sub in itertools.combinations(corpus, 3):
        rel = relation_search(list(sub), 8)
        assert rel is not None and len(rel.word) <= 8
        assert evaluate(rel.word, dict(rel.generators)).is_identity()


def test_relation_shortest_first():
    # transposition: a a is the first relation in length-lex order
    rel = relation_search([FinSupportElement({0: SIGMA})], 6)
    assert rel.word == Word.parse("a a")


def test_pigeonhole_examples():
    inst = shared_coordinate_instance()
    r = pigeonhole_probe(inst)
    assert r is not None and verify_triple(inst, r) and not r.fallback
    assert r.pattern[0] == (0, (1, 2, 0))
    disjoint = [FinSupportElement({k: SIGMA}) for k in range(3)]
    r = pigeonhole_probe(disjoint)
    assert verify_triple(disjoint, r)
    same = [FinSupportElement({0: TAU})] * 3
    assert verify_triple(same, pigeonhole_probe(same))
    with pytest.raises(DirProdError):
        pigeonhole_probe(disjoint[:2])


def test_json_roundtrip():
    g = FinSupportElement({0: (1, 0, 2), 4: TAU})
    assert g.to_json() == {"coords": {"0": [1, 0, 2], "4": [1, 2, 0]}}
    assert FinSupportElement.from_json(g.to_json()) == g
