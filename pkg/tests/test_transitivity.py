import json
import random
import threading
from fractions import Fraction as Q

import pytest

from ordfree.freegroup import Gen, Word
from ordfree.order import Interval
from ordfree.plmap import FinitePL, Identity
from ordfree.transitivity import (
    OrderedTuple,
    TransitiveFreeFamily,
    TupleError,
    TupleIndexRegistry,
    bounding_interval,
    extend_to_n,
    in_reserved,
    stretch_map,
    transitive_generator,
    transitive_word_witness,
)


def T(*xs):
    return OrderedTuple(tuple(Q(x) for x in xs))


def test_stretch_map_example():
    m = stretch_map(T(0, 1), T(5, 9), Interval.open(-1, 10))
    assert isinstance(m, FinitePL)
    assert m.points == ((-1, -1), (0, 5), (1, 9), (10, 10))
    assert m(Q(1, 2)) == 7
    assert isinstance(stretch_map(T(0, 1), T(0, 1), Interval.open(-1, 2)), Identity)
    with pytest.raises(TupleError):
        stretch_map(T(0, 1), T(5, 9), Interval.open(0, 1))
    with pytest.raises(TupleError):
        stretch_map(T(0, 1), T(5, 9, 11), Interval.open(-1, 12))


def test_ordered_tuple_validation():
    with pytest.raises(TupleError):
        T(1, 0)
    assert str(OrderedTuple.parse("0, 3/2")) == "0/1,3/2"


def test_generator_examples():
    fam = TransitiveFreeFamily()
    a, g = transitive_generator(fam, T(0, 1), T(5, 9))
    assert a == 0 and g(Q(0)) == 5 and g(Q(1)) == 9
    b, g2 = transitive_generator(fam, T(0, 1), T(5, 9))
    assert b == 0 and g2 == g
    tail = fam.generator(7)
    assert tail(Q(1, 4)) != Q(1, 4)
    assert tail(Q(3, 4)) == Q(3, 4)
    with pytest.raises(TupleError):
        transitive_generator(fam, T(Q(1, 4), 1), T(5, 9))


def test_extend_to_n():
    fam = TransitiveFreeFamily()
    with pytest.raises(TupleError):
        transitive_generator(fam, T(0, 1, 2), T(3, 4, 5))
    extend_to_n(fam, 5)
    src, dst = T(-3, -1, 0, 2, 7), T(1, 2, 3, 4, 5)
    _, g = transitive_generator(fam, src, dst)
    assert [g(x) for x in src.points] == list(dst.points)
    with pytest.raises(TupleError):
        fam.registry.index(T(0, 1), T(1, 2, 3))
    with pytest.raises(TupleError):
        extend_to_n(fam, 1)


def test_random_tuples_order_preserving_and_off_support():
    rng = random.Random(3)
    fam = extend_to_n(TransitiveFreeFamily(), 5)

    def pick():
        pts = set()
        while len(pts) < rng.randint(2, 5):
            x = Q(rng.randrange(-160, 160), rng.randrange(1, 9))
            if not in_reserved(x):
                pts.add(x)
        return sorted(pts)

    for _ in range(100):
        s = pick()
        d = pick()
        n = min(len(s), len(d))
        src, dst = OrderedTuple(tuple(s[:n])), OrderedTuple(tuple(d[:n]))
        _, g = transitive_generator(fam, src, dst)
        assert [g(x) for x in src.points] == list(dst.points)
        lam = bounding_interval(src.points + dst.points)
        xs = sorted(lam.lower + (lam.upper - lam.lower) * Q(k, 101) for k in range(1, 101))
        ys = [g(x) for x in xs]
        assert ys == sorted(ys) and len(set(ys)) == len(ys)
        for k in range(3):
            out = lam.upper + k + Q(3, 4)
            assert not in_reserved(out) and g(out) == out


def test_registry_persistence_and_replay():
    reg = TupleIndexRegistry(max_n=3)
    pairs = [(T(0, 1), T(2, 3)), (T(1, 2), T(0, 5)), (T(0, 1), T(2, 3)), (T(0, 1, 2), T(3, 4, 5))]
    got = [reg.index(s, d) for s, d in pairs]
    assert got == [0, 1, 0, 2]
    text = reg.dumps()
    again = TupleIndexRegistry.from_json(json.loads(text))
    assert again.dumps() == text
    assert again.index(T(1, 2), T(0, 5)) == 1
    bad = json.loads(text)
    bad["assignments"][1]["index"] = 0
    with pytest.raises(TupleError):
        TupleIndexRegistry.from_json(bad)


def test_registry_threadsafe():
    reg = TupleIndexRegistry(max_n=2)
    pairs = [(T(i, i + 1), T(i + 2, i + 3)) for i in range(50)]

    def work():
        for s, d in pairs:
            reg.index(s, d)

    threads = [threading.Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(reg.assignments.values()) == list(range(50))


def test_word_witness_in_reserved_interval():
    fam = TransitiveFreeFamily()
    a, _ = transitive_generator(fam, T(0, 1), T(5, 9))
    b, _ = transitive_generator(fam, T(2, 3), T(-7, 6))
    c = 12
    alphas = {Gen("a"): a, Gen("b"): b, Gen("c"): c}
    for text in ("a b a^-1 b^-1", "a c^-1", "c a b c^-1 b^-1"):
        x, y = transitive_word_witness(fam, Word.parse(text), alphas)
        assert x != y and in_reserved(x)
