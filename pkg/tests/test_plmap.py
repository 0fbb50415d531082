from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from ordfree.freegroup import EXAMPLE_F_PATTERN, example_f, example_g
from ordfree.order import BlockSet, Frame, Interval, residue_class
from ordfree.plmap import (
    Affine,
    FinitePL,
    Identity,
    MapError,
    PatchError,
    Periodic,
    descriptor_from_json,
    disjoint_patch,
    eval_inverse,
    eval_map,
    finite_pl_equal,
    image_of_interval,
    piecewise_patch,
    restrict_extend,
    support_probe,
)

rationals = st.fractions(min_value=-40, max_value=40, max_denominator=60)


def test_eval_examples():
    f, g = example_f(), example_g()
    assert eval_map(f, Q(1)) == Q(13, 4)
    assert eval_map(f, Q(1, 2)) == Q(13, 8)
    assert eval_map(g, Q(5, 2)) == Q(29, 8)
    assert eval_map(Identity(), Q(7, 3)) == Q(7, 3)


def test_inverse_examples():
    f = example_f()
    assert eval_inverse(f, Q(13, 4)) == 1
    assert eval_inverse(f, Q(13, 8)) == Q(1, 2)
    assert eval_inverse(Identity(), Q(0)) == 0


def test_image_of_interval():
    f = example_f()
    assert image_of_interval(f, Interval.closed_open(0, 1)) == Interval.closed_open(0, Q(13, 4))
    assert image_of_interval(f, Interval.closed_open(3, 4)) == Interval.closed_open(Q(15, 4), 4)
    assert image_of_interval(Identity(), Interval.closed_open(2, 3)) == Interval.closed_open(2, 3)


@given(rationals)
def test_inverse_roundtrip(x):
    for d in (example_f(), example_g()):
        assert d.inverse_at(d(x)) == x
        assert d(d.inverse_at(x)) == x


@given(rationals, rationals)
def test_monotone(x, y):
    f = example_f()
    if x < y:
        assert f(x) < f(y)


def test_piecewise_patch_periodic():
    s1 = (Interval.closed(0, 1), Affine.between(Interval.closed(0, 1), Interval.closed(0, 3)))
    s2 = (Interval.closed(1, 4), Affine.between(Interval.closed(1, 4), Interval.closed(3, 4)))
    m = piecewise_patch([s1, s2], Interval.closed(0, 4), period=Q(4))
    assert m(Q(1)) == 3 and m(Q(5)) == 7 and m(Q(-3)) == -1
    assert m(Q(1, 2)) == Q(3, 2)


def test_piecewise_patch_identity_and_errors():
    m = piecewise_patch([(Interval.closed(0, 2), Identity())], Interval.closed(0, 2))
    assert m(Q(1)) == 1 and m(Q(9)) == 9
    s1 = (Interval.closed(0, 1), Affine.between(Interval.closed(0, 1), Interval.closed(0, 2)))
    s2 = (Interval.closed(1, 4), Affine.between(Interval.closed(1, 4), Interval.closed(3, 4)))
    with pytest.raises(PatchError):
        piecewise_patch([s1, s2], Interval.closed(0, 4))


def test_disjoint_patch():
    a = FinitePL(((Q(0), Q(0)), (Q(1, 2), Q(3, 4)), (Q(1), Q(1))))
    b = FinitePL(((Q(2), Q(2)), (Q(5, 2), Q(9, 4)), (Q(3), Q(3))))
    m = disjoint_patch([a, b])
    for x in (Q(1, 4), Q(2, 3), Q(5, 2), Q(11, 4), Q(7)):
        assert m(x) == a(b(x))
    assert isinstance(disjoint_patch([]), Identity)
    with pytest.raises(PatchError):
        disjoint_patch([a, FinitePL(((Q(0), Q(0)), (Q(1, 3), Q(1, 2)), (Q(1), Q(1))))])


def test_support_probe_example_f():
    rep = support_probe(example_f(), Interval.closed(0, 8))
    assert rep.exact
    assert sorted(rep.fixed_points_found) == [0, 4, 8]
    assert [(iv.lower, iv.upper) for iv in rep.moved_subintervals] == [(0, 4), (4, 8)]
    assert support_probe(Identity(), Interval.closed(0, 1)).moved_subintervals == []


def test_restrict_extend():
    f = example_f()
    r = restrict_extend(f, Interval.open(0, 4))
    assert support_probe(r, Interval.closed(5, 6)).moved_subintervals == []
    assert r(Q(1)) == Q(13, 4)
    with pytest.raises(MapError):
        restrict_extend(f, Interval.open(0, 3))


def test_finite_pl_equal():
    pat = EXAMPLE_F_PATTERN
    extra = FinitePL(tuple(sorted(pat.points + ((Q(1, 2), Q(13, 8)),))))
    assert finite_pl_equal(pat, extra)
    g_pat = FinitePL(tuple((x + 2, y + 2) for x, y in pat.points))
    assert not finite_pl_equal(pat, g_pat)
    assert finite_pl_equal(Identity(), FinitePL(()))


def test_finite_pl_rejects_decreasing():
    with pytest.raises(MapError):
        FinitePL(((Q(0), Q(0)), (Q(1), Q(-1)), (Q(2), Q(2))))


def test_lazy_block_on_squash_frame():
    from ordfree.freegroup import rank2_interval_basis

    fr = Frame.squash(0, 1, "integers")
    f, g = rank2_interval_basis(Interval.open(0, 1), fr)
    assert f(fr.point(1)) == fr.point(3)
    assert f(Q(2)) == 2 and f(Q(0)) == 0
    a_f = BlockSet(fr, residue_class(4, 0))
    x = fr.point(5) + (fr.point(6) - fr.point(5)) / 3
    assert f(x) in BlockSet(fr, residue_class(4, 3)) or x in a_f


def test_json_roundtrip():
    for d in (example_f(), example_g(), Identity(), Affine(Q(2), Q(-1, 3)), EXAMPLE_F_PATTERN, Periodic(Q(4), EXAMPLE_F_PATTERN)):
        assert descriptor_from_json(d.to_json()) == d
