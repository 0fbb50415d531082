import itertools

import pytest
from hypothesis import given, strategies as st

from ordfree.adfam import ADSet, Branch, BranchError, code, decode, enumerate_ad, intersection_size, member

bits = st.text(alphabet="01", max_size=5)
branches = st.builds(lambda s, t: Branch.parse(f"{s}({t})"), bits, st.text(alphabet="01", min_size=1, max_size=3))


def test_code():
    assert code("0") == 2 and code("1") == 3 and code("010") == 10
    assert decode(10) == "010" and decode(0) is None and decode(1) is None


def test_enumerate_examples():
    assert enumerate_ad(Branch.parse("(0)"), 0) == 2
    assert enumerate_ad(Branch.parse("(1)"), 0) == 3
    assert enumerate_ad(Branch.parse("(01)"), 2) == 10


def test_member_examples():
    zero = Branch.parse("(0)")
    assert member(zero, 2)
    assert not member(zero, 3)
    assert not member(Branch.parse("(10)"), 0)


def test_intersection_examples():
    assert intersection_size(Branch.parse("(0)"), Branch.parse("(1)")) == 0
    assert intersection_size(Branch.parse("0(1)"), Branch.parse("0(0)")) == 1
    assert intersection_size(Branch.parse("0101(0)"), Branch.parse("0101(1)")) == 4
    with pytest.raises(BranchError):
        intersection_size(Branch.parse("(01)"), Branch.parse("01(01)"))


def test_canonical_form():
    assert Branch.parse("0101(01)") == Branch.parse("(01)")
    assert str(Branch.parse("110(10)")) == "1(10)"
    assert str(Branch.parse("(0000)")) == "(0)"
    for bad in ("01", "(2)", "0()"):
        with pytest.raises(BranchError):
            Branch.parse(bad)


@given(branches, branches)
def test_almost_disjoint_two_ways(a, b):
    if a == b:
        return
    n = intersection_size(a, b)
    bound = code(a.prefix(n + 6))
    common = set(ADSet(a).elements_below(bound)) & set(ADSet(b).elements_below(bound))
    assert len(common) == n


@given(branches)
def test_enumerator_coherent(a):
    els = ADSet(a).elements_below(2 ** 9)
    assert els == sorted(els)
    assert els == [ADSet(a).enumerator(n) for n in range(len(els))]
    assert all(k in ADSet(a) for k in els)


def test_finite_intersection_bound():
    bs = [Branch.parse(s) for s in ("(0)", "0(1)", "01(0)", "011(0)")]
    top = max(intersection_size(x, y) for x, y in itertools.combinations(bs, 2))
    sets = [set(ADSet(b).elements_below(2 ** 12)) for b in bs]
    for x, y in itertools.combinations(sets, 2):
        assert len(x & y) <= top
