"""Acceptance criteria 1-9.

Each check returns ``(passed, detail)``; the pytest wrappers record a
one-line verdict (shown in the terminal summary) and assert.  Run this
file directly to print the nine lines without pytest.
"""

import functools
import itertools
import json
import random
import time
from fractions import Fraction

import pytest

from ordfree.adfam import Branch, intersection_size
from ordfree.builtin import dirprod_corpus, example11_table, mutated_table, shared_coordinate_instance
from ordfree.cameron import (
    agreement_blocks,
    build_block_family,
    cameron_generator,
    cameron_word_witness,
    pathological_family,
)
from ordfree.dirprod import (
    FinSupportElement,
    commutator,
    invert,
    multiply,
    pigeonhole_probe,
    relation_search,
    support,
    verify_triple,
)
from ordfree.freegroup import (
    Gen,
    Word,
    eval_word,
    example_action,
    example_f,
    example_g,
    nontriviality_witness,
    random_reduced_word,
    verify_witness,
)
from ordfree.order import BlockSet, Frame, Interval, Residue
from ordfree.pingpong import certify
from ordfree.transitivity import (
    OrderedTuple,
    TransitiveFreeFamily,
    TupleIndexRegistry,
    extend_to_n,
    in_reserved,
    transitive_generator,
)

SEED = 20240611
F, G = Gen("f"), Gen("g")


def _rng(tag: int) -> random.Random:
    return random.Random(SEED * 100 + tag)


def _rational(rng, span=40, den=12) -> Fraction:
    return Fraction(rng.randrange(-span * den, span * den + 1), rng.randrange(1, den + 1))


@functools.lru_cache(maxsize=None)
def check_1():
    t0 = time.perf_counter()
    f, g = example_f(), example_g()
    want = {1: Fraction(13, 4), 2: Fraction(7, 2), 3: Fraction(15, 4), 4: Fraction(4)}
    values_ok = all(f(Fraction(x)) == y for x, y in want.items())
    rng = _rng(1)
    samples = [_rational(rng) for _ in range(20)]
    conj_ok = all(g(x) == f(x - 2) + 2 for x in samples)
    dt = time.perf_counter() - t0
    ok = values_ok and conj_ok and dt < 1.0
    return ok, f"f(1..4) exact={values_ok}, g=f(x-2)+2 on 20 samples={conj_ok}, {dt:.3f}s (<1s)"


@functools.lru_cache(maxsize=None)
def check_2():
    t0 = time.perf_counter()
    good = certify(example11_table())
    bad_table = mutated_table()
    bad = certify(bad_table)
    dt = time.perf_counter() - t0
    ce = bad.counterexample or {}
    ce_ok = False
    if ce:
        # independent check: the preimage lies outside A_f and its image outside B_f
        pair = bad_table.pairs[0]
        x, y = Fraction(ce["preimage"]), Fraction(ce["point"])
        f = bad_table.action[pair.gen]
        ce_ok = f(x) == y and x not in pair.A and y not in pair.B
    ok = good.certified and not bad.certified and ce_ok and dt < 1.0
    return ok, f"example table certified={good.certified}, mutated refuted={not bad.certified} at point {ce.get('point')} (verified={ce_ok}), {dt:.3f}s (<1s)"


@functools.lru_cache(maxsize=None)
def check_3():
    t0 = time.perf_counter()
    act = example_action()
    rng = _rng(3)
    found = false_identities = 0
    for _ in range(1000):
        w = random_reduced_word(rng, [F, G], 16)
        wit = nontriviality_witness(act, w)
        if wit is None:
            continue
        if verify_witness(act, wit) and eval_word(act, w, wit.point) != wit.point:
            found += 1
        else:
            false_identities += 1
    dt = time.perf_counter() - t0
    ok = found == 1000 and false_identities == 0 and dt < 60.0
    return ok, f"{found}/1000 words with verified moved points, {false_identities} false identities, {dt:.2f}s (<60s)"


@functools.lru_cache(maxsize=None)
def check_4():
    act = example_action()
    rng = _rng(4)
    bad = 0
    for _ in range(200):
        w = random_reduced_word(rng, [F, G], 12, min_len=2)
        cut = rng.randrange(1, len(w))
        u, v = Word(w.letters[:cut]), Word(w.letters[cut:])
        x = _rational(rng)
        if eval_word(act, u * v, x) != eval_word(act, u, eval_word(act, v, x)):
            bad += 1
        if eval_word(act, w * w.inverse(), x) != x:
            bad += 1
    return bad == 0, f"200 (word, point) pairs, {bad} exact mismatches"


BRANCHES = ["(0)", "(1)", "0(1)", "01(0)", "0101(0)", "0101(1)", "(01)", "110(10)"]


@functools.lru_cache(maxsize=None)
def check_5():
    t0 = time.perf_counter()
    fam = build_block_family(Interval.closed_open(0, 1), Frame.squash(0, 1, "naturals"))
    brs = [Branch.parse(b) for b in BRANCHES]
    gens = [cameron_generator(fam, b) for b in brs]
    count_bad = 0
    for i, j in itertools.combinations(range(len(gens)), 2):
        want = intersection_size(brs[i], brs[j])
        if len(agreement_blocks(gens[i], gens[j], 64)) != want:
            count_bad += 1
    rng = _rng(5)
    letters = [Gen(c) for c in "abcd"]
    ok_words = 0
    block_bad = 0
    for _ in range(200):
        k = rng.randint(1, 4)
        picked = rng.sample(range(len(gens)), k)
        bind = {letters[n]: gens[p] for n, p in enumerate(picked)}
        w = random_reduced_word(rng, letters[:k], 8)
        wit = cameron_word_witness(w, bind)
        if wit is None:
            continue
        used = [bind[g].branch for g in w.generators()]
        need = max((intersection_size(a, b) for a, b in itertools.combinations(used, 2)), default=0)
        if wit.block < need:
            block_bad += 1
            continue
        ok_words += 1
    dt = time.perf_counter() - t0
    ok = count_bad == 0 and ok_words == 200 and block_bad == 0 and dt < 120.0
    return ok, (
        f"28 branch pairs, {count_bad} agreement-count mismatches; {ok_words}/200 words witnessed, "
        f"{block_bad} below max prefix, {dt:.2f}s (<120s)"
    )


@functools.lru_cache(maxsize=None)
def check_6():
    coll = BlockSet(Frame.unit(), Residue(2, frozenset({0})))
    fams = [pathological_family(coll, rank=3), pathological_family(coll, branches=["(0)", "(1)", "01(0)"])]
    missing = 0
    total = 0
    for fam in fams:
        for g in fam.gens:
            for k in range(-25, 26):
                total += 1
                if fam.moves_in(g, 2 * k) is None:
                    missing += 1
    ok = missing == 0 and all(f.pathological for f in fams)
    return ok, f"{total - missing}/{total} (generator, interval) probes moved exactly; 6 generators x 51 intervals"


def _tuple(rng, n=5) -> OrderedTuple:
    pts = set()
    while len(pts) < n:
        x = _rational(rng, span=20, den=8)
        if not in_reserved(x):
            pts.add(x)
    return OrderedTuple(tuple(sorted(pts)))


def _replay(queries):
    reg = TupleIndexRegistry(max_n=5)
    for s, d in queries:
        reg.index(s, d)
    return reg.dumps()


@functools.lru_cache(maxsize=None)
def check_7():
    rng = _rng(7)
    fam = extend_to_n(TransitiveFreeFamily(), 5)
    map_bad = 0
    for _ in range(100):
        s, d = _tuple(rng), _tuple(rng)
        _, gmap = transitive_generator(fam, s, d)
        if [gmap(p) for p in s.points] != list(d.points):
            map_bad += 1
    pool = [(_tuple(rng), _tuple(rng)) for _ in range(300)]
    queries = [pool[rng.randrange(len(pool))] for _ in range(1000)]
    reg = TupleIndexRegistry(max_n=5)
    seen = {}
    inj_bad = 0
    for s, d in queries:
        a = reg.index(s, d)
        key = (s.points, d.points)
        if seen.setdefault(key, a) != a:
            inj_bad += 1
    if len(set(seen.values())) != len(seen):
        inj_bad += 1
    first, second = _replay(queries), _replay(queries)
    reloaded = TupleIndexRegistry.from_json(json.loads(first)).dumps()
    replay_ok = first == second == reloaded == reg.dumps()
    ok = map_bad == 0 and inj_bad == 0 and replay_ok
    return ok, f"100 tuple pairs, {map_bad} mismatches; 1000 queries over {len(seen)} pairs, {inj_bad} injectivity faults; replay byte-exact={replay_ok}"


def _element(rng) -> FinSupportElement:
    coords = {}
    for a in range(6):
        if rng.random() < 0.4:
            deg = 3 + a % 2
            p = list(range(deg))
            rng.shuffle(p)
            coords[a] = p
    return FinSupportElement(coords)


@functools.lru_cache(maxsize=None)
def check_8():
    rng = _rng(8)
    law_bad = 0
    for _ in range(10000):
        g, h = _element(rng), _element(rng)
        sg, sh = set(support(g)), set(support(h))
        if set(support(invert(g))) != sg:
            law_bad += 1
        if not set(support(multiply(g, h))) <= sg | sh:
            law_bad += 1
        if not sg & sh and not commutator(g, h).is_identity():
            law_bad += 1
        if not multiply(g, invert(g)).is_identity():
            law_bad += 1
    corpus = dirprod_corpus()
    rel_missing = 0
    longest = 0
    for sub in itertools.combinations(corpus, 3):
        rel = relation_search(list(sub), 8)
        if rel is None:
            rel_missing += 1
        else:
            longest = max(longest, len(rel.word))
    inst = shared_coordinate_instance()
    triple = pigeonhole_probe(inst)
    triple_ok = triple is not None and verify_triple(inst, triple)
    ok = law_bad == 0 and rel_missing == 0 and triple_ok
    return ok, (
        f"10000 pairs, {law_bad} support-law failures; relations for {20 - rel_missing}/20 corpus triples "
        f"(longest {longest}, limit 8); pigeonhole triple verified={triple_ok}"
    )


STATEMENT = (
    "cardinality conclusions (rank 2^aleph_0 families, aleph_omega towers, GCH-conditional bounds) "
    "are not desk-reproducible; substituted evidence is the witness and oracle suites 3, 5, 6, 8"
)


def check_9():
    parts = {n: fn()[0] for n, fn in ((3, check_3), (5, check_5), (6, check_6), (8, check_8))}
    ok = all(parts.values())
    return ok, STATEMENT + "; " + ", ".join(f"{n}={'pass' if v else 'FAIL'}" for n, v in parts.items())


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9]


def _line(n, ok, detail):
    return f"criterion {n}: {'PASS' if ok else 'FAIL'}: {detail}"


@pytest.mark.parametrize("n", range(1, 10))
def test_criterion(n, acceptance_line):
    ok, detail = CHECKS[n - 1]()
    line = _line(n, ok, detail)
    print(line)
    acceptance_line(line)
    assert ok, line


if __name__ == "__main__":
    for n, fn in enumerate(CHECKS, 1):
        print(_line(n, *fn()))
