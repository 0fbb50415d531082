"""Tuple-to-tuple generators that also form a free family.

Each registered pair of increasing n-tuples gets a fresh index alpha.
Generator alpha acts as a stretch map on a bounded interval Lam around
the tuples and, on every reserved interval (k, k + 1/2) outside Lam, as
the alpha-th basis element of that interval's free family.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cameron import IntervalBasisRule, basis_map, interval_action, interval_windows, BASIS
from .freegroup import Action, Budget, Gen, Word, WordError, eval_word, nontriviality_witness, reduce, substitute
from .order import BlockSet, Frame, Interval, Residue, format_rational, parse_rational
from .plmap import FinitePL, Identity, LazyBlock, MapDescriptor, disjoint_patch


class TupleError(ValueError):
    pass


@dataclass(frozen=True)
class OrderedTuple:
    points: Tuple[Fraction, ...]

    def __post_init__(self):
        pts = tuple(parse_rational(p) for p in self.points)
        if not pts:
            raise TupleError("tuples must be nonempty")
        if any(a >= b for a, b in zip(pts, pts[1:])):
            raise TupleError("tuple points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def parse(cls, text: str) -> "OrderedTuple":
        return cls(tuple(parse_rational(t) for t in text.split(",") if t.strip()))

    def __len__(self) -> int:
        return len(self.points)

    def __str__(self) -> str:
        return ",".join(format_rational(p) for p in self.points)


def stretch_map(src: OrderedTuple, dst: OrderedTuple, lam: Interval) -> MapDescriptor:
    """PL map sending src to dst coordinatewise, identity outside bounded lam."""
    if len(src) != len(dst):
        raise TupleError("tuples have different lengths")
    if not lam.bounded:
        raise TupleError("the stretch interval must be bounded")
    for p in src.points + dst.points:
        if not (lam.lower < p < lam.upper):
            raise TupleError(f"point {format_rational(p)} is not strictly inside {lam}")
    pts = [(lam.lower, lam.lower)] + list(zip(src.points, dst.points)) + [(lam.upper, lam.upper)]
    m = FinitePL(tuple(pts)).canonical()
    return m if m.points else Identity()


# reserved intervals (k, k + 1/2): even blocks of the half-step frame
RESERVED_FRAME = Frame.unit(origin=0, step=Fraction(1, 2))


def in_reserved(x: Fraction) -> bool:
    frac = x - math.floor(x)
    return 0 < frac < Fraction(1, 2)


def bounding_interval(points: Sequence[Fraction]) -> Interval:
    """(floor(min) - 1, ceil(max) + 1): integer ends, so reserved intervals are inside or outside."""
    return Interval.open(math.floor(min(points)) - 1, math.ceil(max(points)) + 1)


@dataclass
class TupleIndexRegistry:
    """Injective, replay-deterministic map (from, to) -> generator index."""

    max_n: int = 2
    next_index: int = 0
    assignments: Dict[Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]], int] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        if self.max_n < 2:
            raise TupleError("max_n must be at least 2")

    def index(self, src: OrderedTuple, dst: OrderedTuple) -> int:
        if len(src) != len(dst):
            raise TupleError("mixed-length query")
        if len(src) > self.max_n:
            raise TupleError(f"tuples longer than {self.max_n}; extend the registry first")
        key = (src.points, dst.points)
        with self._lock:
            if key not in self.assignments:
                self.assignments[key] = self.next_index
                self.next_index += 1
            return self.assignments[key]

    def lookup(self, alpha: int) -> Optional[Tuple[OrderedTuple, OrderedTuple]]:
        for (s, d), k in self.assignments.items():
            if k == alpha:
                return OrderedTuple(s), OrderedTuple(d)
        return None

    def to_json(self) -> dict:
        items = sorted(self.assignments.items(), key=lambda kv: kv[1])
        return {
            "max_n": self.max_n,
            "next_index": self.next_index,
            "assignments": [
                {"from": [format_rational(p) for p in s], "to": [format_rational(p) for p in d], "index": k}
                for (s, d), k in items
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, obj: dict) -> "TupleIndexRegistry":
        reg = cls(int(obj.get("max_n", 2)), int(obj["next_index"]))
        for a in obj["assignments"]:
            key = (tuple(parse_rational(p) for p in a["from"]), tuple(parse_rational(p) for p in a["to"]))
            reg.assignments[key] = int(a["index"])
        if len(set(reg.assignments.values())) != len(reg.assignments):
            raise TupleError("registry file is not injective")
        return reg


@dataclass
class TransitiveFreeFamily:
    registry: TupleIndexRegistry = field(default_factory=TupleIndexRegistry)

    @property
    def reserved(self) -> BlockSet:
        return BlockSet(RESERVED_FRAME, Residue(2, frozenset({0})))

    def tail(self, alpha: int, lam: Optional[Interval] = None) -> LazyBlock:
        """Basis element alpha on every reserved interval outside lam."""
        excluded = frozenset()
        if lam is not None:
            lo, hi = int(lam.lower), int(lam.upper)
            excluded = frozenset(2 * k for k in range(lo, hi))
        sel = Residue(2, frozenset({0}), excluded)
        return LazyBlock(RESERVED_FRAME, IntervalBasisRule(RESERVED_FRAME, alpha), sel)

    def generator(self, alpha: int) -> MapDescriptor:
        """g_alpha; unregistered indices get the tail only."""
        hit = self.registry.lookup(alpha)
        if hit is None:
            return self.tail(alpha)
        return self._build(alpha, *hit)

    def _build(self, alpha: int, src: OrderedTuple, dst: OrderedTuple) -> MapDescriptor:
        lam = bounding_interval(src.points + dst.points)
        return disjoint_patch([stretch_map(src, dst, lam), self.tail(alpha, lam)])

    def lam_of(self, alpha: int) -> Optional[Interval]:
        hit = self.registry.lookup(alpha)
        if hit is None:
            return None
        return bounding_interval(hit[0].points + hit[1].points)


def transitive_generator(fam: TransitiveFreeFamily, src: OrderedTuple, dst: OrderedTuple) -> Tuple[int, MapDescriptor]:
    for p in src.points + dst.points:
        if in_reserved(p):
            raise TupleError(f"point {format_rational(p)} lies in a reserved interval")
    alpha = fam.registry.index(src, dst)
    return alpha, fam._build(alpha, src, dst)


def extend_to_n(fam: TransitiveFreeFamily, n: int) -> TransitiveFreeFamily:
    if n < 2:
        raise TupleError("n must be at least 2")
    fam.registry.max_n = max(fam.registry.max_n, n)
    return fam


def transitive_word_witness(
    fam: TransitiveFreeFamily,
    word: Word,
    alphas: Dict[Gen, int],
    budget: Optional[Budget] = None,
):
    """Moved point of a word in generators g_alpha, inside a reserved interval past every Lam."""
    budget = budget or Budget()
    w = reduce(word)
    if not w.letters:
        raise WordError("word reduces to the empty word")
    idx = [alphas[g] for g in w.generators()]
    if len(set(idx)) != len(idx):
        raise WordError("letters must name distinct generators")
    top = 0
    for a in idx:
        lam = fam.lam_of(a)
        if lam is not None:
            top = max(top, int(lam.upper))
    lo, hi = Fraction(top), Fraction(top) + Fraction(1, 2)
    induced = substitute(w, {g: BASIS[alphas[g]] for g in w.generators()})
    wit = nontriviality_witness(interval_action(lo, hi), induced, budget, interval_windows(lo, hi, budget.max_windows))
    if wit is None:
        return None
    full = Action({g: fam.generator(a) for g, a in alphas.items()})
    y = eval_word(full, w, wit.point)
    if y == wit.point:
        raise AssertionError("reserved-interval witness does not lift")
    return wit.point, y
