"""Blockwise free families and the AD-indexed generators built from them.

A :class:`BlockFreeFamily` puts a free pair (and its conjugate rank-omega
basis) inside every block of a frame.  A branch of the binary tree picks,
in block i, the basis element numbered ``h(i)`` where h enumerates the
branch's almost-disjoint set.  Two generators agree on block i iff their
branches share a prefix of length i+1, so they agree on finitely many
blocks only.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .adfam import Branch, BranchError, enumerate_ad, intersection_size
from .freegroup import (
    Action,
    Budget,
    ConjugateBasis,
    Gen,
    Witness,
    Word,
    WordError,
    eval_word,
    nontriviality_witness,
    rank2_interval_basis,
    reduce,
    substitute,
)
from .order import BlockSet, Finite, Frame, Interval, OrderError, Residue, format_rational
from .plmap import BlockRule, LazyBlock, MapDescriptor, WordMap, register_rule, support_probe

F_GEN = Gen("f")
G_GEN = Gen("g")
BASIS = ConjugateBasis(F_GEN, G_GEN)


class FamilyError(ValueError):
    pass


@functools.lru_cache(maxsize=8192)
def interval_pair(lo: Fraction, hi: Fraction) -> Tuple[MapDescriptor, MapDescriptor]:
    """Free pair supported in the open interval (lo, hi)."""
    inner = Frame.squash(lo, hi, "integers")
    return rank2_interval_basis(Interval.open(lo, hi), inner)


def interval_action(lo: Fraction, hi: Fraction) -> Action:
    f, g = interval_pair(lo, hi)
    return Action({F_GEN: f, G_GEN: g})


def basis_map(lo: Fraction, hi: Fraction, j: int) -> WordMap:
    """The j-th conjugate basis element inside (lo, hi)."""
    return interval_action(lo, hi).word_map(BASIS[j])


def interval_windows(lo: Fraction, hi: Fraction, n: int) -> List[Interval]:
    """Superblocks of the inner frame of (lo, hi), outward from the middle."""
    inner = Frame.squash(lo, hi, "integers")
    out = []
    for k in range(n):
        j = (k + 1) // 2 if k % 2 else -(k // 2)
        out.append(Interval.closed(inner.point(4 * j), inner.point(4 * j + 4)))
    return out


# ---------------------------------------------------------------------------
# Block families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockFreeFamily:
    """A free rank-omega family inside every block (a_i, a_(i+1)) of a frame."""

    hull: Interval
    frame: Frame
    n_blocks: Optional[int] = None

    def block_bounds(self, i: int) -> Tuple[Fraction, Fraction]:
        if not self.has_block(i):
            raise FamilyError(f"block {i} is not part of the family")
        return self.frame.point(i), self.frame.point(i + 1)

    def has_block(self, i: int) -> bool:
        if not self.frame.valid_index(i):
            return False
        if self.n_blocks is not None and not 0 <= i < self.n_blocks:
            return False
        return True

    def block_pair(self, i: int) -> Tuple[MapDescriptor, MapDescriptor]:
        return interval_pair(*self.block_bounds(i))

    def block_action(self, i: int) -> Action:
        return interval_action(*self.block_bounds(i))

    def basis_element(self, i: int, j: int) -> WordMap:
        return basis_map(*self.block_bounds(i), j)

    def to_json(self) -> dict:
        d = {"hull": self.hull.to_json(), "frame": self.frame.to_json()}
        if self.n_blocks is not None:
            d["n_blocks"] = self.n_blocks
        return d

    @classmethod
    def from_json(cls, obj: dict) -> "BlockFreeFamily":
        return cls(Interval.from_json(obj["hull"]), Frame.from_json(obj["frame"]), obj.get("n_blocks"))


def build_block_family(lam: Interval, frame: Frame, n_blocks: Optional[int] = None) -> BlockFreeFamily:
    if n_blocks is not None and n_blocks < 1:
        raise FamilyError("a block family needs at least one block")
    if not lam.contains_interval(frame.hull):
        raise FamilyError(f"frame hull {frame.hull} is not inside {lam}")
    return BlockFreeFamily(lam, frame, n_blocks)


@register_rule
@dataclass(frozen=True)
class CameronRule(BlockRule):
    """Block i carries basis element h_branch(i) of the block family."""

    family: BlockFreeFamily
    branch: Branch

    NAME = "cameron"

    def block_map(self, i):
        if not self.family.has_block(i):
            from .plmap import Identity

            return Identity()
        return self.family.basis_element(i, enumerate_ad(self.branch, i))

    def to_json(self):
        return {"name": self.NAME, "family": self.family.to_json(), "branch": str(self.branch)}

    @classmethod
    def from_json(cls, obj):
        return cls(BlockFreeFamily.from_json(obj["family"]), Branch.parse(obj["branch"]))


@dataclass(frozen=True)
class CameronGenerator:
    family: BlockFreeFamily
    branch: Branch
    descriptor: LazyBlock

    def restriction_index(self, i: int) -> int:
        """Index of the basis element this generator uses on block i."""
        return enumerate_ad(self.branch, i)

    def to_json(self) -> dict:
        return {"family": self.family.to_json(), "branch": str(self.branch), "encoding": "code(s)=2^|s|+int(s,2)"}


def cameron_generator(fam: BlockFreeFamily, branch: Branch) -> CameronGenerator:
    if isinstance(branch, str):
        branch = Branch.parse(branch)
    return CameronGenerator(fam, branch, LazyBlock(fam.frame, CameronRule(fam, branch)))


def agreement_blocks(ga: CameronGenerator, gb: CameronGenerator, n: int) -> List[int]:
    """Blocks i < n on which the two generators restrict to the same basis element."""
    if ga.family != gb.family:
        raise FamilyError("generators come from different families")
    if ga.branch == gb.branch:
        raise BranchError("generators must have distinct branches")
    return [i for i in range(n) if ga.family.has_block(i) and ga.restriction_index(i) == gb.restriction_index(i)]


@dataclass(frozen=True)
class CameronWitness:
    block: int
    point: Fraction
    image: Fraction
    word: Word
    induced: Word

    def to_json(self) -> dict:
        return {
            "word": str(self.word),
            "block": self.block,
            "point": format_rational(self.point),
            "image": format_rational(self.image),
            "induced_length": len(self.induced),
        }


def witness_block(gens: Sequence[CameronGenerator]) -> int:
    """Smallest block index past every pairwise common-prefix length."""
    best = 0
    for a, b in combinations(gens, 2):
        best = max(best, intersection_size(a.branch, b.branch))
    return best


def cameron_word_witness(
    word: Word,
    generators: Mapping[Gen, CameronGenerator],
    budget: Optional[Budget] = None,
) -> Optional[CameronWitness]:
    """Moved point of a word in Cameron generators, found inside one block.

    Returns None only when the in-block search exhausts its budget.
    """
    budget = budget or Budget()
    w = reduce(word)
    if not w.letters:
        raise WordError("word reduces to the empty word")
    used = [generators[g] for g in w.generators()]
    branches = [c.branch for c in used]
    if len(set(branches)) != len(branches):
        raise BranchError("letters must name generators with distinct branches")
    fam = used[0].family
    if any(c.family != fam for c in used):
        raise FamilyError("generators come from different families")
    i = witness_block(used)
    if not fam.has_block(i):
        raise FamilyError(f"family has no block {i}")
    images = {g: BASIS[generators[g].restriction_index(i)] for g in w.generators()}
    induced = substitute(w, images)
    lo, hi = fam.block_bounds(i)
    act = fam.block_action(i)
    wit = nontriviality_witness(act, induced, budget, interval_windows(lo, hi, budget.max_windows))
    if wit is None:
        return None
    full = Action({g: c.descriptor for g, c in generators.items()})
    y = eval_word(full, w, wit.point)
    if y == wit.point or y != wit.image:
        raise AssertionError("block witness does not lift to the full generators")
    return CameronWitness(i, wit.point, y, w, induced)


# ---------------------------------------------------------------------------
# Families over collections of disjoint intervals
# ---------------------------------------------------------------------------


@register_rule
@dataclass(frozen=True)
class IntervalBasisRule(BlockRule):
    """Block i carries the j-th conjugate basis element of its own free pair."""

    frame: Frame
    index: int

    NAME = "interval_basis"

    def block_map(self, i):
        return basis_map(self.frame.point(i), self.frame.point(i + 1), self.index)

    def to_json(self):
        return {"name": self.NAME, "frame": self.frame.to_json(), "index": self.index}

    @classmethod
    def from_json(cls, obj):
        return cls(Frame.from_json(obj["frame"]), int(obj["index"]))


@register_rule
@dataclass(frozen=True)
class IntervalCameronRule(BlockRule):
    """Block i carries the branch's Cameron generator of a family inside the block."""

    frame: Frame
    branch: Branch

    NAME = "interval_cameron"

    def block_map(self, i):
        lo, hi = self.frame.point(i), self.frame.point(i + 1)
        inner = build_block_family(Interval.open(lo, hi), Frame.squash(lo, hi, "naturals"))
        return cameron_generator(inner, self.branch).descriptor

    def to_json(self):
        return {"name": self.NAME, "frame": self.frame.to_json(), "branch": str(self.branch)}

    @classmethod
    def from_json(cls, obj):
        return cls(Frame.from_json(obj["frame"]), Branch.parse(obj["branch"]))


def collection_unbounded(c: BlockSet) -> bool:
    """Symbolic check that the selected blocks are unbounded below and above."""
    if not c.frame.coterminal:
        return False
    sel = c.selector
    if isinstance(sel, Residue):
        return bool(sel.residues)
    if isinstance(sel, Finite):
        return False
    return True


@dataclass
class PathologicalFamily:
    collection: BlockSet
    action: Action
    pathological: bool
    gens: List[Gen] = field(default_factory=list)
    nested: bool = False

    def probe_windows(self, i: int, n: int = 2) -> List[Interval]:
        """Windows inside collection interval i on which every generator has finitely many breakpoints."""
        if not self.collection.has_block(i):
            raise FamilyError(f"block {i} is not in the collection")
        lo, hi = self.collection.frame.point(i), self.collection.frame.point(i + 1)
        if self.nested:
            # innermost pair lives in the first block of the nested family
            inner = Frame.squash(lo, hi, "naturals")
            lo, hi = inner.point(0), inner.point(1)
        return interval_windows(lo, hi, n)

    def moves_in(self, g: Gen, i: int) -> Optional[Tuple[Fraction, Fraction]]:
        """An exactly computed moved subinterval of generator g inside collection interval i."""
        d = self.action[g]
        for win in self.probe_windows(i):
            rep = support_probe(d, win)
            if rep.exact and rep.moved_subintervals:
                m = rep.moved_subintervals[0]
                return m.lower, m.upper
        return None


def pathological_family(
    collection: BlockSet,
    rank: Optional[int] = None,
    branches: Optional[Sequence[Branch]] = None,
    name: str = "p",
) -> PathologicalFamily:
    """Generators acting in every interval of the collection at once.

    With ``rank`` generator j is the j-th basis element in each interval;
    with ``branches`` generator k is the Cameron generator of branch k in
    each interval.
    """
    if (rank is None) == (branches is None):
        raise FamilyError("give exactly one of rank or branches")
    if rank is not None:
        if rank < 1:
            raise FamilyError("rank must be positive")
        rules = [IntervalBasisRule(collection.frame, j) for j in range(rank)]
    else:
        bs = [Branch.parse(b) if isinstance(b, str) else b for b in branches]
        if len(set(bs)) != len(bs):
            raise BranchError("branches must be distinct")
        rules = [IntervalCameronRule(collection.frame, b) for b in bs]
    gens = [Gen(name, str(j)) for j in range(len(rules))]
    action = Action({g: LazyBlock(collection.frame, r, collection.selector) for g, r in zip(gens, rules)})
    return PathologicalFamily(collection, action, collection_unbounded(collection), gens, branches is not None)


@dataclass
class PartitionedFamily:
    frame: Frame
    classes: List[BlockSet]
    ranks: Tuple[int, ...]
    action: Action
    gens: List[Gen]

    def stage(self, k: int) -> List[Gen]:
        """Generators of the stage-k free family (those with index < ranks[k])."""
        return self.gens[: self.ranks[k]]


def nested_union_family(depth: int, ranks: Sequence[int], name: str = "u") -> PartitionedFamily:
    """Nested free families over ``depth`` interleaved interval classes.

    Intervals are [m, m + 1/2) for integers m; class n holds those with
    m = n mod depth.  Generator j acts as the class-n family's j-th
    generator on every class n with j < ranks[n].
    """
    ranks = tuple(int(r) for r in ranks)
    if depth < 1 or len(ranks) != depth:
        raise FamilyError("need depth >= 1 and one rank per class")
    if any(r < 1 for r in ranks) or any(a >= b for a, b in zip(ranks, ranks[1:])):
        raise FamilyError("ranks must be positive and strictly increasing")
    frame = Frame.unit(origin=0, step=Fraction(1, 2))
    classes = [BlockSet(frame, Residue(2 * depth, frozenset({2 * n}))) for n in range(depth)]
    gens = [Gen(name, str(j)) for j in range(ranks[-1])]
    alphabet = {}
    for j, g in enumerate(gens):
        active = frozenset(2 * n for n in range(depth) if ranks[n] > j)
        alphabet[g] = LazyBlock(frame, IntervalBasisRule(frame, j), Residue(2 * depth, active))
    return PartitionedFamily(frame, classes, ranks, Action(alphabet), gens)
