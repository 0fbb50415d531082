"""Finitely supported elements of direct sums of finite permutation groups.

Elements store only their non-identity coordinates.  Components compose as
permutations with ``(p*q)[i] = p[q[i]]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import _kernels
from .freegroup import Gen, Word


class DirProdError(ValueError):
    pass


class DegreeMismatch(DirProdError):
    pass


Perm = Tuple[int, ...]


def _is_identity(p: Perm) -> bool:
    return all(i == v for i, v in enumerate(p))


def _check_perm(p: Sequence[int]) -> Perm:
    t = tuple(int(v) for v in p)
    if sorted(t) != list(range(len(t))):
        raise DirProdError(f"{list(t)} is not a permutation of 0..{len(t) - 1}")
    return t


def perm_mul(p: Perm, q: Perm) -> Perm:
    if len(p) != len(q):
        raise DegreeMismatch(f"degrees {len(p)} and {len(q)} differ")
    return tuple(p[i] for i in q)


def perm_inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


@dataclass(frozen=True)
class ComponentGroup:
    """Sym(degree) acting on 0..degree-1."""

    degree: int

    def identity(self) -> Perm:
        return tuple(range(self.degree))

    def contains(self, p: Sequence[int]) -> bool:
        return len(p) == self.degree and sorted(p) == list(range(self.degree))


class FinSupportElement:
    __slots__ = ("_coords", "_degrees", "_hash")

    def __init__(self, coords: Optional[Mapping[int, Sequence[int]]] = None, degrees: Optional[Mapping[int, int]] = None):
        self._coords: Dict[int, Perm] = {}
        self._degrees: Dict[int, int] = dict(degrees or {})
        for a, p in sorted((coords or {}).items()):
            t = _check_perm(p)
            a = int(a)
            if a < 0:
                raise DirProdError("coordinates are natural numbers")
            d = self._degrees.setdefault(a, len(t))
            if d != len(t):
                raise DegreeMismatch(f"coordinate {a}: degree {len(t)} given, {d} declared")
            if not _is_identity(t):
                self._coords[a] = t
        self._hash = None

    @property
    def coords(self) -> Dict[int, Perm]:
        return dict(self._coords)

    def component(self, a: int) -> Optional[Perm]:
        """Component at a, or None when it is the identity."""
        return self._coords.get(a)

    def degree(self, a: int) -> Optional[int]:
        return self._degrees.get(a)

    def is_identity(self) -> bool:
        return not self._coords

    def __mul__(self, other: "FinSupportElement") -> "FinSupportElement":
        return multiply(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinSupportElement) and self._coords == other._coords

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._coords.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"FinSupportElement({self._coords})"

    def to_json(self) -> dict:
        return {"coords": {str(a): list(p) for a, p in sorted(self._coords.items())}}

    @classmethod
    def from_json(cls, obj: dict) -> "FinSupportElement":
        if not isinstance(obj, dict) or "coords" not in obj:
            raise DirProdError("element JSON needs a 'coords' object")
        return cls({int(a): p for a, p in obj["coords"].items()})


def identity() -> FinSupportElement:
    return FinSupportElement()


def _merged_degrees(g: FinSupportElement, h: FinSupportElement) -> Dict[int, int]:
    out = dict(g._degrees)
    for a, d in h._degrees.items():
        if out.setdefault(a, d) != d:
            raise DegreeMismatch(f"coordinate {a}: degrees {out[a]} and {d}")
    return out


def multiply(g: FinSupportElement, h: FinSupportElement) -> FinSupportElement:
    degs = _merged_degrees(g, h)
    coords = {}
    for a in set(g._coords) | set(h._coords):
        p, q = g._coords.get(a), h._coords.get(a)
        coords[a] = q if p is None else p if q is None else perm_mul(p, q)
    return FinSupportElement(coords, degs)


def invert(g: FinSupportElement) -> FinSupportElement:
    return FinSupportElement({a: perm_inv(p) for a, p in g._coords.items()}, g._degrees)


def commutator(g1: FinSupportElement, g2: FinSupportElement) -> FinSupportElement:
    """g1 g2 g1^-1 g2^-1."""
    return multiply(multiply(g1, g2), multiply(invert(g1), invert(g2)))


def support(g: FinSupportElement) -> List[int]:
    return sorted(g._coords)


def letter_names(n: int) -> List[Gen]:
    if n <= 26:
        return [Gen(chr(ord("a") + i)) for i in range(n)]
    return [Gen("s", str(i)) for i in range(n)]


def evaluate(word: Word, assignment: Mapping[Gen, FinSupportElement]) -> FinSupportElement:
    out = identity()
    for gen, e in word:
        if gen not in assignment:
            raise DirProdError(f"letter {gen} is not bound")
        x = assignment[gen]
        out = multiply(out, x if e == 1 else invert(x))
    return out


def _flatten(elements: Sequence[FinSupportElement]) -> List[Tuple[int, ...]]:
    """Concatenate each element's components over the joint support into one permutation."""
    degs: Dict[int, int] = {}
    for g in elements:
        for a, p in g._coords.items():
            if degs.setdefault(a, len(p)) != len(p):
                raise DegreeMismatch(f"coordinate {a} has two degrees")
    flat = []
    for g in elements:
        for x in (g, invert(g)):
            arr: List[int] = []
            for a in sorted(degs):
                p = x._coords.get(a) or tuple(range(degs[a]))
                off = len(arr)
                arr.extend(off + v for v in p)
            flat.append(tuple(arr))
    return flat


@dataclass(frozen=True)
class Relation:
    word: Word
    generators: Tuple[Tuple[Gen, FinSupportElement], ...]

    def to_json(self) -> dict:
        return {
            "verdict": "relation",
            "word": str(self.word),
            "length": len(self.word),
            "generators": {str(g): x.to_json() for g, x in self.generators},
        }


def relation_search(S: Sequence[FinSupportElement], max_len: int = 8) -> Optional[Relation]:
    """First reduced word (length-lex, letters a, a^-1, b, b^-1, ...) trivial on S."""
    if not S:
        raise DirProdError("the element set must be nonempty")
    if max_len < 1:
        raise DirProdError("max_len must be positive")
    gens = letter_names(len(S))
    flat = _flatten(S)
    if not flat[0]:
        # every element is the identity
        found = [0]
    else:
        found = _kernels.search_relation(flat, max_len)
    if found is None:
        return None
    word = Word(tuple((gens[k >> 1], -1 if k & 1 else 1) for k in found))
    assign = dict(zip(gens, S))
    if not evaluate(word, assign).is_identity():
        raise AssertionError(f"search returned {word}, which does not evaluate to the identity")
    return Relation(word, tuple(assign.items()))


@dataclass(frozen=True)
class ProbeResult:
    f: int
    g1: int
    g2: int
    pattern: Tuple[Tuple[int, Optional[Perm]], ...]
    survivors: Tuple[int, ...]
    fallback: bool

    def to_json(self, S: Sequence[FinSupportElement]) -> dict:
        return {
            "verdict": "triple",
            "f": self.f,
            "g1": self.g1,
            "g2": self.g2,
            "A": [a for a, _ in self.pattern],
            "pattern": {str(a): (list(h) if h is not None else None) for a, h in self.pattern},
            "survivors": list(self.survivors),
            "fallback": self.fallback,
            "commutator": commutator(S[self.g1], S[self.g2]).to_json(),
        }


def _refine(S: Sequence[FinSupportElement], A: Sequence[int]):
    """Pin a value at each a in A, keeping the largest agreeing class."""
    alive = list(range(len(S)))
    pattern = []
    for a in A:
        counts: Dict[Optional[Perm], int] = {}
        for i in alive:
            v = S[i].component(a)
            counts[v] = counts.get(v, 0) + 1
        # most frequent; ties go to the least value, identity (None) first
        h = min(counts, key=lambda v: (-counts[v], v is not None, v or ()))
        alive = [i for i in alive if S[i].component(a) == h]
        pattern.append((a, h))
    return pattern, alive


def pigeonhole_probe(S: Sequence[FinSupportElement]) -> Optional[ProbeResult]:
    """Search for f, g1, g2 in S with [f, [g1, g2]] = e via shared support patterns."""
    if len(S) < 3:
        raise DirProdError("need at least three elements")
    for fi, f in enumerate(S):
        A = support(f)
        pattern, alive = _refine(S, A)
        Aset = set(A)
        outside = [i for i in alive if not set(support(S[i])) <= Aset]
        tiers = [(outside, False), (alive, True)]
        for pool, fallback in tiers:
            for x in range(len(pool)):
                for y in range(x + 1, len(pool)):
                    i, j = pool[x], pool[y]
                    if commutator(f, commutator(S[i], S[j])).is_identity():
                        return ProbeResult(fi, i, j, tuple(pattern), tuple(alive), fallback)
    return None


def verify_triple(S: Sequence[FinSupportElement], r: ProbeResult) -> bool:
    return commutator(S[r.f], commutator(S[r.g1], S[r.g2])).is_identity()


def load_set(obj) -> List[FinSupportElement]:
    """Accept a list of elements or {"elements": [...]}."""
    items = obj["elements"] if isinstance(obj, dict) else obj
    if not isinstance(items, list):
        raise DirProdError("expected a list of elements")
    return [FinSupportElement.from_json(e) for e in items]


def dump_set(S: Iterable[FinSupportElement]) -> str:
    return json.dumps({"elements": [g.to_json() for g in S]}, sort_keys=True)
