"""Almost-disjoint subsets of N given by branches of the binary tree.

A branch b is an infinite bit sequence ``seed`` followed by ``tail``
repeated forever.  Its set is ``A_b = {code(b[:n]) : n >= 1}`` with the
prefix code ``code(s) = 2**len(s) + int(s, 2)``.  Two distinct branches share
exactly the codes of their common proper prefixes, so their sets meet in
a finite set whose size is the common-prefix length.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

_BRANCH_RE = re.compile(r"^\s*([01]*)\(([01]+)\)\s*$")


class BranchError(ValueError):
    pass


def code(bits: str) -> int:
    """Prefix code of a bit string; injective, increasing in length."""
    return (1 << len(bits)) + (int(bits, 2) if bits else 0)


def decode(k: int):
    """Inverse of :func:`code`, or None when k is not a code of a nonempty string."""
    if k < 2:
        return None
    length = k.bit_length() - 1
    return format(k - (1 << length), f"0{length}b")


@dataclass(frozen=True)
class Branch:
    """Eventually periodic bit sequence ``seed tail tail tail ...``.

    Stored in canonical form (shortest tail, shortest seed), so ``==`` is
    equality of the infinite sequences.
    """

    seed: str
    tail: str

    def __post_init__(self):
        if not self.tail:
            raise BranchError("tail must be nonempty")
        if set(self.seed + self.tail) - {"0", "1"}:
            raise BranchError("branches are bit strings")
        seed, tail = self.seed, _primitive(self.tail)
        # fold seed bits that match the rotating tail back into the tail
        while seed and seed[-1] == tail[-1]:
            seed = seed[:-1]
            tail = tail[-1] + tail[:-1]
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "tail", tail)

    @classmethod
    def parse(cls, text: str) -> "Branch":
        m = _BRANCH_RE.match(text)
        if not m:
            raise BranchError(f"not a branch: {text!r} (expected e.g. 0101(0) or (01))")
        return cls(m.group(1), m.group(2))

    def bit(self, n: int) -> str:
        if n < len(self.seed):
            return self.seed[n]
        return self.tail[(n - len(self.seed)) % len(self.tail)]

    def prefix(self, n: int) -> str:
        if n <= len(self.seed):
            return self.seed[:n]
        reps = (n - len(self.seed)) // len(self.tail) + 1
        return (self.seed + self.tail * reps)[:n]

    def __str__(self) -> str:
        return f"{self.seed}({self.tail})"


def _primitive(s: str) -> str:
    n = len(s)
    for p in range(1, n + 1):
        if n % p == 0 and s[:p] * (n // p) == s:
            return s[:p]
    return s


@dataclass(frozen=True)
class Enumerator:
    """Increasing enumeration h(n) = code(branch[:n+1]) of A_branch."""

    branch: Branch

    def __call__(self, n: int) -> int:
        return enumerate_ad(self.branch, n)


@dataclass(frozen=True)
class ADSet:
    branch: Branch

    def __contains__(self, k: int) -> bool:
        return member(self.branch, k)

    @property
    def enumerator(self) -> Enumerator:
        return Enumerator(self.branch)

    def elements_below(self, bound: int) -> list:
        out = []
        n = 0
        while True:
            k = enumerate_ad(self.branch, n)
            if k >= bound:
                return out
            out.append(k)
            n += 1


def enumerate_ad(branch, n: int) -> int:
    """h_branch(n): the (n+1)-th smallest element of A_branch."""
    if isinstance(branch, Enumerator):
        branch = branch.branch
    if n < 0:
        raise BranchError("enumeration index must be >= 0")
    return code(branch.prefix(n + 1))


def member(branch, k: int) -> bool:
    if isinstance(branch, ADSet):
        branch = branch.branch
    bits = decode(k)
    return bits is not None and branch.prefix(len(bits)) == bits


def intersection_size(a: Branch, b: Branch) -> int:
    """|A_a & A_b|, i.e. the length of the longest common prefix."""
    if a == b:
        raise BranchError(f"branches are equal: {a}")
    # sequences that agree this far agree forever
    horizon = max(len(a.seed), len(b.seed)) + len(a.tail) * len(b.tail) // math.gcd(len(a.tail), len(b.tail))
    for n in range(horizon + 1):
        if a.bit(n) != b.bit(n):
            return n
    raise AssertionError("canonical branches differ but agree on the horizon")
