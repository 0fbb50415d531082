"""Exact rationals, intervals, frames and block sets over the rational line.

Every point is a :class:`fractions.Fraction`.  Blocks of a frame are
left-closed, right-open: block ``i`` is ``[point(i), point(i+1))``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Union

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:/(\d+))?\s*$")


class OrderError(ValueError):
    """Malformed interval, frame or block-set request."""


class FrameMismatch(OrderError):
    pass


class UnsupportedSelector(OrderError):
    """Selector combination for which a symbolic answer is not implemented."""


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse ``-?digits[/digits]``; the result is canonical."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    m = _RATIONAL_RE.match(text)
    if not m:
        raise OrderError(f"not a rational: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise OrderError(f"zero denominator: {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def rational_cmp(a: Fraction, b: Fraction) -> int:
    """-1, 0 or 1 by cross-multiplication (denominators are positive)."""
    lhs = a.numerator * b.denominator
    rhs = b.numerator * a.denominator
    return (lhs > rhs) - (lhs < rhs)


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """Convex subset of Q.  ``None`` endpoints mean -inf / +inf."""

    lower: Optional[Fraction]
    upper: Optional[Fraction]
    lower_closed: bool = False
    upper_closed: bool = False

    def __post_init__(self):
        if self.lower is None and self.lower_closed:
            object.__setattr__(self, "lower_closed", False)
        if self.upper is None and self.upper_closed:
            object.__setattr__(self, "upper_closed", False)
        if self.lower is not None and self.upper is not None:
            if self.lower > self.upper:
                raise OrderError(f"empty interval {self}")
            if self.lower == self.upper and not (self.lower_closed and self.upper_closed):
                raise OrderError(f"empty interval {self}")

    @classmethod
    def line(cls) -> "Interval":
        return cls(None, None)

    @classmethod
    def open(cls, a, b) -> "Interval":
        return cls(_opt(a), _opt(b), False, False)

    @classmethod
    def closed(cls, a, b) -> "Interval":
        return cls(_opt(a), _opt(b), True, True)

    @classmethod
    def closed_open(cls, a, b) -> "Interval":
        return cls(_opt(a), _opt(b), True, False)

    @property
    def bounded(self) -> bool:
        return self.lower is not None and self.upper is not None

    def __contains__(self, x: Fraction) -> bool:
        if self.lower is not None:
            if x < self.lower or (x == self.lower and not self.lower_closed):
                return False
        if self.upper is not None:
            if x > self.upper or (x == self.upper and not self.upper_closed):
                return False
        return True

    def contains_interval(self, other: "Interval") -> bool:
        if self.lower is not None:
            if other.lower is None or other.lower < self.lower:
                return False
            if other.lower == self.lower and other.lower_closed and not self.lower_closed:
                return False
        if self.upper is not None:
            if other.upper is None or other.upper > self.upper:
                return False
            if other.upper == self.upper and other.upper_closed and not self.upper_closed:
                return False
        return True

    def intersection(self, other: "Interval") -> Optional["Interval"]:
        lo, lc = self.lower, self.lower_closed
        if other.lower is not None and (lo is None or other.lower > lo):
            lo, lc = other.lower, other.lower_closed
        elif other.lower is not None and other.lower == lo:
            lc = lc and other.lower_closed
        hi, hc = self.upper, self.upper_closed
        if other.upper is not None and (hi is None or other.upper < hi):
            hi, hc = other.upper, other.upper_closed
        elif other.upper is not None and other.upper == hi:
            hc = hc and other.upper_closed
        if lo is not None and hi is not None:
            if lo > hi or (lo == hi and not (lc and hc)):
                return None
        return Interval(lo, hi, lc, hc)

    def disjoint(self, other: "Interval") -> bool:
        return self.intersection(other) is None

    def shift(self, t: Fraction) -> "Interval":
        return Interval(
            None if self.lower is None else self.lower + t,
            None if self.upper is None else self.upper + t,
            self.lower_closed,
            self.upper_closed,
        )

    def __str__(self) -> str:
        lo = "-inf" if self.lower is None else format_rational(self.lower)
        hi = "+inf" if self.upper is None else format_rational(self.upper)
        return f"{'[' if self.lower_closed else '('}{lo}, {hi}{']' if self.upper_closed else ')'}"

    def to_json(self) -> dict:
        return {
            "lower": None if self.lower is None else format_rational(self.lower),
            "upper": None if self.upper is None else format_rational(self.upper),
            "lower_closed": self.lower_closed,
            "upper_closed": self.upper_closed,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Interval":
        return cls(
            None if obj.get("lower") is None else parse_rational(obj["lower"]),
            None if obj.get("upper") is None else parse_rational(obj["upper"]),
            bool(obj.get("lower_closed", False)),
            bool(obj.get("upper_closed", False)),
        )


def _opt(a) -> Optional[Fraction]:
    return None if a is None else parse_rational(a)


# ---------------------------------------------------------------------------
# Frames
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineRule:
    """a_i = origin + step * i."""

    origin: Fraction
    step: Fraction

    def __post_init__(self):
        if self.step <= 0:
            raise OrderError("frame step must be positive")

    def point(self, i: int, kind: str) -> Fraction:
        return self.origin + self.step * i

    def index_real(self, x: Fraction, kind: str) -> Optional[Fraction]:
        return (x - self.origin) / self.step

    def bounds(self, kind: str):
        return None, None

    def to_json(self) -> dict:
        return {"rule": "affine", "origin": format_rational(self.origin), "step": format_rational(self.step)}


@dataclass(frozen=True)
class SquashRule:
    """Points accumulating at the ends of a bounded interval (lo, hi).

    integers: a_i = lo + (hi-lo) * (1 + i/(1+|i|)) / 2
    naturals: a_i = lo + (hi-lo) * (1 - 1/(i+2))
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not self.lo < self.hi:
            raise OrderError("squash rule needs lo < hi")

    def _unit(self, i: int, kind: str) -> Fraction:
        if kind == "integers":
            return (1 + Fraction(i, 1 + abs(i))) / 2
        return 1 - Fraction(1, i + 2)

    def point(self, i: int, kind: str) -> Fraction:
        return self.lo + (self.hi - self.lo) * self._unit(i, kind)

    def index_real(self, x: Fraction, kind: str) -> Optional[Fraction]:
        # inverse of the point rule on the open hull; None outside
        if x <= self.lo or x >= self.hi:
            return None
        t = (x - self.lo) / (self.hi - self.lo)
        if kind == "integers":
            s = 2 * t - 1
            return s / (1 - s) if s >= 0 else s / (1 + s)
        return 1 / (1 - t) - 2

    def bounds(self, kind: str):
        return self.lo, self.hi

    def to_json(self) -> dict:
        return {"rule": "squash", "lo": format_rational(self.lo), "hi": format_rational(self.hi)}


FrameRule = Union[AffineRule, SquashRule]


@dataclass(frozen=True)
class Frame:
    """Strictly increasing sequence of rationals indexed by Z or N.

    ``stride``/``phase`` select the subsequence ``i -> rule(stride*i + phase)``.
    """

    index_kind: str
    rule: FrameRule
    stride: int = 1
    phase: int = 0

    def __post_init__(self):
        if self.index_kind not in ("integers", "naturals"):
            raise OrderError(f"bad index kind {self.index_kind!r}")
        if self.stride < 1:
            raise OrderError("stride must be >= 1")
        if self.index_kind == "naturals" and self.phase < 0:
            raise OrderError("naturals frame phase must be >= 0")

    @classmethod
    def unit(cls, kind: str = "integers", origin=0, step=1) -> "Frame":
        return cls(kind, AffineRule(parse_rational(origin), parse_rational(step)))

    @classmethod
    def squash(cls, lo, hi, kind: str = "integers") -> "Frame":
        return cls(kind, SquashRule(parse_rational(lo), parse_rational(hi)))

    @property
    def coterminal(self) -> bool:
        return self.index_kind == "integers"

    def valid_index(self, i: int) -> bool:
        return self.index_kind == "integers" or i >= 0

    def point(self, i: int) -> Fraction:
        if not self.valid_index(i):
            raise OrderError(f"index {i} not in frame")
        return self.rule.point(self.stride * i + self.phase, self.index_kind)

    def subframe(self, stride: int, phase: int = 0) -> "Frame":
        return Frame(self.index_kind, self.rule, self.stride * stride, self.phase + self.stride * phase)

    def locate(self, x: Fraction) -> Optional[int]:
        """Block index i with point(i) <= x < point(i+1), or None outside the hull."""
        s = self.rule.index_real(x, self.index_kind)
        if s is None:
            return None
        j = math.floor(s)
        i = (j - self.phase) // self.stride
        if not self.valid_index(i):
            return None
        return i

    @property
    def hull(self) -> Interval:
        lo, hi = self.rule.bounds(self.index_kind)
        if self.index_kind == "naturals":
            return Interval(self.point(0), hi, True, False)
        return Interval(lo, hi)

    def block(self, i: int) -> Interval:
        return Interval.closed_open(self.point(i), self.point(i + 1))

    def blocks_meeting(self, window: Interval) -> range:
        """Indices of blocks meeting a bounded window (clipped to the hull)."""
        if not window.bounded:
            raise OrderError("window must be bounded")
        w = window.intersection(self.hull)
        if w is None:
            return range(0)
        lo_i = self.locate(w.lower) if w.lower in self.hull else None
        hi_i = self.locate(w.upper) if w.upper in self.hull else None
        if lo_i is None or hi_i is None:
            raise OrderError("window reaches an accumulation point of the frame")
        if self.point(hi_i) == w.upper and not w.upper_closed and hi_i > lo_i:
            hi_i -= 1
        return range(lo_i, hi_i + 1)

    def to_json(self) -> dict:
        d = {"index_kind": self.index_kind, **self.rule.to_json()}
        if self.stride != 1 or self.phase != 0:
            d["stride"] = self.stride
            d["phase"] = self.phase
        return d

    @classmethod
    def from_json(cls, obj: dict) -> "Frame":
        if obj["rule"] == "affine":
            rule = AffineRule(parse_rational(obj["origin"]), parse_rational(obj["step"]))
        elif obj["rule"] == "squash":
            rule = SquashRule(parse_rational(obj["lo"]), parse_rational(obj["hi"]))
        else:
            raise OrderError(f"unknown frame rule {obj['rule']!r}")
        return cls(obj["index_kind"], rule, int(obj.get("stride", 1)), int(obj.get("phase", 0)))


# ---------------------------------------------------------------------------
# Block selectors and block sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Residue:
    """Indices i with i mod modulus in residues, minus a finite exclusion set."""

    modulus: int
    residues: frozenset
    excluded: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.modulus < 1:
            raise OrderError("modulus must be positive")
        object.__setattr__(self, "residues", frozenset(self.residues))
        object.__setattr__(self, "excluded", frozenset(self.excluded))
        if any(not 0 <= r < self.modulus for r in self.residues):
            raise OrderError("residues must lie in [0, modulus)")

    def __contains__(self, i: int) -> bool:
        return i % self.modulus in self.residues and i not in self.excluded

    def to_json(self) -> dict:
        d = {"residue": [self.modulus, sorted(self.residues)]}
        if self.excluded:
            d["excluded"] = sorted(self.excluded)
        return d


@dataclass(frozen=True)
class Finite:
    indices: frozenset

    def __post_init__(self):
        object.__setattr__(self, "indices", frozenset(self.indices))

    def __contains__(self, i: int) -> bool:
        return i in self.indices

    def to_json(self) -> dict:
        return {"finite": sorted(self.indices)}


@dataclass(frozen=True)
class Cofinite:
    excluded: frozenset

    def __post_init__(self):
        object.__setattr__(self, "excluded", frozenset(self.excluded))

    def __contains__(self, i: int) -> bool:
        return i not in self.excluded

    def to_json(self) -> dict:
        return {"cofinite": sorted(self.excluded)}


@dataclass(frozen=True)
class ADMember:
    """Indices belonging to the almost-disjoint set of a branch."""

    branch: object  # adfam.Branch; untyped to avoid an import cycle

    def __contains__(self, i: int) -> bool:
        from .adfam import member

        return i >= 0 and member(self.branch, i)

    def to_json(self) -> dict:
        return {"ad": str(self.branch)}


Selector = Union[Residue, Finite, Cofinite, ADMember]


def residue_class(modulus: int, *residues: int) -> Residue:
    return Residue(modulus, frozenset(residues))


def selector_from_json(obj: dict) -> Selector:
    if "residue" in obj:
        m, rs = obj["residue"]
        return Residue(int(m), frozenset(int(r) for r in rs), frozenset(obj.get("excluded", ())))
    if "finite" in obj:
        return Finite(frozenset(int(i) for i in obj["finite"]))
    if "cofinite" in obj:
        return Cofinite(frozenset(int(i) for i in obj["cofinite"]))
    if "ad" in obj:
        from .adfam import Branch

        return ADMember(Branch.parse(obj["ad"]))
    raise OrderError(f"unknown selector {obj!r}")


def _selector_witness(a: Selector, b: Selector) -> Optional[int]:
    """A common index of two selectors, or None if they are disjoint."""
    if isinstance(b, Finite) and not isinstance(a, Finite):
        a, b = b, a
    if isinstance(a, Finite):
        common = sorted(i for i in a.indices if i in b)
        return common[0] if common else None
    if isinstance(a, Residue) and isinstance(b, Residue):
        lcm = a.modulus * b.modulus // math.gcd(a.modulus, b.modulus)
        skip = a.excluded | b.excluded
        for r in range(lcm):
            if r % a.modulus in a.residues and r % b.modulus in b.residues:
                # the class is infinite, so an unexcluded representative exists
                k = 0
                while r + k * lcm in skip:
                    k += 1
                return r + k * lcm
        return None
    if isinstance(a, Cofinite) or isinstance(b, Cofinite):
        other = b if isinstance(a, Cofinite) else a
        cof = a if isinstance(a, Cofinite) else b
        if isinstance(other, Residue):
            if not other.residues:
                return None
            r = min(other.residues)
            k = 0
            while r + k * other.modulus in cof.excluded or r + k * other.modulus in other.excluded:
                k += 1
            return r + k * other.modulus
        if isinstance(other, Cofinite):
            i = 0
            while i in cof.excluded or i in other.excluded:
                i += 1
            return i
    raise UnsupportedSelector(f"cannot decide disjointness of {type(a).__name__} and {type(b).__name__}")


@dataclass(frozen=True)
class BlockSet:
    """Union of the frame blocks whose indices the selector picks."""

    frame: Frame
    selector: Selector

    def has_block(self, i: int) -> bool:
        return self.frame.valid_index(i) and i in self.selector

    def __contains__(self, x: Fraction) -> bool:
        i = self.frame.locate(x)
        return i is not None and i in self.selector

    def _check(self, other: "BlockSet"):
        if self.frame != other.frame:
            raise FrameMismatch("block sets live on different frames")

    def common_block(self, other: "BlockSet") -> Optional[int]:
        self._check(other)
        i = _selector_witness(self.selector, other.selector)
        if i is None:
            return None
        if self.frame.valid_index(i):
            return i
        # naturals frame: look for a valid representative
        if isinstance(self.selector, Residue) or isinstance(other.selector, Residue):
            m = self.selector.modulus if isinstance(self.selector, Residue) else other.selector.modulus
            j = i % m
            for k in range(0, 10 * m + len(getattr(self.selector, "excluded", ())) + 10):
                c = j + k * m
                if c in self.selector and c in other.selector:
                    return c
        return None

    def disjoint(self, other: "BlockSet") -> bool:
        return self.common_block(other) is None

    def complement(self) -> "BlockSet":
        s = self.selector
        if isinstance(s, Residue):
            rest = frozenset(range(s.modulus)) - s.residues
            if s.excluded:
                raise UnsupportedSelector("complement of a residue set with exclusions")
            return BlockSet(self.frame, Residue(s.modulus, rest))
        if isinstance(s, Finite):
            return BlockSet(self.frame, Cofinite(s.indices))
        if isinstance(s, Cofinite):
            return BlockSet(self.frame, Finite(s.excluded))
        raise UnsupportedSelector("complement of an AD-set selector")

    def intervals(self, start: int, stop: int) -> list:
        """Selected blocks with index in [start, stop), merged into maximal intervals."""
        out = []
        for i in range(start, stop):
            if not self.has_block(i):
                continue
            lo, hi = self.frame.point(i), self.frame.point(i + 1)
            if out and out[-1][1] == lo:
                out[-1] = (out[-1][0], hi)
            else:
                out.append((lo, hi))
        return [Interval.closed_open(a, b) for a, b in out]

    def iter_indices(self, start: int, stop: int) -> Iterator[int]:
        return (i for i in range(start, stop) if self.has_block(i))

    def to_json(self) -> dict:
        return {"frame": self.frame.to_json(), **self.selector.to_json()}

    @classmethod
    def from_json(cls, obj: dict, frame: Optional[Frame] = None) -> "BlockSet":
        fr = frame if frame is not None else Frame.from_json(obj["frame"])
        return cls(fr, selector_from_json(obj))
