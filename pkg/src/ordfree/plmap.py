"""Order-automorphisms of the rational line described by finite data.

All descriptors are totalized: outside their declared support they act as
the identity.  Evaluation works on ``(numerator, denominator)`` pairs in the
hot path; the public helpers take and return :class:`Fraction`.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from . import _kernels
from .order import (
    BlockSet,
    Cofinite,
    Frame,
    Interval,
    OrderError,
    UnsupportedSelector,
    format_rational,
    parse_rational,
    selector_from_json,
)

Point = Tuple[Fraction, Fraction]
Region = Union[Interval, BlockSet]


class MapError(ValueError):
    """Malformed descriptor or failed patching precondition."""


class PatchError(MapError):
    pass


class TooManyBreakpoints(MapError):
    """Breakpoint enumeration would exceed its limit (or is infinite)."""


BREAKPOINT_LIMIT = 20000


def _frac(n: int, d: int) -> Fraction:
    return Fraction(n, d)


class MapDescriptor:
    """Base class.  Subclasses implement ``apply_nd`` and ``apply_inv_nd``."""

    def apply_nd(self, n: int, d: int) -> Tuple[int, int]:
        raise NotImplementedError

    def apply_inv_nd(self, n: int, d: int) -> Tuple[int, int]:
        raise NotImplementedError

    def __call__(self, x: Fraction) -> Fraction:
        return _frac(*self.apply_nd(x.numerator, x.denominator))

    def inverse_at(self, y: Fraction) -> Fraction:
        return _frac(*self.apply_inv_nd(y.numerator, y.denominator))

    def breakpoints(self, window: Interval, limit: int = BREAKPOINT_LIMIT) -> List[Fraction]:
        """Sorted points of the bounded window where the map may fail to be affine."""
        raise TooManyBreakpoints(type(self).__name__)

    def declared_support(self) -> List[Region]:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Identity(MapDescriptor):
    def apply_nd(self, n, d):
        return n, d

    def apply_inv_nd(self, n, d):
        return n, d

    def breakpoints(self, window, limit=BREAKPOINT_LIMIT):
        return []

    def declared_support(self):
        return []

    def to_json(self):
        return {"type": "identity"}


@dataclass(frozen=True)
class Affine(MapDescriptor):
    """x -> slope*x + intercept on the whole line.  Mainly a segment map for patching."""

    slope: Fraction
    intercept: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "slope", parse_rational(self.slope))
        object.__setattr__(self, "intercept", parse_rational(self.intercept))
        if self.slope <= 0:
            raise MapError("slope must be positive")

    @classmethod
    def between(cls, src: Interval, dst: Interval) -> "Affine":
        """The increasing affine map sending bounded src onto bounded dst."""
        if not (src.bounded and dst.bounded):
            raise MapError("affine segments need bounded intervals")
        s = (dst.upper - dst.lower) / (src.upper - src.lower)
        return cls(s, dst.lower - s * src.lower)

    def apply_nd(self, n, d):
        a, b = self.slope.numerator, self.slope.denominator
        c, e = self.intercept.numerator, self.intercept.denominator
        num, den = a * n * e + c * b * d, b * e * d
        g = math.gcd(num, den)
        return num // g, den // g

    def apply_inv_nd(self, n, d):
        y = Fraction(n, d)
        x = (y - self.intercept) / self.slope
        return x.numerator, x.denominator

    def breakpoints(self, window, limit=BREAKPOINT_LIMIT):
        return []

    def declared_support(self):
        if self.slope == 1 and self.intercept == 0:
            return []
        return [Interval.line()]

    def to_json(self):
        return {"type": "affine", "slope": format_rational(self.slope), "intercept": format_rational(self.intercept)}


@dataclass(frozen=True)
class AffinePiece:
    """x -> slope*x + intercept on domain."""

    domain: Interval
    slope: Fraction
    intercept: Fraction

    def __post_init__(self):
        if self.slope <= 0:
            raise MapError("affine pieces must have positive slope")

    def __call__(self, x: Fraction) -> Fraction:
        return self.slope * x + self.intercept


def _table(xs: Sequence[Fraction], ys: Sequence[Fraction]):
    sn, sd, cn, cd = [], [], [], []
    for k in range(len(xs) - 1):
        s = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k])
        c = ys[k] - s * xs[k]
        sn.append(s.numerator)
        sd.append(s.denominator)
        cn.append(c.numerator)
        cd.append(c.denominator)
    return (
        tuple(x.numerator for x in xs),
        tuple(x.denominator for x in xs),
        tuple(sn),
        tuple(sd),
        tuple(cn),
        tuple(cd),
    )


@dataclass(frozen=True)
class FinitePL(MapDescriptor):
    """Piecewise-affine homeomorphism through ``points``; identity outside.

    The first and last points must be fixed, so the map is a bijection of
    [x_0, x_n] and extends by the identity.
    """

    points: Tuple[Point, ...]

    def __post_init__(self):
        pts = tuple((parse_rational(x), parse_rational(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) == 1:
            raise MapError("a finite PL map needs zero or at least two points")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if not (x0 < x1 and y0 < y1):
                raise MapError("breakpoints must be strictly increasing in both coordinates")
        if pts and (pts[0][0] != pts[0][1] or pts[-1][0] != pts[-1][1]):
            raise MapError("bounding endpoints must be fixed")
        if pts:
            xs = [p[0] for p in pts]
            ys = [p[1] for p in pts]
            object.__setattr__(self, "_fwd", _table(xs, ys))
            object.__setattr__(self, "_inv", _table(ys, xs))

    @classmethod
    def from_segments(cls, segments: Iterable[Tuple[Tuple, Tuple]]) -> "FinitePL":
        """Build from consecutive ``((a, b), (c, e))`` segment maps [a,b] -> [c,e]."""
        pts: List[Point] = []
        for (a, b), (c, e) in segments:
            a, b, c, e = map(parse_rational, (a, b, c, e))
            if pts:
                if pts[-1] != (a, c):
                    raise MapError(f"segment starting at {a} does not continue the previous one")
            else:
                pts.append((a, c))
            pts.append((b, e))
        return cls(tuple(pts))

    @property
    def xs(self) -> List[Fraction]:
        return [p[0] for p in self.points]

    @property
    def bounds(self) -> Optional[Interval]:
        if not self.points:
            return None
        return Interval.closed(self.points[0][0], self.points[-1][0])

    def pieces(self) -> List[AffinePiece]:
        out = []
        for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]):
            s = (y1 - y0) / (x1 - x0)
            out.append(AffinePiece(Interval.closed_open(x0, x1), s, y0 - s * x0))
        return out

    def apply_nd(self, n, d):
        if not self.points:
            return n, d
        return _kernels.pl_apply(self._fwd, n, d)

    def apply_inv_nd(self, n, d):
        if not self.points:
            return n, d
        return _kernels.pl_apply(self._inv, n, d)

    def breakpoints(self, window, limit=BREAKPOINT_LIMIT):
        return [x for x, _ in self.points if x in window]

    def declared_support(self):
        if not self.points or self.canonical().points == ():
            return []
        return [Interval.open(self.points[0][0], self.points[-1][0])]

    def canonical(self) -> "FinitePL":
        """Merge collinear neighbours and trim identity pieces at both ends."""
        pts = list(self.points)
        merged: List[Point] = []
        for p in pts:
            if len(merged) >= 2:
                (x0, y0), (x1, y1) = merged[-2], merged[-1]
                if (y1 - y0) * (p[0] - x1) == (p[1] - y1) * (x1 - x0):
                    merged[-1] = p
                    continue
            merged.append(p)
        while len(merged) >= 2 and merged[0][0] == merged[0][1] and merged[1][0] == merged[1][1]:
            merged.pop(0)
        while len(merged) >= 2 and merged[-1][0] == merged[-1][1] and merged[-2][0] == merged[-2][1]:
            merged.pop()
        if len(merged) < 2:
            merged = []
        return FinitePL(tuple(merged))

    def to_json(self):
        return {"type": "finite", "pattern": _segments_json(self.points)}


def _segments_json(points: Sequence[Point]) -> list:
    return [
        {"from": [format_rational(x0), format_rational(x1)], "to": [format_rational(y0), format_rational(y1)]}
        for (x0, y0), (x1, y1) in zip(points, points[1:])
    ]


def _segments_from_json(segs: list) -> FinitePL:
    return FinitePL.from_segments(((s["from"][0], s["from"][1]), (s["to"][0], s["to"][1])) for s in segs)


@dataclass(frozen=True)
class Periodic(MapDescriptor):
    """x -> pattern(x - k*p) + k*p where k = floor(x/p); pattern fixes 0 and p."""

    period: Fraction
    pattern: FinitePL

    def __post_init__(self):
        p = parse_rational(self.period)
        object.__setattr__(self, "period", p)
        if p <= 0:
            raise MapError("period must be positive")
        pts = self.pattern.points
        if pts and (pts[0][0] != 0 or pts[-1][0] != p):
            raise MapError("periodic pattern must map [0, p] onto itself")

    def _shifted(self, n, d, inverse):
        pn, pd = self.period.numerator, self.period.denominator
        k = (n * pd) // (d * pn)
        rn, rd = n * pd - k * pn * d, d * pd
        g = gcd(rn, rd)
        rn, rd = rn // g, rd // g
        if inverse:
            yn, yd = self.pattern.apply_inv_nd(rn, rd)
        else:
            yn, yd = self.pattern.apply_nd(rn, rd)
        num = yn * pd + k * pn * yd
        den = yd * pd
        g = gcd(num, den)
        return num // g, den // g

    def apply_nd(self, n, d):
        if not self.pattern.points:
            return n, d
        return self._shifted(n, d, False)

    def apply_inv_nd(self, n, d):
        if not self.pattern.points:
            return n, d
        return self._shifted(n, d, True)

    def breakpoints(self, window, limit=BREAKPOINT_LIMIT):
        if not window.bounded:
            raise TooManyBreakpoints("unbounded window")
        p = self.period
        k0 = math.floor(window.lower / p)
        k1 = math.floor(window.upper / p)
        per = max(1, len(self.pattern.points) - 1)
        if (k1 - k0 + 1) * per > limit:
            raise TooManyBreakpoints("periodic map over a long window")
        out = []
        for k in range(k0, k1 + 1):
            for x, _ in self.pattern.points[:-1]:
                t = x + k * p
                if t in window:
                    out.append(t)
        return out

    def declared_support(self):
        if not self.pattern.canonical().points:
            return []
        return [Interval.line()]

    def to_json(self):
        return {"type": "periodic", "period": format_rational(self.period), "pattern": _segments_json(self.pattern.points)}


def map_period(d: MapDescriptor) -> Optional[Fraction]:
    """Translation period of d, or None if d is not known to be periodic."""
    if isinstance(d, Periodic):
        return d.period
    if isinstance(d, AffineConjugate):
        return map_period(d.inner)
    if isinstance(d, LazyBlock):
        return d.rule.period(d.frame)
    return None


@dataclass(frozen=True)
class AffineConjugate(MapDescriptor):
    """x -> inner(x - shift) + shift."""

    inner: MapDescriptor
    shift: Fraction

    def __post_init__(self):
        object.__setattr__(self, "shift", parse_rational(self.shift))

    def _via(self, n, d, fn):
        tn, td = self.shift.numerator, self.shift.denominator
        an, ad = n * td - tn * d, d * td
        g = gcd(an, ad)
        yn, yd = fn(an // g, ad // g)
        num, den = yn * td + tn * yd, yd * td
        g = gcd(num, den)
        return num // g, den // g

    def apply_nd(self, n, d):
        return self._via(n, d, self.inner.apply_nd)

    def apply_inv_nd(self, n, d):
        return self._via(n, d, self.inner.apply_inv_nd)

    def breakpoints(self, window, limit=BREAKPOINT_LIMIT):
        return [x + self.shift for x in self.inner.breakpoints(window.shift(-self.shift), limit)]

    def declared_support(self):
        out = []
        for r in self.inner.declared_support():
            if isinstance(r, Interval):
                out.append(r.shift(self.shift))
            else:
                return [Interval.line()]
        return out

    def to_json(self):
        return {"type": "conjugate", "inner": self.inner.to_json(), "shift": format_rational(self.shift)}


# ---------------------------------------------------------------------------
# Lazy blockwise maps
# ---------------------------------------------------------------------------

_RULES = {}


def register_rule(cls):
    _RULES[cls.NAME] = cls
    return cls


class BlockRule:
    """Named construction producing the map on one frame block.

    The returned descriptor must fix the block's endpoints and act inside it.
    """

    NAME = ""

    def block_map(self, i: int) -> MapDescriptor:
        raise NotImplementedError

    def period(self, frame: Frame) -> Optional[Fraction]:
        return None

    def to_json(self) -> dict:
        raise NotImplementedError


@functools.lru_cache(maxsize=65536)
def _cached_block_map(rule: BlockRule, i: int) -> MapDescriptor:
    return rule.block_map(i)


@register_rule
@dataclass(frozen=True)
class FramePattern(BlockRule):
    """Superblock k of a stride-s subframe mapped through base-frame points.

    ``pattern`` lists (source offset, target offset) pairs relative to the
    superblock's first base index; offsets 0 and stride must be fixed.
    """

    base: Frame
    stride: int
    phase: int
    pattern: Tuple[Tuple[int, int], ...]

    NAME = "frame_pattern"

    def __post_init__(self):
        object.__setattr__(self, "pattern", tuple(tuple(p) for p in self.pattern))
        if self.pattern[0] != (0, 0) or self.pattern[-1] != (self.stride, self.stride):
            raise MapError("frame pattern must fix the superblock endpoints")

    def block_map(self, i):
        s = self.stride * i + self.phase
        return FinitePL(tuple((self.base.point(s + a), self.base.point(s + b)) for a, b in self.pattern))

    def period(self, frame):
        from .order import AffineRule

        if isinstance(frame.rule, AffineRule) and frame.index_kind == "integers":
            return frame.rule.step * frame.stride
        return None

    def to_json(self):
        return {
            "name": self.NAME,
            "base": self.base.to_json(),
            "stride": self.stride,
            "phase": self.phase,
            "pattern": [list(p) for p in self.pattern],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(Frame.from_json(obj["base"]), int(obj["stride"]), int(obj["phase"]), tuple(tuple(p) for p in obj["pattern"]))


@dataclass(frozen=True)
class LazyBlock(MapDescriptor):
    """Map acting on each selected frame block by ``rule.block_map(i)``."""

    frame: Frame
    rule: BlockRule
    selector: object = None  # order.Selector; None selects every block

    def _block(self, n, d):
        i = self.frame.locate(Fraction(n, d))
        if i is None or (self.selector is not None and i not in self.selector):
            return None
        try:
            return _cached_block_map(self.rule, i)
        except (OrderError, MapError) as exc:
            raise MapError(f"block rule failed at block {i}: {exc}") from exc

    def apply_nd(self, n, d):
        m = self._block(n, d)
        return (n, d) if m is None else m.apply_nd(n, d)

    def apply_inv_nd(self, n, d):
        m = self._block(n, d)
        return (n, d) if m is None else m.apply_inv_nd(n, d)

    def block_map(self, i: int) -> MapDescriptor:
        if self.selector is not None and i not in self.selector:
            return Identity()
        return _cached_block_map(self.rule, i)

    def breakpoints(self, window, limit=BREAKPOINT_LIMIT):
        try:
            idx = self.frame.blocks_meeting(window)
        except OrderError as exc:
            raise TooManyBreakpoints(str(exc)) from exc
        if len(idx) > limit:
            raise TooManyBreakpoints("too many blocks in window")
        out = set()
        for i in idx:
            lo, hi = self.frame.point(i), self.frame.point(i + 1)
            for x in (lo, hi):
                if x in window:
                    out.add(x)
            if self.selector is not None and i not in self.selector:
                continue
            sub = window.intersection(Interval.closed(lo, hi))
            if sub is not None:
                out.update(_cached_block_map(self.rule, i).breakpoints(sub, limit))
            if len(out) > limit:
                raise TooManyBreakpoints("too many breakpoints")
        return sorted(out)

    def declared_support(self):
        return [BlockSet(self.frame, self.selector if self.selector is not None else Cofinite(frozenset()))]

    def to_json(self):
        d = {"type": "lazy_block", "frame": self.frame.to_json(), "rule": self.rule.to_json()}
        if self.selector is not None:
            d["selector"] = self.selector.to_json()
        return d


# ---------------------------------------------------------------------------
# Patched, spliced and composite maps
# ---------------------------------------------------------------------------


def region_contains(region: Region, x: Fraction) -> bool:
    return x in region


def region_to_json(region: Region) -> dict:
    if isinstance(region, Interval):
        return {"interval": region.to_json()}
    return {"blocks": region.to_json()}


def region_from_json(obj: dict) -> Region:
    if "interval" in obj:
        return Interval.from_json(obj["interval"])
    return BlockSet.from_json(obj["blocks"])


@dataclass(frozen=True)
class Patched(MapDescriptor):
    """Disjoint union of maps, each acting on its own invariant region."""

    parts: Tuple[Tuple[Tuple[Region, ...], MapDescriptor], ...]

    def _find(self, x: Fraction) -> Optional[MapDescriptor]:
        for regions, m in self.parts:
            for r in regions:
                if x in r:
                    return m
        return None

    def apply_nd(self, n, d):
        m = self._find(Fraction(n, d))
        return (n, d) if m is None else m.apply_nd(n, d)

    def apply_inv_nd(self, n, d):
        m = self._find(Fraction(n, d))
        return (n, d) if m is None else m.apply_inv_nd(n, d)

    def breakpoints(self, window, limit=BREAKPOINT_LIMIT):
        out = set()
        for regions, m in self.parts:
            out.update(m.breakpoints(window, limit))
            for r in regions:
                if isinstance(r, Interval):
                    for x in (r.lower, r.upper):
                        if x is not None and x in window:
                            out.add(x)
                else:
                    try:
                        idx = r.frame.blocks_meeting(window)
                    except OrderError as exc:
                        raise TooManyBreakpoints(str(exc)) from exc
                    for i in idx:
                        for x in (r.frame.point(i), r.frame.point(i + 1)):
                            if x in window:
                                out.add(x)
            if len(out) > limit:
                raise TooManyBreakpoints("too many breakpoints")
        return sorted(out)

    def declared_support(self):
        return [r for regions, _ in self.parts for r in regions]

    def to_json(self):
        return {
            "type": "patched",
            "parts": [{"regions": [region_to_json(r) for r in regions], "map": m.to_json()} for regions, m in self.parts],
        }


@dataclass(frozen=True)
class Spliced(MapDescriptor):
    """Segment maps [a_i, a_(i+1)] -> [b_i, b_(i+1)] glued along a tiling; identity outside."""

    segments: Tuple[Tuple[Fraction, Fraction, Fraction, Fraction, MapDescriptor], ...]

    def _seg(self, x: Fraction, inverse: bool):
        lo_i, hi_i = (2, 3) if inverse else (0, 1)
        segs = self.segments
        if not segs or x < segs[0][lo_i] or x > segs[-1][hi_i]:
            return None
        for s in segs:
            if s[lo_i] <= x <= s[hi_i]:
                return s[4]
        return None

    def apply_nd(self, n, d):
        m = self._seg(Fraction(n, d), False)
        return (n, d) if m is None else m.apply_nd(n, d)

    def apply_inv_nd(self, n, d):
        m = self._seg(Fraction(n, d), True)
        return (n, d) if m is None else m.apply_inv_nd(n, d)

    def breakpoints(self, window, limit=BREAKPOINT_LIMIT):
        out = set()
        for a, b, _, _, m in self.segments:
            for x in (a, b):
                if x in window:
                    out.add(x)
            sub = window.intersection(Interval.closed(a, b))
            if sub is not None:
                out.update(m.breakpoints(sub, limit))
        return sorted(out)

    def declared_support(self):
        if not self.segments:
            return []
        return [Interval.open(self.segments[0][0], self.segments[-1][1])]

    def to_json(self):
        return {
            "type": "spliced",
            "segments": [
                {"from": [format_rational(a), format_rational(b)], "to": [format_rational(c), format_rational(e)], "map": m.to_json()}
                for a, b, c, e, m in self.segments
            ],
        }


@dataclass(frozen=True)
class WordMap(MapDescriptor):
    """Composite of letter maps; ``letters[0]`` is applied last (right-to-left)."""

    letters: Tuple[Tuple[MapDescriptor, int], ...]

    def apply_nd(self, n, d):
        for m, e in reversed(self.letters):
            n, d = m.apply_nd(n, d) if e > 0 else m.apply_inv_nd(n, d)
        return n, d

    def apply_inv_nd(self, n, d):
        for m, e in self.letters:
            n, d = m.apply_inv_nd(n, d) if e > 0 else m.apply_nd(n, d)
        return n, d

    def breakpoints(self, window, limit=BREAKPOINT_LIMIT):
        if not window.bounded:
            raise TooManyBreakpoints("unbounded window")
        out = set(x for x in (window.lower, window.upper))
        applied: List[Tuple[MapDescriptor, int]] = []
        lo, hi = window.lower, window.upper
        for m, e in reversed(self.letters):
            cur = Interval.closed(lo, hi)
            if e > 0:
                bps = m.breakpoints(cur, limit)
            else:
                pre = Interval.closed(m.inverse_at(lo), m.inverse_at(hi))
                bps = [m(b) for b in m.breakpoints(pre, limit)]
            for b in bps:
                x = b
                for pm, pe in reversed(applied):
                    x = pm.inverse_at(x) if pe > 0 else pm(x)
                out.add(x)
            if len(out) > limit:
                raise TooManyBreakpoints("too many breakpoints")
            applied.append((m, e))
            if e > 0:
                lo, hi = m(lo), m(hi)
            else:
                lo, hi = m.inverse_at(lo), m.inverse_at(hi)
        return sorted(x for x in out if x in window)

    def declared_support(self):
        out: List[Region] = []
        for m, _ in self.letters:
            out.extend(m.declared_support())
        return out

    def to_json(self):
        return {"type": "word", "letters": [{"map": m.to_json(), "exp": e} for m, e in self.letters]}


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def descriptor_from_json(obj: dict) -> MapDescriptor:
    t = obj["type"]
    if t == "identity":
        return Identity()
    if t == "affine":
        return Affine(parse_rational(obj["slope"]), parse_rational(obj["intercept"]))
    if t == "finite":
        return _segments_from_json(obj["pattern"])
    if t == "periodic":
        return Periodic(parse_rational(obj["period"]), _segments_from_json(obj["pattern"]))
    if t == "conjugate":
        return AffineConjugate(descriptor_from_json(obj["inner"]), parse_rational(obj["shift"]))
    if t == "lazy_block":
        rule_obj = obj["rule"]
        try:
            rule_cls = _RULES[rule_obj["name"]]
        except KeyError:
            raise MapError(f"unknown block rule {rule_obj['name']!r}") from None
        sel = selector_from_json(obj["selector"]) if "selector" in obj else None
        return LazyBlock(Frame.from_json(obj["frame"]), rule_cls.from_json(rule_obj), sel)
    if t == "patched":
        return Patched(
            tuple(
                (tuple(region_from_json(r) for r in p["regions"]), descriptor_from_json(p["map"]))
                for p in obj["parts"]
            )
        )
    if t == "spliced":
        return Spliced(
            tuple(
                (
                    parse_rational(s["from"][0]),
                    parse_rational(s["from"][1]),
                    parse_rational(s["to"][0]),
                    parse_rational(s["to"][1]),
                    descriptor_from_json(s["map"]),
                )
                for s in obj["segments"]
            )
        )
    if t == "word":
        return WordMap(tuple((descriptor_from_json(l["map"]), int(l["exp"])) for l in obj["letters"]))
    raise MapError(f"unknown descriptor type {t!r}")


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def eval_map(d: MapDescriptor, x: Fraction) -> Fraction:
    return d(x)


def eval_inverse(d: MapDescriptor, y: Fraction) -> Fraction:
    return d.inverse_at(y)


def image_of_interval(d: MapDescriptor, J: Interval) -> Interval:
    """Image of J; maps are increasing bijections, so endpoints carry over."""
    lo = None if J.lower is None else d(J.lower)
    hi = None if J.upper is None else d(J.upper)
    return Interval(lo, hi, J.lower_closed, J.upper_closed)


def piecewise_patch(
    segments: Sequence[Tuple[Interval, MapDescriptor]],
    region: Interval,
    period: Optional[Fraction] = None,
) -> MapDescriptor:
    """Glue maps g_i, each sending [a_i, a_(i+1)] onto [b_i, b_(i+1)].

    The segments must tile ``region`` (a bounded closed interval) and their
    targets must tile it too.  With ``period`` the glued map on ``region``
    is repeated with that period (``region`` length must equal it).
    """
    if not segments:
        raise PatchError("no segments")
    if not region.bounded:
        raise PatchError("region must be bounded; use a periodic or lazy-block map for infinite tilings")
    bounds = []
    for J, g in segments:
        if not J.bounded:
            raise PatchError("segments must be bounded")
        a, b = J.lower, J.upper
        bounds.append((a, b, g(a), g(b), g))
    if bounds[0][0] != region.lower or bounds[-1][1] != region.upper:
        raise PatchError("segments do not tile the region")
    for s, t in zip(bounds, bounds[1:]):
        if s[1] != t[0]:
            raise PatchError(f"segments do not tile the region: gap or overlap at {s[1]}..{t[0]}")
        if s[3] != t[2]:
            raise PatchError(f"endpoint images disagree at {s[1]}: {s[3]} vs {t[2]}")
    if bounds[0][2] != region.lower or bounds[-1][3] != region.upper:
        raise PatchError("glued map does not fix the region endpoints")

    pts = None
    try:
        collected = []
        for a, b, c, e, g in bounds:
            xs = [x for x in g.breakpoints(Interval.closed(a, b)) if a < x < b]
            collected.append((a, c))
            collected.extend((x, g(x)) for x in xs)
        collected.append((bounds[-1][1], bounds[-1][3]))
        pts = tuple(collected)
    except TooManyBreakpoints:
        pts = None

    if period is not None:
        period = parse_rational(period)
        if region.upper - region.lower != period:
            raise PatchError("region length must equal the period")
        if pts is None:
            raise PatchError("periodic patching needs segment maps with finitely many breakpoints")
        shift = region.lower
        pattern = FinitePL(tuple((x - shift, y - shift) for x, y in pts)).canonical()
        if not pattern.points:
            return Identity()
        pattern = _pad_pattern(pattern, period)
        base = Periodic(period, pattern)
        return base if shift == 0 else AffineConjugate(base, shift)
    if pts is not None:
        fp = FinitePL(pts).canonical()
        return fp if fp.points else Identity()
    return Spliced(tuple(bounds))


def _pad_pattern(pattern: FinitePL, period: Fraction) -> FinitePL:
    pts = list(pattern.points)
    if pts[0][0] != 0:
        pts.insert(0, (Fraction(0), Fraction(0)))
    if pts[-1][0] != period:
        pts.append((period, period))
    return FinitePL(tuple(pts))


def regions_disjoint(r: Region, s: Region) -> bool:
    """Symbolic disjointness; raises PatchError when it cannot decide."""
    if isinstance(r, Interval) and isinstance(s, Interval):
        # supports are open sets in practice; touching endpoints are fine
        inter = r.intersection(s)
        return inter is None or (inter.lower == inter.upper)
    if isinstance(r, BlockSet) and isinstance(s, BlockSet):
        if r.frame == s.frame:
            try:
                return r.disjoint(s)
            except UnsupportedSelector as exc:
                raise PatchError(str(exc)) from exc
        if r.frame.hull.disjoint(s.frame.hull):
            return True
        raise PatchError("cannot compare block supports over different frames")
    iv, bs = (r, s) if isinstance(r, Interval) else (s, r)
    inter = iv.intersection(bs.frame.hull)
    if inter is None:
        return True
    try:
        idx = bs.frame.blocks_meeting(inter)
    except OrderError as exc:
        raise PatchError(f"cannot decide overlap of {iv} with a block support: {exc}") from exc
    for i in idx:
        if bs.has_block(i):
            blk = Interval.open(bs.frame.point(i), bs.frame.point(i + 1))
            if blk.intersection(iv) is not None:
                return False
    return True


def disjoint_patch(parts: Sequence[MapDescriptor]) -> MapDescriptor:
    """Merge maps with pairwise disjoint declared supports."""
    parts = [p for p in parts if p.declared_support()]
    if not parts:
        return Identity()
    supports = [p.declared_support() for p in parts]
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            for r in supports[i]:
                for s in supports[j]:
                    if not regions_disjoint(r, s):
                        raise PatchError(f"supports of parts {i} and {j} overlap")
    return Patched(tuple((tuple(sup), p) for sup, p in zip(supports, parts)))


def restrict_extend(d: MapDescriptor, lam: Interval) -> MapDescriptor:
    """The map acting as d on the invariant interval lam and as the identity elsewhere."""
    if image_of_interval(d, lam) != lam:
        raise MapError(f"{lam} is not invariant under the map")
    return Patched((((lam,), d),))


@dataclass(frozen=True)
class SupportReport:
    window: Interval
    moved_subintervals: List[Interval]
    fixed_points_found: List[Fraction]
    exact: bool = True


def support_probe(d: MapDescriptor, window: Interval, density: int = 16) -> SupportReport:
    """Moved subintervals and fixed points of d within a bounded window.

    With a finite breakpoint list the answer is exact (the map is affine
    between consecutive breakpoints); otherwise a grid of ``density`` points
    per unit length (at least ``density`` in total) is sampled.
    """
    if not window.bounded:
        raise MapError("support_probe needs a bounded window")
    if density < 1:
        raise MapError("density must be positive")
    lo, hi = window.lower, window.upper
    try:
        crit = sorted(set(d.breakpoints(Interval.closed(lo, hi))) | {lo, hi})
        exact = True
    except TooManyBreakpoints:
        crit = None
        exact = False

    if exact:
        moved: List[Tuple[Fraction, Fraction]] = []
        fixed = set()
        disp = {x: d(x) - x for x in crit}
        for p, q in zip(crit, crit[1:]):
            u, v = disp[p], disp[q]
            if u == 0:
                fixed.add(p)
            if v == 0:
                fixed.add(q)
            if u == 0 and v == 0:
                continue
            if u * v < 0:
                z = p + (q - p) * u / (u - v)
                fixed.add(z)
                moved.append((p, z))
                moved.append((z, q))
            else:
                moved.append((p, q))
        merged: List[Tuple[Fraction, Fraction]] = []
        for a, b in moved:
            if merged and merged[-1][1] == a and a not in fixed:
                merged[-1] = (merged[-1][0], b)
            else:
                merged.append((a, b))
        intervals = [
            Interval(a, b, a in window and a not in fixed, b in window and b not in fixed) for a, b in merged
        ]
        return SupportReport(window, intervals, sorted(fixed), True)

    n = max(density, density * max(1, math.ceil(hi - lo)))
    samples = [lo + (hi - lo) * Fraction(k, n) for k in range(n + 1)]
    runs: List[List[Fraction]] = []
    fixed_pts = []
    for x in samples:
        if d(x) != x:
            if runs and runs[-1][1] is None:
                runs[-1][0].append(x)
            else:
                runs.append([[x], None])
        else:
            fixed_pts.append(x)
            if runs:
                runs[-1][1] = True
    intervals = [Interval.closed(r[0][0], r[0][-1]) for r in runs]
    return SupportReport(window, intervals, fixed_pts, False)


def finite_pl_equal(a: Union[FinitePL, Identity], b: Union[FinitePL, Identity]) -> bool:
    ca = a.canonical().points if isinstance(a, FinitePL) else ()
    cb = b.canonical().points if isinstance(b, FinitePL) else ()
    return ca == cb
