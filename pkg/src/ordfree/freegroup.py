"""Words over generator alphabets, their actions, and free bases.

Words act on the line right to left: ``"f g"`` sends x to f(g(x)).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .order import AffineRule, Frame, Interval, OrderError, format_rational, parse_rational
from .plmap import (
    AffineConjugate,
    FinitePL,
    FramePattern,
    LazyBlock,
    MapDescriptor,
    MapError,
    Periodic,
    TooManyBreakpoints,
    descriptor_from_json,
)


class WordError(ValueError):
    pass


class UnboundLetter(WordError):
    pass


_LETTER_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:#([^\s^]+))?(\^-1|\^1)?$")


@dataclass(frozen=True, order=True)
class Gen:
    name: str
    index: Optional[str] = None

    def __str__(self) -> str:
        return self.name if self.index is None else f"{self.name}#{self.index}"

    @classmethod
    def parse(cls, text: str) -> "Gen":
        if "#" in text:
            name, idx = text.split("#", 1)
            return cls(name, idx)
        return cls(text)


Letter = Tuple[Gen, int]


@dataclass(frozen=True)
class Word:
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        lets = tuple((g if isinstance(g, Gen) else Gen.parse(g), int(e)) for g, e in self.letters)
        for _, e in lets:
            if e not in (1, -1):
                raise WordError("exponents must be +1 or -1")
        object.__setattr__(self, "letters", lets)

    @classmethod
    def parse(cls, text: str) -> "Word":
        letters = []
        for tok in text.split():
            m = _LETTER_RE.match(tok)
            if not m:
                raise WordError(f"bad letter {tok!r}")
            letters.append((Gen(m.group(1), m.group(2)), -1 if m.group(3) == "^-1" else 1))
        return cls(tuple(letters))

    @classmethod
    def of(cls, *gens, exp: int = 1) -> "Word":
        return cls(tuple((g if isinstance(g, Gen) else Gen.parse(g), exp) for g in gens))

    def __str__(self) -> str:
        return " ".join(f"{g}^-1" if e < 0 else str(g) for g, e in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        return Word(self.letters * k)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    @property
    def is_reduced(self) -> bool:
        return all(not (a[0] == b[0] and a[1] == -b[1]) for a, b in zip(self.letters, self.letters[1:]))

    def generators(self) -> List[Gen]:
        seen = []
        for g, _ in self.letters:
            if g not in seen:
                seen.append(g)
        return seen

    def to_json(self) -> list:
        return [{"gen": str(g), "exp": e} for g, e in self.letters]

    @classmethod
    def from_json(cls, obj: list) -> "Word":
        return cls(tuple((Gen.parse(l["gen"]), int(l["exp"])) for l in obj))


def reduce(w: Word) -> Word:
    """Free reduction with a stack; the result is independent of cancellation order."""
    out: List[Letter] = []
    for g, e in w.letters:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return Word(tuple(out))


class Action:
    """Binding of generators to map descriptors."""

    def __init__(self, alphabet: Mapping[Gen, MapDescriptor]):
        self.alphabet: Dict[Gen, MapDescriptor] = {
            (g if isinstance(g, Gen) else Gen.parse(g)): d for g, d in alphabet.items()
        }

    def __getitem__(self, g) -> MapDescriptor:
        key = g if isinstance(g, Gen) else Gen.parse(g)
        try:
            return self.alphabet[key]
        except KeyError:
            raise UnboundLetter(f"letter {key} is not bound") from None

    def __contains__(self, g) -> bool:
        return (g if isinstance(g, Gen) else Gen.parse(g)) in self.alphabet

    def gens(self) -> List[Gen]:
        return list(self.alphabet)

    def word_map(self, w: Word):
        from .plmap import WordMap

        return WordMap(tuple((self[g], e) for g, e in w.letters))

    def to_json(self) -> dict:
        return {"generators": {str(g): d.to_json() for g, d in self.alphabet.items()}}

    @classmethod
    def from_json(cls, obj: dict) -> "Action":
        gens = obj.get("generators", obj)
        return cls({Gen.parse(k): descriptor_from_json(v) for k, v in gens.items()})

    def __eq__(self, other):
        return isinstance(other, Action) and self.alphabet == other.alphabet


def eval_word(a: Action, w: Word, x: Fraction) -> Fraction:
    maps = [(a[g], e) for g, e in w.letters]
    n, d = x.numerator, x.denominator
    for m, e in reversed(maps):
        n, d = m.apply_nd(n, d) if e > 0 else m.apply_inv_nd(n, d)
    return Fraction(n, d)


# ---------------------------------------------------------------------------
# Rank-2 pair on an interval, and the conjugate rank-omega basis
# ---------------------------------------------------------------------------

# superblock [a_4k, a_4k+4]: a_4k -> a_4k, a_4k+1 -> a_4k+3, a_4k+4 -> a_4k+4
_PINGPONG_PATTERN = ((0, 0), (1, 3), (4, 4))


def rank2_interval_basis(lam: Interval, frame: Frame, simplify: bool = True) -> Tuple[MapDescriptor, MapDescriptor]:
    """Free pair acting on the hull of a coterminal frame inside ``lam``.

    f sends [a_i, a_(i+1)] onto [a_i, a_(i+3)] and [a_(i-3), a_i] onto
    [a_(i-1), a_i] for i = 0 mod 4; g does the same for i = 2 mod 4.
    Both are affine on those segments and the identity off the hull.
    Ping-pong sets: A_f = blocks 0 mod 4, B_f = 3 mod 4, A_g = 2 mod 4,
    B_g = 1 mod 4.
    """
    if not frame.coterminal:
        raise OrderError("rank-2 construction needs a frame indexed by the integers")
    if not lam.contains_interval(frame.hull):
        raise OrderError(f"frame hull {frame.hull} is not inside {lam}")
    if simplify and isinstance(frame.rule, AffineRule):
        step = frame.rule.step * frame.stride
        origin = frame.point(0)
        pattern = FinitePL(tuple((step * a, step * b) for a, b in _PINGPONG_PATTERN))
        base = Periodic(4 * step, pattern)
        f = base if origin == 0 else AffineConjugate(base, origin)
        g = AffineConjugate(base, origin + 2 * step)
        return f, g
    f = LazyBlock(frame.subframe(4, 0), FramePattern(frame, 4, 0, _PINGPONG_PATTERN))
    g = LazyBlock(frame.subframe(4, 2), FramePattern(frame, 4, 2, _PINGPONG_PATTERN))
    return f, g


def pingpong_blocksets(frame: Frame):
    """The canonical table (A_f, B_f, A_g, B_g) of the rank-2 pair."""
    from .order import BlockSet, residue_class

    return (
        BlockSet(frame, residue_class(4, 0)),
        BlockSet(frame, residue_class(4, 3)),
        BlockSet(frame, residue_class(4, 2)),
        BlockSet(frame, residue_class(4, 1)),
    )


@dataclass(frozen=True)
class ConjugateBasis:
    """w_j = f^-j g f^j, a free basis of infinite rank when f, g are free."""

    f: Gen
    g: Gen

    def __getitem__(self, j: int) -> Word:
        if j < 0:
            raise WordError("basis index must be >= 0")
        fw = Word(((self.f, 1),))
        return fw ** (-j) * Word(((self.g, 1),)) * fw ** j

    def take(self, n: int) -> List[Word]:
        return [self[j] for j in range(n)]


def rank_omega_basis(f, g) -> ConjugateBasis:
    return ConjugateBasis(f if isinstance(f, Gen) else Gen.parse(f), g if isinstance(g, Gen) else Gen.parse(g))


def substitute(w: Word, images: Mapping[Gen, Word]) -> Word:
    """Replace each letter by its image word (inverted for negative letters), then reduce."""
    out: List[Letter] = []
    for g, e in w.letters:
        img = images[g]
        out.extend((img if e > 0 else img.inverse()).letters)
    return reduce(Word(tuple(out)))


def random_reduced_word(rng, gens: Sequence[Gen], max_len: int, min_len: int = 1) -> Word:
    """Uniform over nonempty reduced words with min_len <= length <= max_len."""
    k = len(gens)
    if k < 1 or min_len < 1 or max_len < min_len:
        raise WordError("need generators and 1 <= min_len <= max_len")
    counts = [2 * k * (2 * k - 1) ** (n - 1) for n in range(min_len, max_len + 1)]
    r = rng.randrange(sum(counts))
    n = min_len
    for c in counts:
        if r < c:
            break
        r -= c
        n += 1
    letters: List[Letter] = []
    for _ in range(n):
        choices = [(g, e) for g in gens for e in (1, -1)]
        if letters:
            g0, e0 = letters[-1]
            choices.remove((g0, -e0))
        letters.append(choices[rng.randrange(len(choices))])
    return Word(tuple(letters))


# ---------------------------------------------------------------------------
# Moved-point witnesses
# ---------------------------------------------------------------------------


@dataclass
class Budget:
    max_windows: int = 16
    grid_density: int = 64
    breakpoint_limit: int = 4000

    def __post_init__(self):
        if self.max_windows < 1 or self.grid_density < 1 or self.breakpoint_limit < 1:
            raise ValueError("budgets must be positive")


@dataclass(frozen=True)
class Witness:
    point: Fraction
    image: Fraction
    word: Word
    tried: int = 0

    def to_json(self) -> dict:
        return {
            "word": str(self.word),
            "point": format_rational(self.point),
            "image": format_rational(self.image),
            "points_tried": self.tried,
        }


def default_windows(n: int, center: Fraction = Fraction(0), width: Fraction = Fraction(4)) -> List[Interval]:
    """[c, c+w], [c-w, c], [c+w, c+2w], ... alternating sides."""
    out = []
    for k in range(n):
        j = (k + 1) // 2 if k % 2 else -(k // 2)
        j = -j
        lo = center + width * j
        out.append(Interval.closed(lo, lo + width))
    return out


def dense_points(window: Interval, count: int) -> Iterator[Fraction]:
    """Rationals of a bounded window by increasing denominator (Farey order), skipping repeats."""
    lo, hi = window.lower, window.upper
    span = hi - lo
    seen = set()
    produced = 0
    q = 1
    while produced < count:
        for p in range(0, q + 1):
            t = Fraction(p, q)
            if t in seen:
                continue
            seen.add(t)
            yield lo + span * t
            produced += 1
            if produced >= count:
                return
        q += 1


def _letter_breakpoints(a: Action, w: Word, window: Interval, limit: int) -> List[Fraction]:
    out = set()
    for g in w.generators():
        try:
            out.update(a[g].breakpoints(window, limit))
        except (TooManyBreakpoints, OrderError):
            continue
        if len(out) > limit:
            break
    return sorted(out)


COMPOSITE_BREAKPOINT_MAX_LEN = 32


def _candidates(a: Action, w: Word, window: Interval, budget: Budget) -> Iterator[Fraction]:
    """Letter breakpoints, their midpoints, composite-piece interior points, then a Farey grid."""
    pts = sorted(set(_letter_breakpoints(a, w, window, budget.breakpoint_limit)) | {window.lower, window.upper})
    yield from pts
    for p, q in zip(pts, pts[1:]):
        yield (p + q) / 2
    if len(w) <= COMPOSITE_BREAKPOINT_MAX_LEN:
        try:
            cps = a.word_map(w).breakpoints(window, budget.breakpoint_limit)
        except (TooManyBreakpoints, OrderError):
            cps = []
        cps = sorted(set(cps) | {window.lower, window.upper})
        # the composite is affine between these, so two interior points per piece decide it
        for p, q in zip(cps, cps[1:]):
            yield (p + q) / 2
            yield p + (q - p) / 3
    yield from dense_points(window, budget.grid_density)


def nontriviality_witness(
    a: Action,
    w: Word,
    budget: Optional[Budget] = None,
    windows: Optional[Sequence[Interval]] = None,
) -> Optional[Witness]:
    """A point moved by the word, or None when the budget runs out.

    None is inconclusive; it never means the word acts trivially.
    """
    if not w.letters:
        raise WordError("the empty word has no moved points")
    if not w.is_reduced:
        raise WordError("word must be freely reduced")
    budget = budget or Budget()
    if windows is None:
        windows = default_windows(budget.max_windows)
    tried = 0
    seen = set()
    for win in list(windows)[: budget.max_windows]:
        for x in _candidates(a, w, win, budget):
            if x in seen:
                continue
            seen.add(x)
            tried += 1
            y = eval_word(a, w, x)
            if y != x:
                return Witness(x, y, w, tried)
    return None


def verify_witness(a: Action, wit: Witness) -> bool:
    return eval_word(a, wit.word, wit.point) != wit.point


# ---------------------------------------------------------------------------
# The standard example pair: period-4 maps of the line
# ---------------------------------------------------------------------------

EXAMPLE_F_PATTERN = FinitePL(
    (
        (Fraction(0), Fraction(0)),
        (Fraction(1), Fraction(13, 4)),
        (Fraction(2), Fraction(7, 2)),
        (Fraction(3), Fraction(15, 4)),
        (Fraction(4), Fraction(4)),
    )
)


def example_f() -> Periodic:
    """Blocks [a, a+1) for a = 0,1,2,3 mod 4 go to [a, a+13/4), [a+9/4, a+10/4),
    [a+6/4, a+7/4), [a+3/4, a+1); affine on each block."""
    return Periodic(Fraction(4), EXAMPLE_F_PATTERN)


def example_g() -> AffineConjugate:
    """g(x) = f(x - 2) + 2."""
    return AffineConjugate(example_f(), Fraction(2))


def example_action() -> Action:
    return Action({Gen("f"): example_f(), Gen("g"): example_g()})
