"""Ping-pong certificates for periodic generator tables.

For each pair the certifier checks both ``B_i^c <= f_i(A_i)`` and the
equivalent ``f_i(A_i^c) <= B_i`` by exact interval images over one common
period, plus pairwise disjointness of all sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from . import __version__
from .freegroup import Action, Gen
from .order import (
    AffineRule,
    BlockSet,
    Cofinite,
    Finite,
    Frame,
    Residue,
    UnsupportedSelector,
    format_rational,
    selector_from_json,
)
from .plmap import MapDescriptor, map_period


class PingPongError(ValueError):
    pass


class IncommensuratePeriods(PingPongError):
    pass


@dataclass(frozen=True)
class PingPongPair:
    A: BlockSet
    B: BlockSet
    gen: Gen


@dataclass
class PingPongTable:
    pairs: List[PingPongPair]
    action: Action

    def __post_init__(self):
        if not self.pairs:
            raise PingPongError("table needs at least one pair")
        frames = {p.A.frame for p in self.pairs} | {p.B.frame for p in self.pairs}
        if len(frames) != 1:
            raise PingPongError("all sets of a table must share one frame")

    @property
    def frame(self) -> Frame:
        return self.pairs[0].A.frame

    def labelled_sets(self) -> List[Tuple[str, BlockSet]]:
        out = []
        for p in self.pairs:
            out.append((f"A[{p.gen}]", p.A))
            out.append((f"B[{p.gen}]", p.B))
        return out

    def to_json(self) -> dict:
        return {
            "frame": self.frame.to_json(),
            "pairs": [{"gen": str(p.gen), "A": p.A.selector.to_json(), "B": p.B.selector.to_json()} for p in self.pairs],
            "action": self.action.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PingPongTable":
        frame = Frame.from_json(obj["frame"])
        pairs = [
            PingPongPair(
                BlockSet(frame, selector_from_json(p["A"])),
                BlockSet(frame, selector_from_json(p["B"])),
                Gen.parse(p["gen"]),
            )
            for p in obj["pairs"]
        ]
        return cls(pairs, Action.from_json(obj["action"]))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: Optional[dict] = None
    note: str = ""

    def to_json(self) -> dict:
        d = {"check": self.name, "verdict": "pass" if self.passed else "fail"}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.note:
            d["note"] = self.note
        return d


def check_disjoint(t: PingPongTable) -> CheckResult:
    sets = t.labelled_sets()
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            (la, a), (lb, b) = sets[i], sets[j]
            try:
                k = a.common_block(b)
            except UnsupportedSelector as exc:
                return CheckResult("disjoint", False, None, f"unsupported: {exc}")
            if k is not None:
                return CheckResult("disjoint", False, {"sets": [la, lb], "block": k})
    return CheckResult("disjoint", True)


def _qlcm(p: Fraction, q: Fraction) -> Fraction:
    a, b = p.numerator * q.denominator, q.numerator * p.denominator
    return Fraction(a * b // math.gcd(a, b), p.denominator * q.denominator)


def _selector_period(sel) -> Tuple[int, List[int]]:
    """(period in blocks, indices that break periodicity)."""
    if isinstance(sel, Residue):
        return sel.modulus, sorted(sel.excluded)
    if isinstance(sel, Finite):
        return 1, sorted(sel.indices)
    if isinstance(sel, Cofinite):
        return 1, sorted(sel.excluded)
    raise UnsupportedSelector("covering checks need residue or finite selectors")


def _window(A: BlockSet, B: BlockSet, f: MapDescriptor) -> Tuple[range, str]:
    frame = A.frame
    if A.frame != B.frame:
        raise PingPongError("A and B must share a frame")
    if not (isinstance(frame.rule, AffineRule) and frame.coterminal):
        raise IncommensuratePeriods("covering checks need an arithmetic frame indexed by Z")
    step = frame.rule.step * frame.stride
    ma, sa = _selector_period(A.selector)
    mb, sb = _selector_period(B.selector)
    sel_blocks = ma * mb // math.gcd(ma, mb)
    specials = sa + sb
    p = map_period(f)
    if p is not None:
        total = _qlcm(p, step * sel_blocks)
        nblocks = total / step
        if nblocks.denominator != 1:
            raise IncommensuratePeriods(f"map period {p} and frame step {step} are incommensurate")
        L = int(nblocks)
        note = f"window of {L} blocks = lcm(map period {format_rational(p)}, {sel_blocks} blocks); exact by translation equivariance"
        if specials:
            return range(min(specials) - L, max(specials) + L + 1), note
        return range(0, L), note
    sup = f.declared_support()
    lo_i, hi_i = 0, 0
    for r in sup:
        if not hasattr(r, "lower") or r.lower is None or r.upper is None:
            raise IncommensuratePeriods("map is neither periodic nor boundedly supported")
        lo_i = min(lo_i, frame.locate(r.lower))
        hi_i = max(hi_i, frame.locate(r.upper))
    L = sel_blocks
    pts = specials + [lo_i, hi_i]
    note = f"bounded support; window covers support and specials with {L}-block margins"
    return range(min(pts) - L, max(pts) + L + 1), note


def _runs(bs: BlockSet, idx: range, complement: bool) -> List[Tuple[int, int]]:
    runs = []
    for i in idx:
        inside = bs.has_block(i)
        if inside == complement:
            continue
        if runs and runs[-1][1] == i:
            runs[-1] = (runs[-1][0], i + 1)
        else:
            runs.append((i, i + 1))
    return runs


def _first_gap(target: BlockSet, u: Fraction, v: Fraction) -> Optional[Tuple[Fraction, int]]:
    """First point of [u, v) lying in a block outside ``target``."""
    fr = target.frame
    j = fr.locate(u)
    while fr.point(j) < v:
        if not target.has_block(j):
            return max(u, fr.point(j)), j
        j += 1
    return None


def check_covering(A: BlockSet, B: BlockSet, f: MapDescriptor, form: str = "image") -> CheckResult:
    """``form='image'``: f(A^c) <= B.  ``form='preimage'``: B^c <= f(A)."""
    idx, note = _window(A, B, f)
    fr = A.frame
    if form == "image":
        for i0, i1 in _runs(A, idx, complement=True):
            u, v = f(fr.point(i0)), f(fr.point(i1))
            gap = _first_gap(B, u, v)
            if gap is not None:
                x, j = gap
                return CheckResult(
                    "covering[f(A^c)<=B]",
                    False,
                    {"point": format_rational(x), "preimage": format_rational(f.inverse_at(x)), "block": j},
                    note,
                )
        return CheckResult("covering[f(A^c)<=B]", True, None, note)
    if form == "preimage":
        for i0, i1 in _runs(B, idx, complement=True):
            u, v = f.inverse_at(fr.point(i0)), f.inverse_at(fr.point(i1))
            gap = _first_gap(A, u, v)
            if gap is not None:
                x, j = gap
                y = f(x)
                return CheckResult(
                    "covering[B^c<=f(A)]",
                    False,
                    {"point": format_rational(y), "preimage": format_rational(x), "block": fr.locate(y)},
                    note,
                )
        return CheckResult("covering[B^c<=f(A)]", True, None, note)
    raise ValueError(f"unknown form {form!r}")


def check_base_point(t: PingPongTable) -> CheckResult:
    """Informational: is some block outside every A_i and B_i?"""
    sets = [s for _, s in t.labelled_sets()]
    mods = []
    for s in sets:
        try:
            m, specials = _selector_period(s.selector)
        except UnsupportedSelector:
            return CheckResult("base_point", False, None, "undecidable for these selectors (informational)")
        mods.append(m)
    L = 1
    for m in mods:
        L = L * m // math.gcd(L, m)
    specials = []
    for s in sets:
        specials.extend(_selector_period(s.selector)[1])
    start = (max(specials) + 1) if specials else 0
    for i in range(start, start + L):
        if not any(s.has_block(i) for s in sets):
            return CheckResult("base_point", True, {"point": format_rational(t.frame.point(i)), "block": i})
    return CheckResult(
        "base_point",
        False,
        None,
        "sets cover the line; informational only, freeness evidence comes from the witness corpus",
    )


@dataclass
class PingPongCertificate:
    table: PingPongTable
    checks: List[CheckResult] = field(default_factory=list)
    verdict: str = "refuted"
    counterexample: Optional[dict] = None

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def to_json(self) -> dict:
        d = {
            "tool": "ordfree",
            "version": __version__,
            "verdict": self.verdict,
            "table": self.table.to_json(),
            "checks": [c.to_json() for c in self.checks],
        }
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        return d


def certify(t: PingPongTable) -> PingPongCertificate:
    cert = PingPongCertificate(t)
    disj = check_disjoint(t)
    cert.checks.append(disj)
    ok = disj.passed
    if not disj.passed:
        cert.counterexample = {"check": "disjoint", **(disj.witness or {})}
    for p in t.pairs:
        f = t.action[p.gen]
        img = check_covering(p.A, p.B, f, "image")
        pre = check_covering(p.A, p.B, f, "preimage")
        img = CheckResult(f"{img.name}[{p.gen}]", img.passed, img.witness, img.note)
        pre = CheckResult(f"{pre.name}[{p.gen}]", pre.passed, pre.witness, pre.note)
        cert.checks.extend([img, pre])
        if img.passed != pre.passed:
            raise AssertionError(f"covering forms disagree for {p.gen}; map is not a bijection of the line")
        if not img.passed:
            ok = False
            if cert.counterexample is None:
                cert.counterexample = {"check": img.name, **img.witness}
    cert.checks.append(check_base_point(t))
    cert.verdict = "certified" if ok else "refuted"
    return cert
