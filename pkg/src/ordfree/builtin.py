"""Built-in example objects shared by the CLI, tests and benchmarks."""

from __future__ import annotations

from fractions import Fraction
from typing import List

from .dirprod import FinSupportElement
from .freegroup import Action, Gen, example_action, example_g, pingpong_blocksets
from .order import Frame
from .pingpong import PingPongPair, PingPongTable
from .plmap import FinitePL, Periodic

F, G = Gen("f"), Gen("g")

# first block sent onto [a, a+2) instead of [a, a+13/4)
MUTATED_F_PATTERN = FinitePL(
    (
        (Fraction(0), Fraction(0)),
        (Fraction(1), Fraction(2)),
        (Fraction(2), Fraction(11, 4)),
        (Fraction(3), Fraction(7, 2)),
        (Fraction(4), Fraction(4)),
    )
)


def example11_table() -> PingPongTable:
    """A_f = 0 mod 4, B_f = 3 mod 4, A_g = 2 mod 4, B_g = 1 mod 4 on the unit integer frame."""
    af, bf, ag, bg = pingpong_blocksets(Frame.unit())
    return PingPongTable([PingPongPair(af, bf, F), PingPongPair(ag, bg, G)], example_action())


def mutated_table() -> PingPongTable:
    af, bf, ag, bg = pingpong_blocksets(Frame.unit())
    action = Action({F: Periodic(Fraction(4), MUTATED_F_PATTERN), G: example_g()})
    return PingPongTable([PingPongPair(af, bf, F), PingPongPair(ag, bg, G)], action)


_C4 = (1, 2, 3, 0)
_C4B = (2, 3, 1, 0)
_C3 = (1, 2, 0, 3)
_C3B = (0, 2, 3, 1)


def dirprod_corpus() -> List[FinSupportElement]:
    """Six order-12 elements of the direct sum of four copies of Sym(4)."""
    return [
        FinSupportElement(c)
        for c in (
            {0: _C4, 1: _C3},
            {1: _C4, 2: _C3},
            {2: _C4, 3: _C3},
            {3: _C4, 0: _C3B},
            {0: _C3, 2: _C4B},
            {1: _C3B, 3: _C4B},
        )
    ]


def shared_coordinate_instance(n: int = 5) -> List[FinSupportElement]:
    """n elements with the same 3-cycle at coordinate 0 and pairwise disjoint tails."""
    return [FinSupportElement({0: (1, 2, 0), k: (1, 0, 2)}) for k in range(1, n + 1)]
