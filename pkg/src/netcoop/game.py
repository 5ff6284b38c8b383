"""The local Prisoner's Dilemma played at every location.

Payoff table (row player first; the sucker payoff is fixed at 0)::

          D       C
    D   (a, a)  (b, 0)
    C   (0, b)  (c, c)

with ``b > c > a > 0``. Values are kept as :class:`fractions.Fraction`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

__all__ = [
    "Action",
    "C",
    "D",
    "NotAPrisonersDilemma",
    "PDPayoffs",
    "as_fraction",
    "random_payoffs",
    "stage_payoff",
    "validate_payoffs",
]


class Action(enum.Enum):
    C = "C"
    D = "D"

    def __str__(self) -> str:
        return self.value


C = Action.C
D = Action.D


class NotAPrisonersDilemma(ValueError):
    pass


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions, and decimal/ratio strings exactly.

    Floats are rejected: ``0.1`` has no exact binary value and silently
    accepting it would defeat exact boundary checks.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a payoff")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class PDPayoffs:
    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        _check_chain(self.a, self.b, self.c)

    @classmethod
    def unchecked(cls, a, b, c) -> "PDPayoffs":
        """Build a triple without the ordering check.

        Only for boundary probes such as ``b == c``, where the payoff
        arithmetic is still meaningful though the game is no longer a
        strict Prisoner's Dilemma.
        """
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", as_fraction(a))
        object.__setattr__(obj, "b", as_fraction(b))
        object.__setattr__(obj, "c", as_fraction(c))
        return obj

    def replace(self, *, a=None, b=None, c=None, check: bool = True) -> "PDPayoffs":
        new = (
            self.a if a is None else a,
            self.b if b is None else b,
            self.c if c is None else c,
        )
        return PDPayoffs(*new) if check else PDPayoffs.unchecked(*new)

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.a, self.b, self.c


def _check_chain(a: Fraction, b: Fraction, c: Fraction) -> None:
    if not b > c:
        raise NotAPrisonersDilemma(f"b > c violated (b={b}, c={c})")
    if not c > a:
        raise NotAPrisonersDilemma(f"c > a violated (c={c}, a={a})")
    if not a > 0:
        raise NotAPrisonersDilemma(f"a > 0 violated (a={a})")


def validate_payoffs(a, b, c) -> PDPayoffs:
    return PDPayoffs(a, b, c)


def stage_payoff(p: PDPayoffs, row: Action, col: Action) -> tuple[Fraction, Fraction]:
    if row is D:
        return (p.a, p.a) if col is D else (p.b, Fraction(0))
    return (Fraction(0), p.b) if col is D else (p.c, p.c)


def random_payoffs(rng, max_den: int = 12, max_num: int = 60) -> PDPayoffs:
    """Draw a strict Prisoner's Dilemma triple with small rational entries.

    ``rng`` is a :class:`numpy.random.Generator`.
    """
    while True:
        vals = sorted({
            Fraction(int(rng.integers(1, max_num + 1)), int(rng.integers(1, max_den + 1)))
            for _ in range(3)
        })
        if len(vals) == 3:
            a, c, b = vals
            return PDPayoffs(a, b, c)
