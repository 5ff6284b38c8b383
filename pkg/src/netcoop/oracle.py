"""Brute-force cross-checks between the engine and the closed forms.

The engine, enumerated over every activation order, is treated as ground
truth; formulas from :mod:`netcoop.analysis` are the claims under test. Each
check keeps both exact values so a failure shows what disagreed.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from ._format import exact
from .analysis import average_deviation_payoff_closed, cooperation_bound, deviation_payoff
from .engine import (
    EXHAUSTIVE_LIMIT,
    Exhaustive,
    GoMessage,
    Omniscient,
    TooManyPermutations,
    action_pairs,
    deviator_family,
    schedules,
    tally_outcomes,
)
from .game import NotAPrisonersDilemma, PDPayoffs, as_fraction, stage_payoff
from .network import DelayGraph, complete, diameter

__all__ = [
    "TooLarge",
    "Check",
    "VerificationReport",
    "DeviationSearch",
    "verify_vt_on_uniform_graph",
    "verify_theorem_boundary",
    "best_deviation_search",
]


class TooLarge(TooManyPermutations):
    pass


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    lhs: Fraction
    rhs: Fraction
    detail: str = ""

    def to_dict(self) -> dict:
        d = {"name": self.name, "pass": self.passed, "lhs": exact(self.lhs), "rhs": exact(self.rhs)}
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass(frozen=True)
class VerificationReport:
    config: dict
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def all_passed(self) -> bool:
        return all(ch.passed for ch in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [ch for ch in self.checks if not ch.passed]

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "all_passed": self.all_passed,
            "checks": [ch.to_dict() for ch in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def raise_for_failures(self) -> None:
        if self.failures:
            lines = [f"{ch.name}: lhs={exact(ch.lhs)} rhs={exact(ch.rhs)} {ch.detail}".rstrip()
                     for ch in self.failures]
            raise AssertionError("verification failed:\n  " + "\n  ".join(lines))


def _guard(n: int) -> None:
    if not 2 <= n <= EXHAUSTIVE_LIMIT:
        raise TooLarge(f"oracle enumerates all orders; need 2 <= n <= {EXHAUSTIVE_LIMIT}, got {n}")


def _payoffs(a, b, c) -> PDPayoffs:
    try:
        return PDPayoffs(a, b, c)
    except NotAPrisonersDilemma:
        # boundary probes may sit at or below b == c
        return PDPayoffs.unchecked(a, b, c)


def _deviator_total(p: PDPayoffs, pairs: Iterable) -> Fraction:
    return sum((stage_payoff(p, dev, trig)[0] for dev, trig in pairs), Fraction(0))


def _config(**kw) -> dict:
    return {k: exact(v) if isinstance(v, Fraction) else v for k, v in kw.items()}


def verify_vt_on_uniform_graph(n: int, delta: int, p: PDPayoffs) -> VerificationReport:
    """Every order, every start round: engine total == closed-form v(t).

    Uses the complete graph with uniform delay ``delta``, whose diameter is
    ``delta``.
    """
    _guard(n)
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    g = complete(n, delta)
    tau = diameter(g)
    checks = []
    for t in range(1, n + 1):
        want = deviation_payoff(t, n, tau, p)
        mismatch = None
        count = 0
        for order in schedules(n, Exhaustive()):
            got = _deviator_total(p, action_pairs(g, order, Omniscient(t)))
            count += 1
            if got != want and mismatch is None:
                mismatch = (order, got)
        if mismatch is None:
            checks.append(Check(f"v_t t={t}", True, want, want, f"{count} orders"))
        else:
            order, got = mismatch
            checks.append(Check(f"v_t t={t}", False, got, want, f"first mismatch on order {list(order)}"))
    return VerificationReport(
        _config(suite="vt", n=n, delta=delta, tau=tau, a=p.a, b=p.b, c=p.c), tuple(checks)
    )


def verify_theorem_boundary(n: int, tau: int, a, c) -> VerificationReport:
    """Probe the cooperation bound with the exhaustive engine.

    At ``b = bound`` the mean deviator total over start rounds and orders must
    equal ``n c`` exactly; nudging ``b`` by ``(c - a) / 100`` either way must
    move it strictly to the matching side. For ``tau = n - 1`` the bound is
    ``c`` itself and the report flags the degenerate boundary.
    """
    _guard(n)
    if not 0 <= tau <= n - 1:
        raise ValueError(f"need 0 <= tau <= n - 1, got tau={tau}, n={n}")
    a, c = as_fraction(a), as_fraction(c)
    b_star = cooperation_bound(n, tau, a, c)
    eps = (c - a) / 100
    n_c = n * c
    degenerate = tau == n - 1

    checks = []
    if degenerate:
        checks.append(Check("degenerate boundary: bound == c", b_star == c, b_star, c,
                            "no strict Prisoner's Dilemma sustains cooperation"))
    else:
        checks.append(Check("bound > c", b_star > c, b_star, c))

    g = complete(n, tau)
    tally = tally_outcomes(g, deviator_family("omniscient", n), schedules(n, Exhaustive()))

    def engine_mean(b: Fraction) -> Fraction:
        priced = tally.price(_payoffs(a, b, c))
        avgs = priced.deviator_averages
        return sum(avgs, Fraction(0)) / len(avgs)

    at = engine_mean(b_star)
    checks.append(Check("engine mean at bound == n*c", at == n_c, at, n_c))
    closed = average_deviation_payoff_closed(n, tau, _payoffs(a, b_star, c))
    checks.append(Check("engine mean == closed form", at == closed, at, closed))
    above = engine_mean(b_star + eps)
    checks.append(Check("bound + eps: engine mean > n*c", above > n_c, above, n_c))
    below = engine_mean(b_star - eps)
    checks.append(Check("bound - eps: engine mean < n*c", below < n_c, below, n_c))

    return VerificationReport(
        _config(suite="boundary", n=n, tau=tau, a=a, c=c, bound_b=b_star, epsilon=eps,
                degenerate=degenerate),
        tuple(checks),
    )


@dataclass(frozen=True)
class DeviationSearch:
    family: str
    best_value: Fraction
    argmax: str
    by_location: tuple[Fraction, ...]
    n_c: Fraction
    by_round: tuple[Fraction, ...] = ()

    @property
    def profitable(self) -> bool:
        return self.best_value > self.n_c

    def to_dict(self) -> dict:
        d = {
            "family": self.family,
            "best_value": exact(self.best_value),
            "argmax": self.argmax,
            "n_c": exact(self.n_c),
            "profitable": self.profitable,
            "by_location": [exact(v) for v in self.by_location],
        }
        if self.by_round:
            d["by_round"] = [exact(v) for v in self.by_round]
        return d


def best_deviation_search(g: DelayGraph, p: PDPayoffs, family: str = "omniscient") -> DeviationSearch:
    """Best schedule-averaged deviator total within one deviation family.

    The deviator chooses a location ``l``. For ``"go"`` it defects there and
    relays a go signal; for ``"omniscient"`` it defects at every location from
    the round ``l`` activates onward. Averages are over all orders, so the
    start round is uniform, as the deviator cannot see the global clock.
    ``by_round`` (omniscient only) conditions on the start round instead.
    """
    n = g.node_count
    _guard(n)
    if family not in ("omniscient", "go"):
        raise ValueError(f"family must be 'omniscient' or 'go', got {family!r}")
    by_loc = [Counter() for _ in range(n)]
    by_round = [Counter() for _ in range(n)]
    orders = schedules(n, Exhaustive())
    for order in orders:
        if family == "omniscient":
            for t in range(1, n + 1):
                pairs = action_pairs(g, order, Omniscient(t))
                by_loc[order[t - 1]].update(pairs)
                by_round[t - 1].update(pairs)
        else:
            for loc in range(n):
                by_loc[loc].update(action_pairs(g, order, GoMessage(loc)))

    def price(cnt: Counter) -> Fraction:
        total = sum((k * stage_payoff(p, *pair)[0] for pair, k in cnt.items()), Fraction(0))
        return total / len(orders)

    loc_values = tuple(price(cnt) for cnt in by_loc)
    best = max(loc_values)
    arg = loc_values.index(best)
    label = f"{family}@location {arg}"
    rounds = tuple(price(cnt) for cnt in by_round) if family == "omniscient" else ()
    return DeviationSearch(family, best, label, loc_values, n * p.c, rounds)
