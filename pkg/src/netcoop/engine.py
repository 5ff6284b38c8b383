"""Round-by-round execution of the distributed Prisoner's Dilemma.

One location activates per round. The non-deviating player runs the trigger
strategy: cooperate until an alarm is usable at the active location, then
defect there and everywhere afterwards. The alarm starts at the message stage
of the round in which a deviation is first observed and is relayed over the
network without waiting for activations.

Delivery convention: a signal sent at the message stage of round ``t`` from
location ``o`` can influence the action at location ``i`` from round
``t + dist[o][i] + 1`` onward. With this convention a deviator who defects
from round ``t`` on a network of diameter ``tau`` collects the temptation
payoff at most ``tau + 1`` times.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from ._format import exact
from .game import Action, C, D, PDPayoffs, stage_payoff
from .network import DelayGraph

__all__ = [
    "EngineError",
    "ScheduleMismatch",
    "TooManyPermutations",
    "BadDeviator",
    "Schedule",
    "NoDeviation",
    "Omniscient",
    "GoMessage",
    "DeviatorModel",
    "AlarmLog",
    "RoundRecord",
    "SimResult",
    "Exhaustive",
    "Sample",
    "OutcomeTally",
    "ExpectedPayoffs",
    "EXHAUSTIVE_LIMIT",
    "alarm_usable_rounds",
    "action_pairs",
    "run",
    "schedules",
    "deviator_family",
    "tally_outcomes",
    "expected_payoffs",
]

EXHAUSTIVE_LIMIT = 8


class EngineError(ValueError):
    pass


class ScheduleMismatch(EngineError):
    pass


class TooManyPermutations(EngineError):
    pass


class BadDeviator(EngineError):
    pass


@dataclass(frozen=True)
class Schedule:
    """Activation order; ``order[r - 1]`` is the location active in round ``r``."""

    order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(int(i) for i in self.order)
        if sorted(order) != list(range(len(order))):
            raise ScheduleMismatch(f"{order} is not a permutation of 0..{len(order) - 1}")
        object.__setattr__(self, "order", order)

    def __len__(self) -> int:
        return len(self.order)

    @classmethod
    def identity(cls, n: int) -> "Schedule":
        return cls(tuple(range(n)))

    def round_of(self, location: int) -> int:
        return self.order.index(location) + 1


@dataclass(frozen=True)
class NoDeviation:
    def __str__(self) -> str:
        return "none"


@dataclass(frozen=True)
class Omniscient:
    """Defect at every active location from global round ``start_round`` on."""

    start_round: int

    def __str__(self) -> str:
        return f"omniscient:{self.start_round}"


@dataclass(frozen=True)
class GoMessage:
    """Defect at ``trigger_location``, then wherever the relayed go signal has arrived."""

    trigger_location: int

    def __str__(self) -> str:
        return f"go:{self.trigger_location}"


DeviatorModel = Union[NoDeviation, Omniscient, GoMessage]


@dataclass(frozen=True)
class AlarmLog:
    origin_location: int
    origin_round: int
    usable_from: tuple[int, ...]

    def usable_at(self, location: int, rnd: int) -> bool:
        return self.usable_from[location] <= rnd

    def to_dict(self) -> dict:
        return {
            "origin_location": self.origin_location,
            "origin_round": self.origin_round,
            "usable_from": {str(i): r for i, r in enumerate(self.usable_from)},
        }


@dataclass(frozen=True)
class RoundRecord:
    round: int
    location: int
    actions: tuple[Action, Action]
    payoffs: tuple[Fraction, Fraction]


@dataclass(frozen=True)
class SimResult:
    totals: tuple[Fraction, Fraction]
    rounds: tuple[RoundRecord, ...]
    alarm_log: AlarmLog | None = None
    go_log: AlarmLog | None = None

    def total(self, player: int) -> Fraction:
        return self.totals[player - 1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["round", "location", "action_p1", "action_p2", "pay_p1", "pay_p2"])
        for rec in self.rounds:
            w.writerow([
                rec.round, rec.location, rec.actions[0], rec.actions[1],
                exact(rec.payoffs[0]), exact(rec.payoffs[1]),
            ])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "totals": [exact(x) for x in self.totals],
            "rounds": [
                {
                    "round": rec.round,
                    "location": rec.location,
                    "actions": [str(a) for a in rec.actions],
                    "payoffs": [exact(x) for x in rec.payoffs],
                }
                for rec in self.rounds
            ],
            "alarm_log": self.alarm_log.to_dict() if self.alarm_log else None,
            "go_log": self.go_log.to_dict() if self.go_log else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _usable_from(dist_row: Sequence[int], origin_round: int) -> tuple[int, ...]:
    return tuple(origin_round + int(d) + 1 for d in dist_row)


def alarm_usable_rounds(g: DelayGraph, origin: int, origin_round: int) -> AlarmLog:
    """First round at which an alarm sent from ``origin`` can steer each location."""
    if not 0 <= origin < g.node_count:
        raise EngineError(f"origin {origin} not a location of a {g.node_count}-node graph")
    if origin_round < 1:
        raise EngineError(f"origin_round must be >= 1, got {origin_round}")
    return AlarmLog(origin, origin_round, _usable_from(g.delays.rows[origin], origin_round))


def _check_deviator(deviator: DeviatorModel, n: int) -> None:
    if isinstance(deviator, Omniscient):
        if not 1 <= deviator.start_round <= n:
            raise BadDeviator(f"start_round {deviator.start_round} outside 1..{n}")
    elif isinstance(deviator, GoMessage):
        if not 0 <= deviator.trigger_location < n:
            raise BadDeviator(f"trigger_location {deviator.trigger_location} outside 0..{n - 1}")
    elif not isinstance(deviator, NoDeviation):
        raise BadDeviator(f"unknown deviator model {deviator!r}")


def _play(rows, order, deviator):
    """Core loop. Returns ``(pairs, alarm, go)``.

    ``pairs`` holds ``(deviator_action, trigger_action)`` per round; ``alarm``
    and ``go`` are ``(origin, round, usable_from)`` or ``None``.
    """
    alarm = go = None
    alarm_from = go_from = None
    pairs = []
    omni_start = deviator.start_round if isinstance(deviator, Omniscient) else None
    go_loc = deviator.trigger_location if isinstance(deviator, GoMessage) else None

    for r, loc in enumerate(order, 1):
        trig = D if alarm_from is not None and alarm_from[loc] <= r else C

        if omni_start is not None:
            dev = D if r >= omni_start else C
        elif go_loc is not None:
            if loc == go_loc:
                dev = D
                go_from = _usable_from(rows[loc], r)
                go = (loc, r, go_from)
            else:
                dev = D if go_from is not None and go_from[loc] <= r else C
        else:
            # both sides run the trigger strategy; nothing ever sets an alarm
            dev = trig
        pairs.append((dev, trig))

        # message stage: the first unexpected defection starts the alarm
        if alarm is None and dev is D:
            alarm_from = _usable_from(rows[loc], r)
            alarm = (loc, r, alarm_from)
    return pairs, alarm, go


def action_pairs(g: DelayGraph, order: Sequence[int], deviator: DeviatorModel) -> list[tuple[Action, Action]]:
    """``(deviator_action, trigger_action)`` for each round, without payoffs."""
    if len(order) != g.node_count:
        raise ScheduleMismatch(f"order of length {len(order)} on {g.node_count} locations")
    _check_deviator(deviator, g.node_count)
    return _play(g.delays.rows, order, deviator)[0]


def run(
    g: DelayGraph,
    p: PDPayoffs,
    s: Schedule | Sequence[int],
    deviator: DeviatorModel = NoDeviation(),
    deviating_player: int = 1,
) -> SimResult:
    """Play one full game of ``n`` rounds and return the complete trace."""
    if not isinstance(s, Schedule):
        s = Schedule(tuple(s))
    if len(s) != g.node_count:
        raise ScheduleMismatch(f"schedule has {len(s)} entries, graph has {g.node_count} locations")
    if deviating_player not in (1, 2):
        raise BadDeviator(f"deviating_player must be 1 or 2, got {deviating_player!r}")
    _check_deviator(deviator, g.node_count)

    pairs, alarm, go = _play(g.delays.rows, s.order, deviator)
    records = []
    tot1 = tot2 = Fraction(0)
    for r, (loc, (dev, trig)) in enumerate(zip(s.order, pairs), 1):
        acts = (dev, trig) if deviating_player == 1 else (trig, dev)
        pay = stage_payoff(p, *acts)
        tot1 += pay[0]
        tot2 += pay[1]
        records.append(RoundRecord(r, loc, acts, pay))
    return SimResult(
        totals=(tot1, tot2),
        rounds=tuple(records),
        alarm_log=AlarmLog(*alarm) if alarm else None,
        go_log=AlarmLog(*go) if go else None,
    )


# -- expectations over activation orders ---------------------------------------


@dataclass(frozen=True)
class Exhaustive:
    """All ``n!`` activation orders, in lexicographic order."""


@dataclass(frozen=True)
class Sample:
    """``k`` orders drawn uniformly from one seeded generator."""

    k: int
    seed: int

    def __post_init__(self):
        if self.k < 1:
            raise EngineError(f"Sample requires k >= 1, got {self.k}")


def schedules(n: int, source: Exhaustive | Sample) -> list[tuple[int, ...]]:
    if isinstance(source, Exhaustive):
        if n > EXHAUSTIVE_LIMIT:
            raise TooManyPermutations(
                f"exhaustive enumeration limited to n <= {EXHAUSTIVE_LIMIT} "
                f"({math.factorial(EXHAUSTIVE_LIMIT)} orders); got n = {n}"
            )
        return list(itertools.permutations(range(n)))
    rng = np.random.default_rng(source.seed)
    return [tuple(rng.permutation(n).tolist()) for _ in range(source.k)]


def deviator_family(family: str, n: int) -> tuple[DeviatorModel, ...]:
    if family == "none":
        return (NoDeviation(),)
    if family == "omniscient":
        return tuple(Omniscient(t) for t in range(1, n + 1))
    if family == "go":
        return tuple(GoMessage(loc) for loc in range(n))
    raise BadDeviator(f"unknown deviator family {family!r}; expected none, omniscient or go")


_OUTCOMES = ((D, D), (D, C), (C, D), (C, C))


@dataclass(frozen=True)
class OutcomeTally:
    """Counts of (deviator, trigger) action pairs, summed over schedules.

    Pricing the counts under a payoff triple gives exact averages; the same
    tally can be priced under several triples without replaying the games.
    """

    configs: tuple[DeviatorModel, ...]
    counts: tuple[dict, ...]
    schedule_count: int
    deviating_player: int = 1

    def price(self, p: PDPayoffs) -> "ExpectedPayoffs":
        avgs = []
        for cnt in self.counts:
            dev_total = trig_total = Fraction(0)
            for pair in _OUTCOMES:
                k = cnt.get(pair, 0)
                if k:
                    pd, pt = stage_payoff(p, *pair)
                    dev_total += k * pd
                    trig_total += k * pt
            dev_avg = dev_total / self.schedule_count
            trig_avg = trig_total / self.schedule_count
            avgs.append((dev_avg, trig_avg) if self.deviating_player == 1 else (trig_avg, dev_avg))
        return ExpectedPayoffs(self.configs, tuple(avgs), self.schedule_count, self.deviating_player)


@dataclass(frozen=True)
class ExpectedPayoffs:
    configs: tuple[DeviatorModel, ...]
    averages: tuple[tuple[Fraction, Fraction], ...]
    schedule_count: int
    deviating_player: int = 1

    def deviator_average(self, i: int) -> Fraction:
        return self.averages[i][self.deviating_player - 1]

    @property
    def deviator_averages(self) -> tuple[Fraction, ...]:
        return tuple(avg[self.deviating_player - 1] for avg in self.averages)

    @property
    def mean(self) -> tuple[Fraction, Fraction]:
        """Average over configurations, each weighted equally."""
        k = len(self.averages)
        return (
            sum((x for x, _ in self.averages), Fraction(0)) / k,
            sum((y for _, y in self.averages), Fraction(0)) / k,
        )

    def to_dict(self) -> dict:
        return {
            "schedule_count": self.schedule_count,
            "deviating_player": self.deviating_player,
            "configs": [
                {"deviator": str(cfg), "avg_p1": exact(a1), "avg_p2": exact(a2)}
                for cfg, (a1, a2) in zip(self.configs, self.averages)
            ],
            "mean": [exact(x) for x in self.mean],
        }


def tally_outcomes(
    g: DelayGraph,
    configs: Iterable[DeviatorModel],
    orders: Iterable[Sequence[int]],
    deviating_player: int = 1,
) -> OutcomeTally:
    configs = tuple(configs)
    for cfg in configs:
        _check_deviator(cfg, g.node_count)
    rows = g.delays.rows
    counts = [Counter() for _ in configs]
    n_orders = 0
    for order in orders:
        if len(order) != g.node_count:
            raise ScheduleMismatch(f"order of length {len(order)} on {g.node_count} locations")
        n_orders += 1
        for cnt, cfg in zip(counts, configs):
            pairs, _, _ = _play(rows, order, cfg)
            cnt.update(pairs)
    if n_orders == 0:
        raise EngineError("no schedules supplied")
    return OutcomeTally(configs, tuple(dict(c) for c in counts), n_orders, deviating_player)


def expected_payoffs(
    g: DelayGraph,
    p: PDPayoffs,
    family: str = "none",
    source: Exhaustive | Sample = Exhaustive(),
    deviating_player: int = 1,
) -> ExpectedPayoffs:
    """Average per-player totals over activation orders, per deviator configuration.

    ``family`` selects the configurations: ``"none"`` (one), ``"omniscient"``
    (start round ``1..n``) or ``"go"`` (trigger location ``0..n-1``).
    """
    orders = schedules(g.node_count, source)
    configs = deviator_family(family, g.node_count)
    return tally_outcomes(g, configs, orders, deviating_player).price(p)
