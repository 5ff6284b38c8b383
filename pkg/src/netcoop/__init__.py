"""Cooperation in distributed Prisoner's Dilemma games over delay-weighted networks."""

from .analysis import (
    EquilibriumReport,
    FullDelay,
    NoDelay,
    Proportional,
    ScaleFreeApprox,
    average_deviation_payoff_closed,
    average_deviation_payoff_direct,
    bound_fraction,
    check_sustainability,
    cooperation_bound,
    deviation_payoff,
    regime_bound,
)
from .engine import (
    Exhaustive,
    GoMessage,
    NoDeviation,
    Omniscient,
    Sample,
    Schedule,
    SimResult,
    alarm_usable_rounds,
    expected_payoffs,
    run,
)
from .game import Action, PDPayoffs, stage_payoff, validate_payoffs
from .network import DelayGraph, DelayMatrix, all_pairs_delay, build_graph, diameter, generate
from .oracle import best_deviation_search, verify_theorem_boundary, verify_vt_on_uniform_graph

__version__ = "0.1.0"
