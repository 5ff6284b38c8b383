"""Closed-form deviation payoffs and the cooperation bound, in exact arithmetic.

Notation: ``n`` locations (= rounds), ``tau`` the network diameter in rounds,
payoffs ``(a, b, c)`` as in :mod:`netcoop.game`.

A player who starts defecting in round ``t`` collects ``c`` before ``t``,
the temptation ``b`` for at most ``tau + 1`` rounds while the alarm is in
flight, and ``a`` once punishment reaches every remaining location::

    v(t) = (t - 1) c + min(tau + 1, n - t + 1) b + max(n - t - tau, 0) a

Full cooperation is sustainable when the mean of ``v(t)`` over ``t`` does not
exceed ``n c``, which rearranges to ``b <= cooperation_bound(n, tau, a, c)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ._format import approx, exact
from .game import NotAPrisonersDilemma, PDPayoffs, as_fraction

__all__ = [
    "AnalysisError",
    "BadRound",
    "TauOutOfRange",
    "TauOutOfClosedFormRange",
    "BadAlpha",
    "EquilibriumReport",
    "NoDelay",
    "FullDelay",
    "Proportional",
    "ScaleFreeApprox",
    "RegimeSpec",
    "deviation_payoff",
    "average_deviation_payoff_direct",
    "average_deviation_payoff_closed",
    "bound_fraction",
    "cooperation_bound",
    "cooperation_bound_pre_factored",
    "check_sustainability",
    "regime_bound",
]


class AnalysisError(ValueError):
    pass


class BadRound(AnalysisError):
    pass


class TauOutOfRange(AnalysisError):
    pass


class TauOutOfClosedFormRange(TauOutOfRange):
    pass


class BadAlpha(AnalysisError):
    pass


def _check_n_tau(n: int, tau: int) -> None:
    if n < 1:
        raise AnalysisError(f"n must be >= 1, got {n}")
    if tau < 0:
        raise AnalysisError(f"tau must be >= 0, got {tau}")


def deviation_payoff(t: int, n: int, tau: int, p: PDPayoffs) -> Fraction:
    _check_n_tau(n, tau)
    if not 1 <= t <= n:
        raise BadRound(f"deviation round t={t} outside 1..{n}")
    k_c, k_b, k_a = _deviation_counts(t, n, tau)
    return k_c * p.c + k_b * p.b + k_a * p.a


def _deviation_counts(t: int, n: int, tau: int) -> tuple[int, int, int]:
    """Rounds paid ``c``, ``b`` and ``a`` when defecting from round ``t``."""
    return t - 1, min(tau + 1, n - t + 1), max(n - t - tau, 0)


def average_deviation_payoff_direct(n: int, tau: int, p: PDPayoffs) -> Fraction:
    """Mean of ``v(t)`` over ``t = 1..n``, summed term by term.

    Per-term multiplicities are accumulated as integers and priced once,
    which is exact and avoids ``n`` rounds of Fraction arithmetic.
    """
    _check_n_tau(n, tau)
    k_c = k_b = k_a = 0
    for t in range(1, n + 1):
        dc, db, da = _deviation_counts(t, n, tau)
        k_c += dc
        k_b += db
        k_a += da
    return (k_c * p.c + k_b * p.b + k_a * p.a) / n


def average_deviation_payoff_closed(n: int, tau: int, p: PDPayoffs) -> Fraction:
    """Mean deviation payoff via the three summed series.

    Uses ``sum(t-1) = n(n-1)/2``, ``sum min(tau+1, n-t+1) = (tau+1)(2n-tau)/2``
    and ``sum max(n-t-tau, 0) = (n-tau-1)(n-tau)/2``, all over the common
    denominator ``2n``. Only valid for ``tau <= n - 1``.
    """
    _check_n_tau(n, tau)
    if tau > n - 1:
        raise TauOutOfClosedFormRange(
            f"closed form needs tau <= n - 1 (tau={tau}, n={n}); use the direct sum"
        )
    numer = (
        p.c * n * (n - 1)
        + p.b * (tau + 1) * (2 * n - tau)
        + p.a * (n - tau - 1) * (n - tau)
    )
    return numer / (2 * n)


def bound_fraction(n: int, tau: int) -> Fraction:
    """``(n-tau)(n-tau-1) / ((2n-tau)(tau+1))``; strictly decreasing in ``tau``."""
    _check_n_tau(n, tau)
    if tau > n - 1:
        raise TauOutOfRange(f"need 0 <= tau <= n - 1, got tau={tau}, n={n}")
    return Fraction((n - tau) * (n - tau - 1), (2 * n - tau) * (tau + 1))


def _check_a_c(a: Fraction, c: Fraction) -> None:
    if not c > a:
        raise NotAPrisonersDilemma(f"c > a violated (c={c}, a={a})")
    if not a > 0:
        raise NotAPrisonersDilemma(f"a > 0 violated (a={a})")


def cooperation_bound_pre_factored(n: int, tau: int, a, c) -> Fraction:
    """The bound before factoring out ``c``: ``[c n(n+1) - a (n-tau-1)(n-tau)] / ((2n-tau)(tau+1))``."""
    a, c = as_fraction(a), as_fraction(c)
    return (c * n * (n + 1) - a * (n - tau - 1) * (n - tau)) / ((2 * n - tau) * (tau + 1))


def cooperation_bound(n: int, tau: int, a, c) -> Fraction:
    """Largest temptation ``b`` for which full cooperation is sustainable."""
    a, c = as_fraction(a), as_fraction(c)
    _check_a_c(a, c)
    _check_n_tau(n, tau)
    if tau >= n:
        raise TauOutOfRange(
            f"bound degenerates for tau >= n (tau={tau}, n={n}); use the FullDelay regime"
        )
    bound = c + (c - a) * bound_fraction(n, tau)
    # holds because n(n+1) = (2n-tau)(tau+1) + (n-tau)(n-tau-1)
    assert bound == cooperation_bound_pre_factored(n, tau, a, c)
    return bound


@dataclass(frozen=True)
class EquilibriumReport:
    n: int
    tau: int
    payoffs: PDPayoffs
    bound_b: Fraction
    sustainable: bool
    margin: Fraction
    average_deviation: Fraction
    n_c: Fraction

    def to_dict(self) -> dict:
        row = {"n": self.n, "tau": self.tau}
        for name in ("a", "b", "c"):
            row[name] = exact(getattr(self.payoffs, name))
        row["bound_b"] = exact(self.bound_b)
        row["sustainable"] = self.sustainable
        row["v_avg"] = exact(self.average_deviation)
        row["n_c"] = exact(self.n_c)
        row["margin"] = exact(self.margin)
        row["decimal"] = {
            "bound_b": approx(self.bound_b),
            "v_avg": approx(self.average_deviation),
            "n_c": approx(self.n_c),
            "margin": approx(self.margin),
        }
        return row


def check_sustainability(n: int, tau: int, p: PDPayoffs) -> EquilibriumReport:
    """Compare the mean deviation payoff with ``n c`` and report the bound.

    For ``tau >= n - 1`` the bound is ``c`` and, since ``b > c``, the verdict
    is always negative.
    """
    _check_n_tau(n, tau)
    v_avg = average_deviation_payoff_direct(n, tau, p)
    n_c = n * p.c
    sustainable = v_avg <= n_c
    bound = cooperation_bound(n, tau, p.a, p.c) if tau <= n - 1 else p.c
    if (p.b <= bound) != sustainable:
        raise AssertionError(
            f"bound and average criteria disagree at n={n}, tau={tau}, payoffs={p}: "
            f"b={p.b}, bound={bound}, v_avg={v_avg}, n*c={n_c}"
        )
    return EquilibriumReport(n, tau, p, bound, sustainable, bound - p.b, v_avg, n_c)


# -- asymptotic regimes --------------------------------------------------------


@dataclass(frozen=True)
class NoDelay:
    """Instantaneous propagation (``tau = 0``)."""


@dataclass(frozen=True)
class FullDelay:
    """``tau >= n - 1``: alarms never arrive in time."""


@dataclass(frozen=True)
class Proportional:
    """``tau = alpha n`` with ``0 < alpha < 1``, in the large-``n`` limit."""

    alpha: Fraction

    def __post_init__(self):
        alpha = as_fraction(self.alpha)
        if not 0 < alpha < 1:
            raise BadAlpha(f"alpha must lie strictly between 0 and 1, got {alpha}")
        object.__setattr__(self, "alpha", alpha)


@dataclass(frozen=True)
class ScaleFreeApprox:
    """``tau`` small relative to ``n``: fraction behaves like ``n / (2(tau+1))``."""


RegimeSpec = Union[NoDelay, FullDelay, Proportional, ScaleFreeApprox]


def regime_bound(regime: RegimeSpec, *, a, c, n: int | None = None, tau: int | None = None) -> Fraction:
    """Cooperation bound on ``b`` under one of the asymptotic regimes.

    ``NoDelay`` needs ``n``; ``ScaleFreeApprox`` needs ``n`` and ``tau``.
    The proportional limit diverges as ``alpha -> 0``; that end is excluded by
    the open interval, not special-cased.
    """
    a, c = as_fraction(a), as_fraction(c)
    _check_a_c(a, c)
    if isinstance(regime, NoDelay):
        if n is None or n < 1:
            raise AnalysisError("NoDelay regime needs n >= 1")
        return c + Fraction(n - 1, 2) * (c - a)
    if isinstance(regime, FullDelay):
        return c
    if isinstance(regime, Proportional):
        al = regime.alpha
        return c + (c - a) * (1 - al) ** 2 / (al * (2 - al))
    if isinstance(regime, ScaleFreeApprox):
        if n is None or tau is None or n < 1 or tau < 0:
            raise AnalysisError("ScaleFreeApprox regime needs n >= 1 and tau >= 0")
        return c + (c - a) * Fraction(n, 2 * (tau + 1))
    raise AnalysisError(f"unknown regime {regime!r}")
