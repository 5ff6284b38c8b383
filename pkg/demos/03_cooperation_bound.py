"""The largest temptation that still sustains cooperation, and where it comes from."""

# %%
from fractions import Fraction

from netcoop import network as nw
from netcoop.analysis import check_sustainability, cooperation_bound, deviation_payoff
from netcoop.engine import expected_payoffs
from netcoop.game import PDPayoffs
from netcoop.oracle import verify_theorem_boundary

n, a, c = 6, Fraction(1), Fraction(2)

# %% Bound as a function of the diameter
for tau in range(n):
    print(f"tau={tau}: b <= {cooperation_bound(n, tau, a, c)}")

# %% Per-round deviation payoffs behind the average
p = PDPayoffs(a, Fraction(5, 2), c)
for tau in (0, 2, 5):
    vs = [deviation_payoff(t, n, tau, p) for t in range(1, n + 1)]
    rep = check_sustainability(n, tau, p)
    print(f"tau={tau}: v_t={[str(v) for v in vs]} mean={rep.average_deviation} n*c={rep.n_c} "
          f"sustainable={rep.sustainable}")

# %% The engine agrees exactly at the boundary
rep = verify_theorem_boundary(5, 1, a, c)
for ch in rep.checks:
    print(f"{'ok ' if ch.passed else 'BAD'} {ch.name}: {ch.lhs} vs {ch.rhs}")

# %% Averages over all activation orders on a complete graph
ex = expected_payoffs(nw.complete(4, 1), PDPayoffs(1, 3, 2), family="omniscient")
print([str(v) for v in ex.deviator_averages])
