"""Large-network limits of the cooperation bound."""

# %%
from fractions import Fraction

from netcoop.analysis import FullDelay, NoDelay, Proportional, ScaleFreeApprox, cooperation_bound, regime_bound

a, c = Fraction(1), Fraction(2)

# %% No delay: the bound grows linearly in n
for n in (2, 10, 100):
    print(n, cooperation_bound(n, 0, a, c), regime_bound(NoDelay(), a=a, c=c, n=n))

# %% Full delay: nothing above c survives
print(cooperation_bound(50, 49, a, c), regime_bound(FullDelay(), a=a, c=c))

# %% Diameter proportional to n
n = 10_000
for k in range(1, 10):
    alpha = Fraction(k, 10)
    exact_b = cooperation_bound(n, round(alpha * n), a, c)
    print(f"alpha={float(alpha):.1f} finite={float(exact_b):.5f} limit={float(regime_bound(Proportional(alpha), a=a, c=c)):.5f}")

# %% Small diameter relative to n
for n, tau in ((1000, 5), (10_000, 8)):
    print(n, tau, float(cooperation_bound(n, tau, a, c)),
          float(regime_bound(ScaleFreeApprox(), a=a, c=c, n=n, tau=tau)))
