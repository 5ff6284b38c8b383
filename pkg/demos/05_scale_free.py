"""Preferential-attachment diameters grow much slower than the node count."""

# %%
import numpy as np

from netcoop import network as nw
from netcoop.analysis import cooperation_bound

sizes = (50, 100, 200, 500, 1000, 2000)
seeds = range(10)

# %%
for n in sizes:
    d = np.array([nw.diameter(nw.barabasi_albert(n, 2, s)) for s in seeds])
    tau = int(round(d.mean()))
    b = cooperation_bound(n, tau, 1, 2)
    print(f"n={n:5d} mean diameter={d.mean():5.2f} diam/n={d.mean() / n:.4f} bound(a=1,c=2)~{float(b):.2f}")
