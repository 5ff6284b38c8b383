"""How far, in rounds, an alarm has to travel on a few small networks."""

# %%
from collections import Counter

from netcoop import network as nw
from netcoop.engine import alarm_usable_rounds

# %% Delay distances and the diameter on the standard topologies
for name in nw.TOPOLOGY_NAMES:
    if name == "barabasi_albert":
        g = nw.generate(name, 12, m_attach=2, seed=1)
    else:
        g = nw.generate(name, 12, uniform_delay=2)
    m = nw.all_pairs_delay(g)
    hist = Counter(m.dist[m.dist > 0].tolist())
    print(f"{name:16s} edges={g.edge_count:3d} diameter={nw.diameter(m):3d} distances={dict(sorted(hist.items()))}")

# %% A hand-written edge list with one slow link
g = nw.parse_edge_list("0 1 1\n1 2 1\n2 3 6\n0 3 9\n")
print(nw.format_edge_list(g))
log = alarm_usable_rounds(g, origin=0, origin_round=2)
# an alarm raised at location 0 in round 2 becomes usable here
for loc, r in enumerate(log.usable_from):
    print(f"location {loc}: usable from round {r}")
