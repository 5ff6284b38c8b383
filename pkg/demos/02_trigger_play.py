"""One game, round by round: a deviator against the trigger strategy."""

# %%
from netcoop import network as nw
from netcoop.engine import GoMessage, Omniscient, run
from netcoop.game import PDPayoffs

p = PDPayoffs(1, 3, 2)
g = nw.path(5, 1)
order = (2, 0, 4, 1, 3)

# %% Omniscient deviator defecting from round 2
res = run(g, p, order, Omniscient(2))
print(res.to_csv())
print("alarm:", res.alarm_log.to_dict())
print("totals:", [str(x) for x in res.totals], "vs n*c =", 5 * p.c)

# %% A deviator who can only act on the same delayed network
res = run(g, p, order, GoMessage(order[1]))
print(res.to_csv())
print("totals:", [str(x) for x in res.totals])
