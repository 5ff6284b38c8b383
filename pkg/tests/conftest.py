from fractions import Fraction
import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from netcoop import network as nw
from netcoop.game import PDPayoffs

# filled by tests/test_acceptance.py, printed at the end of the session
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for ident, passed, detail in sorted(ACCEPTANCE_RESULTS, key=lambda r: int(r[0])):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {ident}: {detail}")


small_fractions = st.fractions(min_value=Fraction(1, 40), max_value=50, max_denominator=40)


@st.composite
def pd_payoffs(draw):
    """Strict PD triples b > c > a > 0 with small rational entries."""
    vals = draw(st.lists(small_fractions, min_size=3, max_size=3, unique=True))
    a, c, b = sorted(vals)
    return PDPayoffs(a, b, c)


def random_connected_edges(rng, n, delays=(0, 1, 2), extra_p=0.35):
    """Random spanning tree on shuffled labels plus random extra edges."""
    labels = rng.permutation(n).tolist()
    edges = {}
    for i in range(1, n):
        j = int(rng.integers(i))
        u, v = sorted((labels[i], labels[j]))
        edges[(u, v)] = int(rng.choice(delays))
    for u, v in itertools.combinations(range(n), 2):
        if (u, v) not in edges and rng.random() < extra_p:
            edges[(u, v)] = int(rng.choice(delays))
    return [(u, v, d) for (u, v), d in edges.items()]


@st.composite
def connected_graphs(draw, max_n=6, delays=(0, 1, 2)):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return nw.build_graph(n, random_connected_edges(rng, n, delays))


def brute_force_distances(g):
    """Minimum delay over every simple path, by exhaustive DFS."""
    n = g.node_count
    adj = g.neighbors()
    best = [[None] * n for _ in range(n)]

    def dfs(src, node, cost, visited):
        if best[src][node] is None or cost < best[src][node]:
            best[src][node] = cost
        for nxt, d in adj[node]:
            if nxt not in visited:
                visited.add(nxt)
                dfs(src, nxt, cost + d, visited)
                visited.remove(nxt)

    for s in range(n):
        dfs(s, s, 0, {s})
    return best


def hop_by_hop_arrivals(g, origin, send_round):
    """Round-stepped relay: each holder forwards on every edge once.

    Returns the round in which the message first reaches each location.
    Independent of any shortest-path routine.
    """
    n = g.node_count
    adj = g.neighbors()
    arrival = [None] * n
    arrival[origin] = send_round
    in_flight = []  # (arrive_round, node)
    frontier = [origin]
    r = send_round
    while any(a is None for a in arrival):
        # zero-delay edges deliver within the same round, cascading
        while frontier:
            node = frontier.pop()
            for nxt, d in adj[node]:
                in_flight.append((r + d, nxt))
        landed = [(t, v) for t, v in in_flight if t == r]
        in_flight = [(t, v) for t, v in in_flight if t != r]
        new = [v for _, v in landed if arrival[v] is None]
        for v in new:
            arrival[v] = r
        frontier.extend(set(new))
        if not frontier:
            r += 1
    return arrival


@pytest.fixture
def pd132():
    return PDPayoffs(1, 3, 2)
