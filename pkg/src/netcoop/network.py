"""Delay-weighted communication networks.

Locations are dense integer ids ``0..n-1``. Each undirected edge carries a
non-negative integer delay measured in rounds; the propagation distance
between two locations is the minimum total delay over connecting paths.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

__all__ = [
    "NetworkError",
    "Disconnected",
    "SelfLoop",
    "DuplicateEdge",
    "BadNodeId",
    "BadDelay",
    "BadParameter",
    "EdgeListParseError",
    "DelayGraph",
    "DelayMatrix",
    "build_graph",
    "all_pairs_delay",
    "diameter",
    "generate",
    "path",
    "cycle",
    "star",
    "complete",
    "barabasi_albert",
    "TOPOLOGY_NAMES",
    "parse_edge_list",
    "load_edge_list",
    "format_edge_list",
]

# rows per Dijkstra batch; bounds the float64 scratch buffer
_APSP_CHUNK = 512


class NetworkError(ValueError):
    pass


class Disconnected(NetworkError):
    pass


class SelfLoop(NetworkError):
    pass


class DuplicateEdge(NetworkError):
    pass


class BadNodeId(NetworkError):
    pass


class BadDelay(NetworkError):
    pass


class BadParameter(NetworkError):
    pass


@dataclass(frozen=True)
class DelayGraph:
    """Undirected, connected graph with integer edge delays.

    Use :func:`build_graph` to construct one; the constructor itself does not
    validate. ``edges`` holds ``(u, v, delay)`` with ``u < v``, sorted.
    """

    node_count: int
    edges: tuple[tuple[int, int, int], ...]

    @cached_property
    def delays(self) -> "DelayMatrix":
        # cached so repeated engine runs on the same graph share one matrix
        return all_pairs_delay(self)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.node_count)]
        for u, v, d in self.edges:
            adj[u].append((v, d))
            adj[v].append((u, d))
        return adj


@dataclass(frozen=True)
class DelayMatrix:
    """Propagation distances; ``dist[i, j]`` is in rounds (read-only int64)."""

    dist: np.ndarray

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def __getitem__(self, key):
        return self.dist[key]

    @cached_property
    def rows(self) -> list[list[int]]:
        # plain ints are much faster than numpy scalars in per-round loops
        return self.dist.tolist()


def _is_int(x) -> bool:
    return isinstance(x, (int, np.integer)) and not isinstance(x, bool)


def build_graph(node_count: int, edges: Iterable[Sequence[int]]) -> DelayGraph:
    """Validate an edge list and return a :class:`DelayGraph`.

    Raises
    ------
    BadNodeId, SelfLoop, DuplicateEdge, BadDelay, Disconnected
        The message names the offending edge or node.
    """
    if not _is_int(node_count) or node_count < 1:
        raise BadParameter(f"node_count must be a positive integer, got {node_count!r}")
    node_count = int(node_count)
    seen: dict[tuple[int, int], int] = {}
    for edge in edges:
        u, v, d = edge
        for x in (u, v):
            if not _is_int(x) or not 0 <= x < node_count:
                raise BadNodeId(f"edge {tuple(edge)}: node id {x!r} not in 0..{node_count - 1}")
        if not _is_int(d) or d < 0:
            raise BadDelay(f"edge {tuple(edge)}: delay {d!r} is not a non-negative integer")
        if u == v:
            raise SelfLoop(f"edge {tuple(edge)}: self-loop at node {u}")
        key = (int(min(u, v)), int(max(u, v)))
        if key in seen:
            raise DuplicateEdge(f"edge {tuple(edge)}: pair {key} already present")
        seen[key] = int(d)

    edge_tuple = tuple(sorted((u, v, d) for (u, v), d in seen.items()))
    g = DelayGraph(node_count, edge_tuple)

    reached = _reachable_from_zero(g)
    if len(reached) != node_count:
        missing = min(set(range(node_count)) - reached)
        raise Disconnected(f"node {missing} unreachable from node 0")
    return g


def _reachable_from_zero(g: DelayGraph) -> set[int]:
    adj = g.neighbors()
    reached = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v, _ in adj[u]:
            if v not in reached:
                reached.add(v)
                queue.append(v)
    return reached


def all_pairs_delay(g: DelayGraph) -> DelayMatrix:
    """Exact shortest-path delays between every pair of locations.

    Runs Dijkstra in row batches over a symmetric CSR matrix. Zero-delay
    edges are stored as explicit zeros, which scipy treats as edges. Path
    sums stay below 2**53 for any realistic input (delays <= 1e6,
    n <= 1e4 gives at most 1e10), so the float64 result converts to int64
    without loss.
    """
    n = g.node_count
    if g.edges:
        e = np.asarray(g.edges, dtype=np.int64)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        data = np.concatenate([e[:, 2], e[:, 2]]).astype(np.float64)
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
        data = np.zeros(0, dtype=np.float64)
    csgraph = csr_matrix((data, (rows, cols)), shape=(n, n))

    dist = np.empty((n, n), dtype=np.int64)
    for start in range(0, n, _APSP_CHUNK):
        idx = np.arange(start, min(start + _APSP_CHUNK, n))
        block = dijkstra(csgraph, directed=True, indices=idx)
        if not np.all(np.isfinite(block)):
            raise Disconnected("graph has unreachable pairs")
        dist[idx] = np.rint(block).astype(np.int64)
    dist.flags.writeable = False
    return DelayMatrix(dist)


def diameter(m: DelayMatrix | DelayGraph) -> int:
    """Largest propagation distance over all pairs (0 for one node)."""
    if isinstance(m, DelayGraph):
        m = m.delays
    return int(m.dist.max()) if m.dist.size else 0


# -- topologies -------------------------------------------------------------


def _check_n(n, minimum: int = 1) -> int:
    if not _is_int(n) or n < minimum:
        raise BadParameter(f"n must be an integer >= {minimum}, got {n!r}")
    return int(n)


def _check_delay(delay) -> int:
    if not _is_int(delay) or delay < 0:
        raise BadParameter(f"uniform_delay must be a non-negative integer, got {delay!r}")
    return int(delay)


def path(n: int, delay: int = 1) -> DelayGraph:
    n, delay = _check_n(n), _check_delay(delay)
    return build_graph(n, [(i, i + 1, delay) for i in range(n - 1)])


def cycle(n: int, delay: int = 1) -> DelayGraph:
    n, delay = _check_n(n), _check_delay(delay)
    if n <= 2:
        # a 2-cycle would duplicate the single edge
        return path(n, delay)
    return build_graph(n, [(i, (i + 1) % n, delay) for i in range(n)])


def star(n: int, delay: int = 1) -> DelayGraph:
    n, delay = _check_n(n), _check_delay(delay)
    return build_graph(n, [(0, i, delay) for i in range(1, n)])


def complete(n: int, delay: int = 1) -> DelayGraph:
    n, delay = _check_n(n), _check_delay(delay)
    return build_graph(n, [(i, j, delay) for i in range(n) for j in range(i + 1, n)])


def barabasi_albert(n: int, m_attach: int, seed: int, delay: int = 1) -> DelayGraph:
    """Preferential-attachment graph grown from a complete core.

    Starts from the complete graph on ``m_attach + 1`` nodes. Each later node
    links to ``m_attach`` distinct existing nodes, each drawn with
    probability proportional to current degree; repeated targets are
    redrawn. The result has ``m(n-m-1) + m(m+1)/2`` edges and is connected.
    """
    n, delay = _check_n(n), _check_delay(delay)
    if not _is_int(m_attach) or not 1 <= m_attach < n:
        raise BadParameter(f"need 1 <= m_attach < n, got m_attach={m_attach!r}, n={n}")
    if not _is_int(seed) or not 0 <= seed < 2**64:
        raise BadParameter(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    m = int(m_attach)
    rng = np.random.default_rng(int(seed))

    edges = [(i, j, delay) for i in range(m + 1) for j in range(i + 1, m + 1)]
    # every node appears once per incident edge, so uniform draws are degree-weighted
    stubs = [i for i in range(m + 1) for _ in range(m)]
    for new in range(m + 1, n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(stubs[int(rng.integers(len(stubs)))])
        for t in sorted(targets):
            edges.append((t, new, delay))
            stubs.append(t)
        stubs.extend([new] * m)
    return build_graph(n, edges)


_TOPOLOGIES = {
    "path": path,
    "cycle": cycle,
    "star": star,
    "complete": complete,
}

TOPOLOGY_NAMES = (*_TOPOLOGIES, "barabasi_albert")


def generate(
    topology: str,
    n: int,
    uniform_delay: int = 1,
    *,
    m_attach: int | None = None,
    seed: int | None = None,
) -> DelayGraph:
    """Build a named topology with every edge delay set to ``uniform_delay``."""
    if topology == "barabasi_albert":
        if m_attach is None or seed is None:
            raise BadParameter("barabasi_albert requires m_attach and seed")
        return barabasi_albert(n, m_attach, seed, uniform_delay)
    try:
        factory = _TOPOLOGIES[topology]
    except KeyError:
        raise BadParameter(
            f"unknown topology {topology!r}; expected one of {', '.join(TOPOLOGY_NAMES)}"
        ) from None
    return factory(n, uniform_delay)


# -- edge-list files ---------------------------------------------------------


class EdgeListParseError(NetworkError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def parse_edge_list(text: str) -> DelayGraph:
    """Parse ``u v delay`` lines; ``#`` lines and blank lines are skipped.

    Node count is the largest id plus one.
    """
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 3:
            raise EdgeListParseError(lineno, f"expected 'u v delay', got {line!r}")
        try:
            u, v, d = (int(f, 10) for f in fields)
        except ValueError:
            raise EdgeListParseError(lineno, f"non-integer field in {line!r}") from None
        if u < 0 or v < 0:
            raise EdgeListParseError(lineno, f"negative node id in {line!r}")
        if d < 0:
            raise EdgeListParseError(lineno, f"negative delay in {line!r}")
        edges.append((lineno, (u, v, d)))
    if not edges:
        raise EdgeListParseError(0, "no edges found")
    node_count = max(max(u, v) for _, (u, v, _) in edges) + 1
    try:
        return build_graph(node_count, [e for _, e in edges])
    except (SelfLoop, DuplicateEdge) as exc:
        # recover the offending line for the message
        bad = _offending_line(edges, exc)
        raise EdgeListParseError(bad, str(exc)) from exc


def _offending_line(edges, exc) -> int:
    seen = set()
    for lineno, (u, v, _) in edges:
        key = (min(u, v), max(u, v))
        if u == v and isinstance(exc, SelfLoop):
            return lineno
        if key in seen and isinstance(exc, DuplicateEdge):
            return lineno
        seen.add(key)
    return 0


def load_edge_list(filename) -> DelayGraph:
    with open(filename, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def format_edge_list(g: DelayGraph) -> str:
    lines = [f"# nodes {g.node_count} edges {g.edge_count}"]
    lines.extend(f"{u} {v} {d}" for u, v, d in g.edges)
    return "\n".join(lines) + "\n"
