"""Laplacians, chip-firing and critical (sandpile) groups of multigraphs."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import BadSink, Disconnected, Mismatch, NotStable, NotToppleable, SinkTopple, StepLimit, TooLarge
from .exactmat import RingMatrix, det_exact, snf
from .rings import ZZ

DEFAULT_STEP_LIMIT = 10_000_000


class MultiGraph:
    """Undirected loopless multigraph on vertices 0..n-1."""

    __slots__ = ("n", "mu", "_deg")

    def __init__(self, n: int, edges: Sequence[Tuple[int, int, int]] = ()):
        mu = [[0] * n for _ in range(n)]
        for e in edges:
            u, v = e[0], e[1]
            k = e[2] if len(e) > 2 else 1
            if u == v:
                raise ValueError("loops are not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            if k < 0:
                raise ValueError("negative multiplicity")
            mu[u][v] += k
            mu[v][u] += k
        self.n = n
        self.mu = tuple(tuple(r) for r in mu)
        self._deg = tuple(sum(r) for r in mu)

    @classmethod
    def from_matrix(cls, mu):
        n = len(mu)
        for i in range(n):
            if mu[i][i]:
                raise ValueError("loops are not allowed")
            for j in range(n):
                if mu[i][j] != mu[j][i]:
                    raise ValueError("multiplicity matrix must be symmetric")
        return cls(n, [(i, j, mu[i][j]) for i in range(n) for j in range(i + 1, n) if mu[i][j]])

    @classmethod
    def complete(cls, n):
        return cls(n, [(i, j, 1) for i in range(n) for j in range(i + 1, n)])

    @classmethod
    def cycle(cls, n):
        return cls(n, [(i, (i + 1) % n, 1) for i in range(n)])

    @classmethod
    def path(cls, n):
        return cls(n, [(i, i + 1, 1) for i in range(n - 1)])

    def degree(self, v: int) -> int:
        return self._deg[v]

    def neighbors(self, v: int):
        return [u for u in range(self.n) if self.mu[v][u]]

    def edges(self):
        return [(i, j, self.mu[i][j]) for i in range(self.n) for j in range(i + 1, self.n) if self.mu[i][j]]

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in self.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.n

    def __eq__(self, other):
        return isinstance(other, MultiGraph) and self.mu == other.mu

    def __hash__(self):
        return hash(self.mu)

    def __repr__(self):
        return f"MultiGraph({self.n}, {self.edges()})"

    def to_text(self, sink: int) -> str:
        lines = [f"{self.n} {sink}"] + [f"{u} {v} {k}" for u, v, k in self.edges()]
        return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> Tuple[MultiGraph, int]:
    """Parse ``n sink`` then ``u v mult`` lines; returns (graph, sink)."""
    lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    n, sink = int(lines[0][0]), int(lines[0][1])
    edges = []
    for ln in lines[1:]:
        u, v = int(ln[0]), int(ln[1])
        k = int(ln[2]) if len(ln) > 2 else 1
        edges.append((u, v, k))
    return MultiGraph(n, edges), sink


def _check_sink(G, sink):
    if sink is None:
        sink = G.n - 1
    if not 0 <= sink < G.n:
        raise BadSink(f"sink {sink} is not a vertex of a {G.n}-vertex graph")
    return sink


def laplacian(G: MultiGraph) -> RingMatrix:
    """L = diag(deg) - multiplicity matrix."""
    return RingMatrix([[G.degree(i) if i == j else -G.mu[i][j] for j in range(G.n)] for i in range(G.n)], ZZ)


def reduced_laplacian(G: MultiGraph, sink: Optional[int] = None) -> RingMatrix:
    """Laplacian with the sink's row and column deleted (default sink: last vertex)."""
    sink = _check_sink(G, sink)
    keep = [v for v in range(G.n) if v != sink]
    return laplacian(G).submatrix(keep, keep)


def tree_count(G: MultiGraph) -> int:
    """Number of spanning trees, as det of the reduced Laplacian."""
    if not G.is_connected():
        raise Disconnected("graph is disconnected; it has no spanning tree")
    if G.n <= 1:
        return 1
    return det_exact(reduced_laplacian(G))


@dataclass
class CriticalGroupDesc:
    factors: List[int]  # invariant factors > 1, each dividing the next
    order: int

    def __str__(self):
        return " ".join(str(f) for f in self.factors) if self.factors else "1"


def critical_group(G: MultiGraph, sink: Optional[int] = None) -> CriticalGroupDesc:
    """Critical group as the cokernel of the reduced Laplacian."""
    sink = _check_sink(G, sink)
    if not G.is_connected():
        raise Disconnected("critical group needs a connected graph")
    L0 = reduced_laplacian(G, sink)
    if L0.nrows == 0:
        return CriticalGroupDesc([], 1)
    d = snf(L0).diagonal
    order = 1
    for x in d:
        order *= x
    return CriticalGroupDesc([x for x in d if x > 1], order)


# ---------------------------------------------------------------------------
# chip-firing

@dataclass(frozen=True)
class ChipConfig:
    """Chip counts on every vertex; the sink's entry is kept at 0 (chips there vanish)."""

    graph: MultiGraph
    chips: Tuple[int, ...]
    sink: int

    def __post_init__(self):
        if len(self.chips) != self.graph.n:
            raise ValueError("one chip count per vertex is required")
        if any(c < 0 for c in self.chips):
            raise ValueError("chip counts must be nonnegative")
        _check_sink(self.graph, self.sink)
        if self.chips[self.sink]:
            object.__setattr__(self, "chips", self.chips[:self.sink] + (0,) + self.chips[self.sink + 1:])

    @classmethod
    def from_nonsink(cls, G, counts, sink=None):
        """Build from counts listed for the non-sink vertices in order."""
        sink = _check_sink(G, sink)
        counts = list(counts)
        if len(counts) != G.n - 1:
            raise ValueError(f"expected {G.n - 1} counts")
        counts.insert(sink, 0)
        return cls(G, tuple(counts), sink)

    def nonsink(self) -> Tuple[int, ...]:
        return self.chips[:self.sink] + self.chips[self.sink + 1:]

    def unstable_vertices(self):
        G = self.graph
        return [v for v in range(G.n) if v != self.sink and self.chips[v] >= G.degree(v)]

    def is_stable(self) -> bool:
        return not self.unstable_vertices()

    def __add__(self, other: "ChipConfig") -> "ChipConfig":
        _same_setting(self, other)
        return ChipConfig(self.graph, tuple(a + b for a, b in zip(self.chips, other.chips)), self.sink)

    def __str__(self):
        return " ".join(str(c) for c in self.nonsink())


def _same_setting(a, b):
    if a.graph != b.graph or a.sink != b.sink:
        raise Mismatch("configurations live on different graphs or sinks")


def topple(sigma: ChipConfig, v: int) -> ChipConfig:
    """Fire v once: it loses deg(v) chips, each neighbour u gains mu(u, v)."""
    G = sigma.graph
    if v == sigma.sink:
        raise SinkTopple("the sink never topples")
    if sigma.chips[v] < G.degree(v):
        raise NotToppleable(f"vertex {v} holds {sigma.chips[v]} < deg {G.degree(v)} chips")
    c = list(sigma.chips)
    c[v] -= G.degree(v)
    for u in range(G.n):
        if G.mu[v][u] and u != sigma.sink:
            c[u] += G.mu[v][u]
    return ChipConfig(G, tuple(c), sigma.sink)


def stabilize(sigma: ChipConfig, rng=None, max_steps: int = DEFAULT_STEP_LIMIT):
    """Topple until stable; returns (stable config, topple count per vertex).

    Without ``rng`` unstable vertices are processed from a FIFO queue; with
    a ``random.Random``-like ``rng`` a uniformly random unstable vertex fires
    at each step (used to exercise order independence).
    """
    G, sink = sigma.graph, sigma.sink
    c = list(sigma.chips)
    counts = [0] * G.n
    deg = [G.degree(v) for v in range(G.n)]
    nbrs = [[(u, G.mu[v][u]) for u in range(G.n) if G.mu[v][u] and u != sink] for v in range(G.n)]
    steps = 0
    if rng is None:
        queue = deque(v for v in range(G.n) if v != sink and c[v] >= deg[v])
        queued = set(queue)
        while queue:
            v = queue.popleft()
            queued.discard(v)
            if c[v] < deg[v]:
                continue
            # fire v as many times as it can at once
            k = c[v] // deg[v]
            steps += k
            if steps > max_steps:
                raise StepLimit(f"stabilization exceeded {max_steps} topples")
            c[v] -= k * deg[v]
            counts[v] += k
            for u, m in nbrs[v]:
                c[u] += k * m
                if c[u] >= deg[u] and u not in queued:
                    queue.append(u)
                    queued.add(u)
    else:
        unstable = [v for v in range(G.n) if v != sink and c[v] >= deg[v]]
        while unstable:
            v = unstable[rng.randrange(len(unstable))]
            steps += 1
            if steps > max_steps:
                raise StepLimit(f"stabilization exceeded {max_steps} topples")
            c[v] -= deg[v]
            counts[v] += 1
            for u, m in nbrs[v]:
                c[u] += m
            unstable = [w for w in range(G.n) if w != sink and c[w] >= deg[w]]
    return ChipConfig(G, tuple(c), sink), tuple(counts)


def stable_add(s1: ChipConfig, s2: ChipConfig) -> ChipConfig:
    """Vertex-wise sum followed by stabilization."""
    _same_setting(s1, s2)
    return stabilize(s1 + s2)[0]


def max_stable(G: MultiGraph, sink: Optional[int] = None) -> ChipConfig:
    sink = _check_sink(G, sink)
    return ChipConfig(G, tuple(0 if v == sink else G.degree(v) - 1 for v in range(G.n)), sink)


def is_recurrent(sigma: ChipConfig) -> bool:
    """Burning test: add the sink's edges to its neighbours and stabilize;
    a stable configuration is recurrent iff every non-sink vertex fires exactly once."""
    if not sigma.is_stable():
        raise NotStable("recurrence is defined for stable configurations")
    G, sink = sigma.graph, sigma.sink
    burn = ChipConfig(G, tuple(0 if v == sink else G.mu[sink][v] for v in range(G.n)), sink)
    _, counts = stabilize(sigma + burn)
    return all(counts[v] == 1 for v in range(G.n) if v != sink)


def stable_configs(G: MultiGraph, sink: Optional[int] = None) -> List[ChipConfig]:
    sink = _check_sink(G, sink)
    ranges = [range(G.degree(v)) for v in range(G.n) if v != sink]
    return [ChipConfig.from_nonsink(G, t, sink) for t in itertools.product(*ranges)]


def recurrent_by_definition(G: MultiGraph, sink: Optional[int] = None) -> set:
    """Stable configurations u such that every stable v has some stable y with v + y ~> u.

    Exhaustive over the stable monoid; tiny graphs only.
    """
    sink = _check_sink(G, sink)
    if G.n - 1 > 4:
        raise TooLarge("definition-based recurrence is limited to 4 non-sink vertices")
    S = stable_configs(G, sink)
    result = None
    for v in S:
        reach = {stable_add(v, y).chips for y in S}
        result = reach if result is None else result & reach
    return result or set()


def critical_configs(G: MultiGraph, sink: Optional[int] = None) -> List[ChipConfig]:
    return [s for s in stable_configs(G, sink) if is_recurrent(s)]


@dataclass
class DynamicGroup:
    elements: List[ChipConfig]
    table: List[List[int]]  # table[i][j] = index of elements[i] + elements[j]
    identity: int
    factors: List[int]

    @property
    def order(self):
        return len(self.elements)


def _factorize(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors_from_orders(orders: Sequence[int]) -> List[int]:
    """Invariant factors (> 1) of a finite abelian group given all element orders.

    For each prime p, log_p #{x : p^k x = 0} - log_p #{x : p^(k-1) x = 0}
    counts the cyclic p-power summands of exponent >= k.
    """
    N = len(orders)
    prime_exps: Dict[int, List[int]] = {}
    for p, a in _factorize(N).items():
        logs = [0]
        for k in range(1, a + 1):
            cnt = sum(1 for o in orders if p ** k % o == 0)
            s = 0
            while p ** (s + 1) <= cnt:
                s += 1
            logs.append(s)
        ge = [logs[k] - logs[k - 1] for k in range(1, a + 1)] + [0]
        exps = []
        for k in range(a, 0, -1):
            exps += [k] * (ge[k - 1] - ge[k])
        prime_exps[p] = exps
    width = max((len(e) for e in prime_exps.values()), default=0)
    factors = [1] * width
    for p, exps in prime_exps.items():
        for i, e in enumerate(exps):
            factors[i] *= p ** e
    return sorted(f for f in factors if f > 1)


def critical_group_dynamic(G: MultiGraph, sink: Optional[int] = None, max_order: int = 64) -> DynamicGroup:
    """Critical configurations under stable addition, with invariant factors
    read off from element orders.  Tiny graphs only."""
    sink = _check_sink(G, sink)
    if G.n - 1 > 4:
        raise TooLarge("dynamic group limited to 4 non-sink vertices")
    if not G.is_connected():
        raise Disconnected("critical group needs a connected graph")
    if G.n > 1 and tree_count(G) > max_order:
        raise TooLarge(f"group order exceeds {max_order}")
    elems = critical_configs(G, sink)
    index = {e.chips: i for i, e in enumerate(elems)}
    table = [[index[stable_add(a, b).chips] for b in elems] for a in elems]
    ident = next(i for i in range(len(elems)) if all(table[i][j] == j for j in range(len(elems))))
    orders = []
    for i in range(len(elems)):
        k, x = 1, i
        while x != ident:
            x = table[x][i]
            k += 1
        orders.append(k)
    return DynamicGroup(elems, table, ident, invariant_factors_from_orders(orders))


# ---------------------------------------------------------------------------
# small test universes

def connected_graphs(n: int, max_mult: int = 1) -> List[MultiGraph]:
    """Connected multigraphs on n vertices with multiplicities <= max_mult, up to isomorphism."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    perms = list(itertools.permutations(range(n)))
    seen = set()
    out = []
    for mults in itertools.product(range(max_mult + 1), repeat=len(pairs)):
        mu = [[0] * n for _ in range(n)]
        for (i, j), k in zip(pairs, mults):
            mu[i][j] = mu[j][i] = k
        key = min(tuple(mu[p[i]][p[j]] for i, j in pairs) for p in perms)
        if key in seen:
            continue
        seen.add(key)
        G = MultiGraph(n, [(i, j, k) for (i, j), k in zip(pairs, mults) if k])
        if G.is_connected():
            out.append(G)
    return out
