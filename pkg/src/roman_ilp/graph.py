"""Simple undirected graphs, seeded Erdős–Rényi generation and edge-list I/O.

Random instances are drawn with SplitMix64 (Steele, Lea & Flood 2014), a
64-bit generator small enough to re-implement anywhere:

    state = (state + 0x9E3779B97F4A7C15) mod 2**64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2**64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2**64
    return z ^ (z >> 31)

A uniform double in [0, 1) is ``(next() >> 11) * 2**-53``. The seed is the
initial state. Candidate pairs (u, v), u < v, are visited in lexicographic
order and each consumes exactly one draw; the edge is kept when the draw is
``< p``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

_MASK64 = (1 << 64) - 1
MAX_CONNECT_RETRIES = 10_000


class GraphError(ValueError):
    """Invalid graph parameters or construction input."""


class GenerationError(RuntimeError):
    pass


class ParseError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class SplitMix64:
    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


class Graph:
    """Immutable simple undirected graph on vertices ``0..vertex_count-1``.

    ``edges`` holds normalized pairs ``(u, v)`` with ``u < v``.
    """

    __slots__ = ("vertex_count", "edges", "_adj")

    vertex_count: int
    edges: frozenset[tuple[int, int]]

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        if vertex_count < 0:
            raise GraphError(f"vertex_count must be non-negative, got {vertex_count}")
        normalized = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise GraphError(f"edge ({u}, {v}) out of range for {vertex_count} vertices")
            normalized.add((u, v) if u < v else (v, u))
        adjacency: list[set[int]] = [set() for _ in range(vertex_count)]
        for u, v in normalized:
            adjacency[u].add(v)
            adjacency[v].add(u)
        object.__setattr__(self, "vertex_count", vertex_count)
        object.__setattr__(self, "edges", frozenset(normalized))
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adjacency))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Graph is immutable")

    def __reduce__(self):
        return (Graph, (self.vertex_count, sorted(self.edges)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, m={len(self.edges)})"

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Sorted neighbor tuples indexed by vertex."""
        return self._adj

    def neighbors(self, v: int) -> frozenset[int]:
        return neighbors(self, v)

    def closed_neighbors(self, v: int) -> frozenset[int]:
        return neighbors(self, v) | {v}

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def with_edge(self, u: int, v: int) -> Graph:
        return Graph(self.vertex_count, self.edges | {(u, v)})

    def relabel(self, perm: list[int]) -> Graph:
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph(self.vertex_count, ((perm[u], perm[v]) for u, v in self.edges))

    def is_connected(self) -> bool:
        n = self.vertex_count
        if n <= 1:
            return True
        seen = {0}
        queue = deque([0])
        while queue:
            for w in self.adjacency[queue.popleft()]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == n


@dataclass(frozen=True)
class InstanceDescriptor:
    n: int
    p: float
    seed: int
    realized_edge_count: int

    @property
    def label(self) -> str:
        return f"er-{self.n}-{self.p:g}-seed{self.seed}"


def neighbors(g: Graph, v: int) -> frozenset[int]:
    """Open neighborhood N(v)."""
    if not 0 <= v < g.vertex_count:
        raise IndexError(f"vertex {v} out of range for {g.vertex_count} vertices")
    return frozenset(g.adjacency[v])


def _check_params(n: int, p: float) -> None:
    if n < 1:
        raise GraphError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability must lie in [0, 1], got {p}")


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    _check_params(n, p)
    rng = SplitMix64(seed)
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph(n, edges)


def erdos_renyi_connected(
    n: int, p: float, seed: int, max_retries: int = MAX_CONNECT_RETRIES
) -> tuple[Graph, InstanceDescriptor]:
    """Draw G(n, p) samples at seed, seed+1, ... until one is connected."""
    _check_params(n, p)
    for attempt in range(max_retries):
        s = (seed + attempt) & _MASK64
        g = erdos_renyi(n, p, s)
        if g.is_connected():
            return g, InstanceDescriptor(n, p, s, g.edge_count)
    raise GenerationError(
        f"no connected G(n={n}, p={p}) sample within {max_retries} draws from seed {seed}"
    )


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list format: vertex count, then one ``u v`` pair per line.

    Blank lines and lines starting with ``#`` are skipped.
    """
    n: int | None = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 1 or not fields[0].isdigit():
                raise ParseError(lineno, f"expected vertex count, got {line!r}")
            n = int(fields[0])
            continue
        if len(fields) != 2:
            raise ParseError(lineno, f"expected 'u v', got {line!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError(lineno, f"non-integer endpoint in {line!r}") from None
        if u == v:
            raise ParseError(lineno, f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(lineno, f"endpoint out of range [0, {n}) in {line!r}")
        edges.append((u, v))
    if n is None:
        raise ParseError(1, "missing vertex count")
    return Graph(n, edges)


def serialize_edge_list(g: Graph) -> str:
    lines = [str(g.vertex_count)]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


# Small named graphs used throughout tests and examples.

def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with center 0."""
    return Graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))
