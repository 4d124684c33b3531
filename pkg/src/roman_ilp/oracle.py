"""Exact γ_3R / γ_4R by depth-first search over labelings.

Vertices are labeled in order 0..n-1 with labels tried in ascending order,
so the first optimum reached is the lexicographically smallest one. Two cuts
keep the search small:

* weight: the partial weight plus a cheap lower bound reaches the incumbent;
* clause: a vertex whose whole closed neighborhood is labeled fails its
  defense clause.

The lower bound counts 2 for each labeled-but-undefended vertex in a set of
such vertices with pairwise disjoint unlabeled neighborhoods: label 1 never
contributes to anyone's defense, so each of those vertices needs a distinct
unlabeled neighbor with label at least 2.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .graph import Graph
from .labeling import LabelFunction, _clause_3, _clause_4, validate

DEFAULT_CAP = 12


class CapacityError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    optimum: int
    witness: LabelFunction
    explored: int


def _normalize_labels(k: int, allowed: Iterable[int] | None) -> tuple[int, ...]:
    if k not in (3, 4):
        raise ValueError(f"k must be 3 or 4, got {k}")
    labels = tuple(range(k + 2)) if allowed is None else tuple(sorted(set(allowed)))
    if any(not 0 <= x <= k + 1 for x in labels):
        raise ValueError(f"allowed labels must lie in 0..{k + 1}: {labels}")
    if 0 not in labels or k + 1 not in labels:
        raise ValueError(f"allowed labels must contain 0 and {k + 1}: {labels}")
    return labels


def _check_cap(g: Graph, cap: int) -> None:
    if g.vertex_count > cap:
        raise CapacityError(f"graph has {g.vertex_count} vertices; oracle cap is {cap}")


class _Search:
    def __init__(self, g: Graph, k: int, labels: tuple[int, ...]) -> None:
        self.g = g
        self.k = k
        self.n = g.vertex_count
        self.choices = labels
        self.clause = _clause_3 if k == 3 else _clause_4
        self.adj = g.adjacency
        # N[v] is fully labeled once its largest vertex is
        self.closes_at: list[list[int]] = [[] for _ in range(self.n)]
        for v in range(self.n):
            self.closes_at[max((v,) + self.adj[v])].append(v)
        self.f = [-1] * self.n
        self.explored = 0

    def _defended(self, v: int) -> bool:
        f = self.f
        c = Counter(f[u] for u in self.adj[v] if f[u] > 0)
        return self.clause(f[v], c) is None

    def _lower_bound(self, depth: int) -> int:
        # vertices < depth are labeled; those with a neighbor >= depth are still open
        used: set[int] = set()
        bound = 0
        f = self.f
        for v in range(depth):
            open_nbrs = [u for u in self.adj[v] if u >= depth]
            if not open_nbrs or f[v] >= self.k:
                continue
            if self._defended(v):
                continue
            if used.isdisjoint(open_nbrs):
                used.update(open_nbrs)
                bound += 2
        return bound

    def run(self, limit: int, strict: bool, on_leaf) -> None:
        """Enumerate valid completions with weight < limit (or <= when not strict)."""
        self.limit = limit
        self.strict = strict
        self.on_leaf = on_leaf
        self._dfs(0, 0)

    def _dfs(self, depth: int, partial: int) -> None:
        if depth == self.n:
            self.on_leaf(self, partial)
            return
        f = self.f
        for x in self.choices:
            w = partial + x
            if w > self.limit or (self.strict and w >= self.limit):
                break
            self.explored += 1
            f[depth] = x
            if all(self._defended(v) for v in self.closes_at[depth]):
                bound = w + self._lower_bound(depth + 1)
                if bound < self.limit or (not self.strict and bound == self.limit):
                    self._dfs(depth + 1, w)
            f[depth] = -1


def exact_gamma(
    g: Graph,
    k: int,
    allowed_labels: Iterable[int] | None = None,
    cap: int = DEFAULT_CAP,
) -> OracleResult:
    """Minimum weight of a valid k-labeling using only ``allowed_labels``.

    ``allowed_labels`` defaults to ``0..k+1``; it must contain 0 and k+1, which
    guarantees a valid labeling exists (all k+1 always works).
    """
    labels = _normalize_labels(k, allowed_labels)
    _check_cap(g, cap)
    search = _Search(g, k, labels)
    best: list[int] = [(k + 1) * g.vertex_count]
    witness: list[tuple[int, ...]] = [(k + 1,) * g.vertex_count]

    def on_leaf(s: _Search, total: int) -> None:
        best[0] = total
        witness[0] = tuple(s.f)
        s.limit = total

    search.run(best[0] + 1, strict=True, on_leaf=on_leaf)
    result = LabelFunction(witness[0], k)
    return OracleResult(best[0], result, search.explored)


def all_optimal(
    g: Graph,
    k: int,
    allowed_labels: Iterable[int] | None = None,
    cap: int = DEFAULT_CAP,
) -> list[LabelFunction]:
    """Every valid labeling of minimum weight, in lexicographic order."""
    opt = exact_gamma(g, k, allowed_labels, cap).optimum
    search = _Search(g, k, _normalize_labels(k, allowed_labels))
    found: list[LabelFunction] = []

    def on_leaf(s: _Search, total: int) -> None:
        if total == opt:
            found.append(LabelFunction(s.f, k))

    search.run(opt, strict=False, on_leaf=on_leaf)
    return found


def enumerate_gamma(
    g: Graph, k: int, allowed_labels: Sequence[int] | None = None
) -> tuple[int, list[LabelFunction]]:
    """Pure enumeration: optimum and all optimal labelings, no pruning at all.

    Only for tiny graphs; used to cross-check :func:`exact_gamma`.
    """
    labels = _normalize_labels(k, allowed_labels)
    best = None
    optima: list[LabelFunction] = []
    for combo in product(labels, repeat=g.vertex_count):
        f = LabelFunction(combo, k)
        if not validate(g, f).valid:
            continue
        w = sum(combo)
        if best is None or w < best:
            best, optima = w, [f]
        elif w == best:
            optima.append(f)
    assert best is not None
    return best, optima
