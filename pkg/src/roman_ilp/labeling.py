"""Label functions and validators for triple/quadruple Roman domination.

A labeling assigns each vertex an integer in ``0..k+1``. Two independent
feasibility checks are provided: the explicit per-label clause lists for
k = 3 and k = 4, and the general [k]-Roman inequality

    f(u) + sum_{z in AN(u)} f(z) >= |AN(u)| + k     for every u with f(u) <= k

where AN(u) is the set of neighbors of u with nonzero label.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import Graph


class ShapeError(ValueError):
    """Labeling length does not match the graph."""


class InvalidInputError(ValueError):
    pass


@dataclass(frozen=True)
class LabelFunction:
    labels: tuple[int, ...]
    k: int

    def __init__(self, labels: Iterable[int], k: int) -> None:
        labels = tuple(int(x) for x in labels)
        if k < 1:
            raise ValueError(f"protection level k must be >= 1, got {k}")
        for v, x in enumerate(labels):
            if not 0 <= x <= k + 1:
                raise ValueError(f"label {x} at vertex {v} outside 0..{k + 1}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "k", k)

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, v: int) -> int:
        return self.labels[v]

    def __iter__(self):
        return iter(self.labels)

    def replace(self, changes: dict[int, int]) -> LabelFunction:
        labels = list(self.labels)
        for v, x in changes.items():
            labels[v] = x
        return LabelFunction(labels, self.k)


@dataclass(frozen=True)
class Violation:
    vertex: int
    clause: str
    reason: str


@dataclass(frozen=True)
class Verdict:
    violations: tuple[Violation, ...] = field(default=())

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def weight(f: LabelFunction | Sequence[int]) -> int:
    return sum(f)


def _check_shape(g: Graph, f: LabelFunction) -> None:
    if len(f) != g.vertex_count:
        raise ShapeError(f"labeling has {len(f)} entries, graph has {g.vertex_count} vertices")


def _neighbor_counts(g: Graph, labels: Sequence[int], v: int) -> Counter[int]:
    return Counter(labels[u] for u in g.adjacency[v])


def _clause_3(label: int, c: Counter[int]) -> str | None:
    """Failure reason for one vertex under the 3RDF clauses, or None."""
    ge2 = c[2] + c[3] + c[4]
    if label == 0:
        if c[2] >= 3 or (c[3] >= 1 and ge2 >= 2) or c[4] >= 1:
            return None
        return "needs three 2-neighbors, a 3-neighbor plus another >=2, or a 4-neighbor"
    if label == 1:
        if c[2] >= 2 or c[3] + c[4] >= 1:
            return None
        return "needs two 2-neighbors or a neighbor labeled >=3"
    if label == 2:
        return None if ge2 >= 1 else "needs a neighbor labeled >=2"
    return None


def _clause_4(label: int, c: Counter[int]) -> str | None:
    ge2 = c[2] + c[3] + c[4] + c[5]
    ge3 = c[3] + c[4] + c[5]
    if label == 0:
        if (
            c[5] >= 1
            or (c[4] >= 1 and ge2 >= 2)
            or ge3 >= 2
            or c[2] >= 4
            or (c[2] >= 2 and c[3] >= 1)
        ):
            return None
        return (
            "needs a 5-neighbor, a 4 plus another >=2, two >=3, four 2s, "
            "or two 2s plus a 3"
        )
    if label == 1:
        if c[4] + c[5] >= 1 or (c[3] >= 1 and ge2 >= 2) or c[2] >= 3:
            return None
        return "needs a neighbor >=4, a 3 plus another >=2, or three 2s"
    if label == 2:
        return None if ge3 >= 1 or c[2] >= 2 else "needs a neighbor >=3 or two 2-neighbors"
    if label == 3:
        return None if ge2 >= 1 else "needs a neighbor labeled >=2"
    return None


def _validate_explicit(g: Graph, f: LabelFunction, k: int) -> Verdict:
    if f.k != k:
        raise ValueError(f"labeling has protection level {f.k}, expected {k}")
    _check_shape(g, f)
    clause = _clause_3 if k == 3 else _clause_4
    violations = []
    for v in g.vertices:
        reason = clause(f[v], _neighbor_counts(g, f.labels, v))
        if reason is not None:
            violations.append(Violation(v, f"f(v)={f[v]}", reason))
    return Verdict(tuple(violations))


def validate_3rdf(g: Graph, f: LabelFunction) -> Verdict:
    return _validate_explicit(g, f, 3)


def validate_4rdf(g: Graph, f: LabelFunction) -> Verdict:
    return _validate_explicit(g, f, 4)


def validate(g: Graph, f: LabelFunction) -> Verdict:
    """Explicit-clause validator matching ``f.k`` (3 or 4)."""
    if f.k not in (3, 4):
        raise ValueError(f"explicit clauses exist only for k in (3, 4), got {f.k}")
    return _validate_explicit(g, f, f.k)


def validate_krdf(g: Graph, f: LabelFunction, k: int) -> Verdict:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    _check_shape(g, f)
    if any(x > k + 1 for x in f):
        raise ValueError(f"labels exceed k+1 = {k + 1}")
    violations = []
    for u in g.vertices:
        fu = f[u]
        if fu > k:
            continue
        active = [f[z] for z in g.adjacency[u] if f[z] != 0]
        lhs = fu + sum(active)
        rhs = len(active) + k
        if lhs < rhs:
            violations.append(Violation(u, "AN", f"h(AN[u]) = {lhs} < |AN(u)| + k = {rhs}"))
    return Verdict(tuple(violations))


def _require_valid(g: Graph, f: LabelFunction, k: int) -> None:
    if f.k != k:
        raise InvalidInputError(f"expected a k={k} labeling, got k={f.k}")
    verdict = _validate_explicit(g, f, k)
    if not verdict.valid:
        raise InvalidInputError(f"input is not a valid {k}RDF: {verdict.violations[0]}")


def _rewrite_one_3(g: Graph, labels: list[int], v: int) -> None:
    nbrs = g.adjacency[v]
    twos = [u for u in nbrs if labels[u] == 2]
    threes = [u for u in nbrs if labels[u] == 3]
    if len(twos) >= 2:
        labels[v], labels[twos[0]] = 0, 3
    elif threes:
        labels[v], labels[threes[0]] = 0, 4
    elif any(labels[u] == 4 for u in nbrs):
        labels[v] = 0
    else:
        raise InvalidInputError(f"vertex {v} labeled 1 is undefended")


def _rewrite_one_4(g: Graph, labels: list[int], v: int) -> None:
    nbrs = g.adjacency[v]
    twos = [u for u in nbrs if labels[u] == 2]
    threes = [u for u in nbrs if labels[u] == 3]
    fours = [u for u in nbrs if labels[u] == 4]
    if any(labels[u] == 5 for u in nbrs):
        labels[v] = 0
    elif fours:
        labels[v], labels[fours[0]] = 0, 5
    elif threes and twos:
        labels[v], labels[twos[0]] = 0, 3
    elif len(twos) >= 3:
        labels[v], labels[twos[2]] = 0, 3
    elif len(threes) >= 2:
        # two 3-neighbors already defend a 0-vertex
        labels[v] = 0
    else:
        raise InvalidInputError(f"vertex {v} labeled 1 is undefended")


def _eliminate_ones(g: Graph, f: LabelFunction, k: int, rewrite) -> LabelFunction:
    _require_valid(g, f, k)
    labels = list(f.labels)
    for v in g.vertices:
        if labels[v] != 1:
            continue
        rewrite(g, labels, v)
        current = LabelFunction(labels, k)
        if not _validate_explicit(g, current, k).valid:
            raise AssertionError(f"label-1 rewrite at vertex {v} broke validity: {labels}")
    return LabelFunction(labels, k)


def eliminate_ones_3(g: Graph, f: LabelFunction) -> LabelFunction:
    """Rewrite a valid 3RDF into a 1-free valid 3RDF of no greater weight.

    Each 1-labeled vertex, in ascending order, is resolved by the first
    applicable rule: two 2-neighbors (one is promoted to 3), a 3-neighbor
    (promoted to 4), or a 4-neighbor (the vertex simply drops to 0).
    """
    return _eliminate_ones(g, f, 3, _rewrite_one_3)


def eliminate_ones_4(g: Graph, f: LabelFunction) -> LabelFunction:
    """4RDF analogue of :func:`eliminate_ones_3`.

    Rules, in order: a 5-neighbor; a 4-neighbor (promoted to 5); a 3- and a
    2-neighbor (the 2 promoted to 3); three 2-neighbors (the third promoted to
    3); two 3-neighbors and nothing else usable.
    """
    return _eliminate_ones(g, f, 4, _rewrite_one_4)


def parse_labels(text: str, k: int) -> LabelFunction:
    fields = [line.split("#", 1)[0] for line in text.splitlines()]
    tokens = " ".join(fields).split()
    try:
        values = [int(t) for t in tokens]
    except ValueError as exc:
        raise ValueError(f"non-integer label: {exc}") from None
    return LabelFunction(values, k)


def format_labels(f: LabelFunction | Sequence[int]) -> str:
    return " ".join(str(x) for x in f)
