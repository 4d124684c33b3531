"""ILP intermediate representation and formulation builders.

Variables are binary. Label variables are named by kind and vertex (``q3`` is
"vertex 3 has label 2"); indicator variables (``t``/``x`` for k = 3,
``x``/``y``/``z``/``a`` for k = 4) flag neighborhood conditions and carry no
cost. Coefficients are exact :class:`fractions.Fraction` values until
:func:`integerize` scales each row to coprime integers.

Faithful models (``M3RDP1`` .. ``M4RDP3``) reproduce the published rows
verbatim, including their known acceptance/rejection gaps. Indicators only get
upper links (indicator <= witnessing neighbor sum), which is all a minimizing
solver needs since every indicator appears with a positive coefficient in a
>= row. The ``*_AN`` models encode the [k]-Roman inequality directly and are
exact for 1-free labelings.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping

from .graph import Graph
from .labeling import LabelFunction


class ModelId(str, enum.Enum):
    M3RDP1 = "M3RDP1"
    M3RDP2 = "M3RDP2"
    M3RDP3 = "M3RDP3"
    M4RDP1 = "M4RDP1"
    M4RDP2 = "M4RDP2"
    M4RDP3 = "M4RDP3"
    M3RDP_AN = "M3RDP_AN"
    M4RDP_AN = "M4RDP_AN"

    @property
    def k(self) -> int:
        return 3 if self.value.startswith("M3") else 4

    @property
    def is_exact(self) -> bool:
        return self.value.endswith("_AN")

    @property
    def display(self) -> str:
        """Table heading, e.g. ``M3RDP-1``."""
        if self.is_exact:
            return self.value.replace("_", "-")
        return f"{self.value[:-1]}-{self.value[-1]}"

    @classmethod
    def parse(cls, text: str) -> ModelId:
        key = text.strip().upper().replace("-", "").replace("_", "")
        for member in cls:
            if member.value.replace("_", "") == key:
                return member
        raise ValueError(f"unknown model id {text!r}; choose from {', '.join(m.value for m in cls)}")


# label value carried by each label-variable kind
LABEL_KINDS_3 = {"p": 1, "q": 2, "r": 3, "s": 4}
LABEL_KINDS_4 = {"p": 1, "q": 2, "r": 3, "s": 4, "t": 5}


class ModelError(ValueError):
    pass


class DecodeError(ValueError):
    pass


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str
    vertex: int
    binary: bool = True


@dataclass(frozen=True)
class LinearConstraint:
    terms: tuple[tuple[Fraction, str], ...]
    sense: str  # ">=", "<=" or "="
    rhs: Fraction
    tag: str

    def lhs(self, assignment: Mapping[str, int]) -> Fraction:
        return sum((c * assignment[v] for c, v in self.terms), Fraction(0))

    def satisfied(self, assignment: Mapping[str, int]) -> bool:
        value = self.lhs(assignment)
        if self.sense == ">=":
            return value >= self.rhs
        if self.sense == "<=":
            return value <= self.rhs
        return value == self.rhs


@dataclass(frozen=True)
class ModelMeta:
    model_id: ModelId
    fidelity: str
    graph: str = "unnamed"
    vertex_count: int = 0
    literal_3c: bool = False


@dataclass(frozen=True)
class IlpModel:
    variables: tuple[Variable, ...]
    objective: tuple[tuple[Fraction, str], ...]
    constraints: tuple[LinearConstraint, ...]
    meta: ModelMeta
    # label-variable kind -> label value; other kinds are indicators
    label_kinds: Mapping[str, int] = field(default_factory=dict)
    # indicator name -> (threshold, witness variable names)
    indicators: Mapping[str, tuple[int, tuple[str, ...]]] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.meta.model_id.k

    @property
    def variable_names(self) -> list[str]:
        return [v.name for v in self.variables]

    def label_variables(self) -> list[Variable]:
        return [v for v in self.variables if v.kind in self.label_kinds]

    def objective_value(self, assignment: Mapping[str, int]) -> Fraction:
        return sum((c * assignment[v] for c, v in self.objective), Fraction(0))

    def is_integral(self) -> bool:
        return all(
            c.denominator == 1
            for row in self.constraints
            for c in [row.rhs, *(t[0] for t in row.terms)]
        ) and all(c.denominator == 1 for c, _ in self.objective)


class _Builder:
    def __init__(self, g: Graph, kinds: str) -> None:
        self.g = g
        self.kinds = kinds
        self.variables = [Variable(f"{kind}{v}", kind, v) for v in g.vertices for kind in kinds]
        self.order = {var.name: i for i, var in enumerate(self.variables)}
        self.rows: list[LinearConstraint] = []

    def row(self, tag: str, terms: Iterable[tuple[Fraction | int, str]], sense: str, rhs: int = 0) -> None:
        merged: dict[str, Fraction] = {}
        for coef, name in terms:
            if name not in self.order:
                raise ModelError(f"row {tag} references undeclared variable {name}")
            merged[name] = merged.get(name, Fraction(0)) + Fraction(coef)
        ordered = tuple(
            (c, name) for name, c in sorted(merged.items(), key=lambda kv: self.order[kv[0]]) if c != 0
        )
        self.rows.append(LinearConstraint(ordered, sense, Fraction(rhs), tag))

    def nbr(self, v: int, kind: str, coef: Fraction | int = 1) -> list[tuple[Fraction | int, str]]:
        return [(coef, f"{kind}{u}") for u in self.g.adjacency[v]]


_HALF = Fraction(1, 2)
_THIRD = Fraction(1, 3)
_QUARTER = Fraction(1, 4)


def _link(b: _Builder, links: dict, v: int, indicator: str, witness: str, threshold: int = 1) -> None:
    name = f"{indicator}{v}"
    b.row(f"link_{indicator}@v{v}", [(threshold, name)] + b.nbr(v, witness, -1), "<=")
    links[name] = (threshold, tuple(f"{witness}{u}" for u in b.g.adjacency[v]))


def _build_m3(g: Graph, variant: int, literal_3c: bool) -> tuple[_Builder, dict, dict]:
    with_p = variant == 1
    kinds = ("pqrs" if with_p else "qrs") + "tx"
    b = _Builder(g, kinds)
    links: dict = {}
    cover, one_row, two_row, amo = {1: ("1b", "1c", "1d", "1e"), 2: ("2b", None, "2c", "2d"), 3: ("3b", None, "3c", None)}[variant]
    for v in g.vertices:
        own = [(1, f"{kd}{v}") for kd in ("pqrs" if with_p else "qrs")]
        b.row(
            f"{cover}@v{v}",
            own + b.nbr(v, "s") + b.nbr(v, "q", _THIRD) + [(_HALF, f"t{v}"), (_HALF, f"x{v}")],
            ">=",
            1,
        )
        if with_p:
            b.row(f"{one_row}@v{v}", b.nbr(v, "q", _HALF) + b.nbr(v, "s") + b.nbr(v, "r") + [(-1, f"p{v}")], ">=")
        sense = "<=" if (variant == 3 and literal_3c) else ">="
        b.row(f"{two_row}@v{v}", b.nbr(v, "q") + b.nbr(v, "r") + b.nbr(v, "s") + [(-1, f"q{v}")], sense)
        if amo:
            b.row(f"{amo}@v{v}", own, "<=", 1)
        _link(b, links, v, "t", "q")
        _link(b, links, v, "x", "r")
    label_kinds = {kd: LABEL_KINDS_3[kd] for kd in ("pqrs" if with_p else "qrs")}
    return b, label_kinds, links


def _build_m4(g: Graph, variant: int) -> tuple[_Builder, dict, dict]:
    with_p = variant == 1
    label_letters = "pqrst" if with_p else "qrst"
    b = _Builder(g, label_letters + "xyza")
    links: dict = {}
    tags = {1: ("4b", "4c", "4d", "4e", "4f"), 2: ("5b", None, "5c", "5d", "5e"), 3: ("6b", None, "6c", "6d", None)}[variant]
    cover, one_row, two_row, three_row, amo = tags
    for v in g.vertices:
        own = [(1, f"{kd}{v}") for kd in label_letters]
        pair_terms = [
            (_HALF, f"x{v}"), (_HALF, f"z{v}"),
            (_HALF, f"z{v}"), (_HALF, f"y{v}"),
            (_HALF, f"a{v}"), (_HALF, f"y{v}"),
        ]
        b.row(
            f"{cover}@v{v}",
            own + b.nbr(v, "t") + pair_terms + b.nbr(v, "s", _HALF) + b.nbr(v, "r", _HALF) + b.nbr(v, "q", _QUARTER),
            ">=",
            1,
        )
        if with_p:
            b.row(
                f"{one_row}@v{v}",
                b.nbr(v, "t") + b.nbr(v, "s") + [(_HALF, f"y{v}"), (_HALF, f"x{v}")]
                + b.nbr(v, "r", _HALF) + b.nbr(v, "q", _THIRD) + [(-1, f"p{v}")],
                ">=",
            )
        b.row(f"{two_row}@v{v}", b.nbr(v, "t") + b.nbr(v, "s") + b.nbr(v, "r") + b.nbr(v, "q", _HALF) + [(-1, f"q{v}")], ">=")
        b.row(f"{three_row}@v{v}", b.nbr(v, "t") + b.nbr(v, "s") + b.nbr(v, "q") + b.nbr(v, "r") + [(-1, f"r{v}")], ">=")
        if amo:
            b.row(f"{amo}@v{v}", own, "<=", 1)
        _link(b, links, v, "x", "q")
        _link(b, links, v, "y", "r")
        _link(b, links, v, "z", "s")
        _link(b, links, v, "a", "q", threshold=2)
    label_kinds = {kd: LABEL_KINDS_4[kd] for kd in label_letters}
    return b, label_kinds, links


def _build_an(g: Graph, k: int) -> tuple[_Builder, dict, dict]:
    kinds = "qrs" if k == 3 else "qrst"
    table = LABEL_KINDS_3 if k == 3 else LABEL_KINDS_4
    b = _Builder(g, kinds)
    for v in g.vertices:
        terms: list[tuple[Fraction | int, str]] = []
        for kd in kinds:
            label = table[kd]
            terms.append((min(label, k), f"{kd}{v}"))
            terms += b.nbr(v, kd, label - 1)
        b.row(f"an@v{v}", terms, ">=", k)
        b.row(f"amo@v{v}", [(1, f"{kd}{v}") for kd in kinds], "<=", 1)
    return b, {kd: table[kd] for kd in kinds}, {}


def build(
    g: Graph,
    model_id: ModelId | str,
    *,
    graph_label: str = "unnamed",
    literal_3c: bool = False,
) -> IlpModel:
    """Build one of the eight formulations for ``g``.

    ``literal_3c`` emits M3RDP-3's neighbor row for label-2 vertices with the
    printed ``<=`` sense instead of the ``>=`` used by M3RDP-1/2.
    """
    model_id = ModelId.parse(model_id) if isinstance(model_id, str) else model_id
    if g.vertex_count == 0:
        raise ModelError("graph must have at least one vertex")
    variant = int(model_id.value[-1]) if not model_id.is_exact else 0
    if model_id.is_exact:
        b, label_kinds, links = _build_an(g, model_id.k)
    elif model_id.k == 3:
        b, label_kinds, links = _build_m3(g, variant, literal_3c)
    else:
        b, label_kinds, links = _build_m4(g, variant)
    objective = tuple(
        (Fraction(label_kinds[var.kind]), var.name) for var in b.variables if var.kind in label_kinds
    )
    meta = ModelMeta(
        model_id,
        "corrected" if model_id.is_exact else "faithful",
        graph_label,
        g.vertex_count,
        literal_3c and model_id is ModelId.M3RDP3,
    )
    return IlpModel(tuple(b.variables), objective, tuple(b.rows), meta, label_kinds, links)


def integerize_row(row: LinearConstraint) -> LinearConstraint:
    values = [row.rhs, *(c for c, _ in row.terms)]
    scale = math.lcm(*(c.denominator for c in values))
    ints = [int(c * scale) for c in values]
    divisor = math.gcd(*ints) or 1
    rhs, *coefs = (Fraction(x // divisor) for x in ints)
    return LinearConstraint(
        tuple((c, name) for c, (_, name) in zip(coefs, row.terms)), row.sense, rhs, row.tag
    )


def integerize(m: IlpModel) -> IlpModel:
    """Scale every row to integer coefficients with gcd 1; feasible set unchanged."""
    return replace(m, constraints=tuple(integerize_row(r) for r in m.constraints))


def published_constraint_count(m: IlpModel) -> int:
    """Constraint total under the published counting convention.

    Linking rows are excluded and the binary-domain declaration counts as one
    constraint per vertex (the trailing ``in {0,1}`` domain line).
    """
    rows = sum(1 for r in m.constraints if not r.tag.startswith("link_"))
    if m.meta.model_id.is_exact:
        return rows
    return rows + m.meta.vertex_count


def _fmt_coef(c: Fraction) -> str:
    if c.denominator != 1:
        raise ModelError(f"coefficient {c} is not integral; integerize the model first")
    return str(c.numerator)


def _fmt_expr(terms: Iterable[tuple[Fraction, str]], per_line: int = 8) -> str:
    parts = []
    for i, (c, name) in enumerate(terms):
        mag = abs(c)
        coef = "" if mag == 1 else _fmt_coef(mag) + " "
        if i == 0:
            parts.append(("- " if c < 0 else "") + coef + name)
        else:
            parts.append(("- " if c < 0 else "+ ") + coef + name)
    lines = [" ".join(parts[i:i + per_line]) for i in range(0, len(parts), per_line)]
    return "\n   ".join(lines)


def export_lp(m: IlpModel) -> str:
    """Render an integerized model in CPLEX LP text format."""
    if not m.is_integral():
        raise ModelError("export_lp requires an integerized model")
    meta = m.meta
    out = [f"\\ model={meta.model_id.value} fidelity={meta.fidelity} graph={meta.graph}"]
    if meta.literal_3c:
        out.append("\\ row 3c emitted with literal <= sense")
    out.append("Minimize")
    out.append(f" obj: {_fmt_expr(m.objective)}".rstrip())
    out.append("Subject To")
    for row in m.constraints:
        expr = _fmt_expr(row.terms) if row.terms else "0 " + m.variables[0].name
        out.append(f" c{row.tag}: {expr} {row.sense} {_fmt_coef(row.rhs)}")
    out.append("Binary")
    names = [v.name for v in m.variables]
    for i in range(0, len(names), 10):
        out.append(" " + " ".join(names[i:i + 10]))
    out.append("End")
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class DecodedLabeling:
    labels: LabelFunction
    multi_set: tuple[int, ...] = ()

    @property
    def is_multi_set(self) -> bool:
        return bool(self.multi_set)


def decode_solution(m: IlpModel, assignment: Mapping[str, int]) -> DecodedLabeling:
    """Turn a 0/1 assignment into a labeling.

    A vertex with several label variables set (possible only in models without
    the at-most-one row) receives the highest such label and is reported in
    ``multi_set``.
    """
    missing = [name for name in m.variable_names if name not in assignment]
    if missing:
        raise DecodeError(f"assignment lacks {len(missing)} variable(s), e.g. {missing[0]}")
    n = m.meta.vertex_count
    labels = [0] * n
    count = [0] * n
    for var in m.label_variables():
        if assignment[var.name]:
            count[var.vertex] += 1
            labels[var.vertex] = max(labels[var.vertex], m.label_kinds[var.kind])
    multi = tuple(v for v in range(n) if count[v] > 1)
    return DecodedLabeling(LabelFunction(labels, m.k), multi)


def encode_labeling(m: IlpModel, f: LabelFunction | Iterable[int]) -> dict[str, int]:
    """0/1 assignment representing ``f``; indicators take their defining value."""
    labels = list(f)
    if len(labels) != m.meta.vertex_count:
        raise ValueError(f"labeling has {len(labels)} entries, model has {m.meta.vertex_count} vertices")
    by_value = {value: kind for kind, value in m.label_kinds.items()}
    assignment = {name: 0 for name in m.variable_names}
    for v, x in enumerate(labels):
        if x == 0:
            continue
        if x not in by_value:
            raise ValueError(f"label {x} at vertex {v} has no variable in {m.meta.model_id.value}")
        assignment[f"{by_value[x]}{v}"] = 1
    for name, (threshold, witnesses) in m.indicators.items():
        assignment[name] = int(sum(assignment[w] for w in witnesses) >= threshold)
    return assignment
