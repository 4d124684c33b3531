"""Deterministic depth-first branch-and-bound for pure 0/1 models.

Every row is normalized to ``sum(a_i x_i) >= b`` over integers. For each row
the solver tracks the largest left-hand side still reachable under the current
fixings; a row whose reachable maximum drops below its bound closes the
subtree, and a free variable whose unfavourable value alone would do that is
fixed immediately (unit propagation). Objective coefficients are
non-negative, so the cost of variables fixed to 1 is a valid bound.

Branching order is static: descending objective coefficient, then ascending
vertex id, then declaration order; value 1 is tried before 0.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .model import IlpModel, ModelError

CHECK_EVERY = 1024


class SolveStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    TIMED_OUT = "TimedOut"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class Solution:
    status: SolveStatus
    objective: int | None
    assignment: dict[str, int] | None
    nodes_explored: int
    wall_time: float

    @property
    def has_incumbent(self) -> bool:
        return self.assignment is not None


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    violated: tuple[str, ...] = field(default=())

    def __bool__(self) -> bool:
        return self.ok


def verify(m: IlpModel, assignment: Mapping[str, int]) -> VerifyResult:
    """Evaluate every row exactly; report the tags of violated rows."""
    bad = tuple(row.tag for row in m.constraints if not row.satisfied(assignment))
    return VerifyResult(not bad, bad)


class _Conflict(Exception):
    pass


class _Engine:
    def __init__(self, m: IlpModel) -> None:
        for var in m.variables:
            if not var.binary:
                raise ModelError(f"variable {var.name} is not binary")
        names = m.variable_names
        self.names = names
        index = {name: i for i, name in enumerate(names)}
        n = len(names)
        self.cost = [0] * n
        for c, name in m.objective:
            if c.denominator != 1 or c < 0:
                raise ModelError(f"objective coefficient {c} of {name} must be a non-negative integer")
            self.cost[index[name]] += int(c)

        rows: list[tuple[list[tuple[int, int]], int]] = []
        for row in m.constraints:
            if any(c.denominator != 1 for c, _ in row.terms) or row.rhs.denominator != 1:
                raise ModelError(f"row {row.tag} is not integral; integerize the model first")
            terms = [(index[name], int(c)) for c, name in row.terms]
            rhs = int(row.rhs)
            if row.sense in (">=", "="):
                rows.append((terms, rhs))
            if row.sense in ("<=", "="):
                rows.append(([(i, -a) for i, a in terms], -rhs))
            if row.sense not in (">=", "<=", "="):
                raise ModelError(f"row {row.tag} has unknown sense {row.sense!r}")
        self.row_terms = [t for t, _ in rows]
        self.row_rhs = [b for _, b in rows]
        self.row_maxabs = [max((abs(a) for _, a in t), default=0) for t in self.row_terms]
        self.occurs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for r, terms in enumerate(self.row_terms):
            for i, a in terms:
                self.occurs[i].append((r, a))
        self.maxlhs = [sum(a for _, a in t if a > 0) for t in self.row_terms]

        vertex = {v.name: v.vertex for v in m.variables}
        self.order = sorted(range(n), key=lambda i: (-self.cost[i], vertex[names[i]], i))
        self.value = [-1] * n
        self.trail: list[int] = []
        self.fixed_cost = 0

    def assign(self, i: int, x: int) -> None:
        """Fix variable i to x and propagate; raises _Conflict on infeasibility."""
        value, maxlhs, rhs = self.value, self.maxlhs, self.row_rhs
        queue = [(i, x)]
        while queue:
            j, y = queue.pop()
            current = value[j]
            if current != -1:
                if current != y:
                    raise _Conflict
                continue
            value[j] = y
            self.trail.append(j)
            if y:
                self.fixed_cost += self.cost[j]
            # finish every row update for j before raising so undo stays exact
            conflict = False
            for r, a in self.occurs[j]:
                if a > 0 and y == 0:
                    maxlhs[r] -= a
                elif a < 0 and y == 1:
                    maxlhs[r] += a
                else:
                    continue
                slack = maxlhs[r] - rhs[r]
                if slack < 0:
                    conflict = True
                elif not conflict and slack < self.row_maxabs[r]:
                    for t, b in self.row_terms[r]:
                        if value[t] == -1 and abs(b) > slack:
                            queue.append((t, 1 if b > 0 else 0))
            if conflict:
                raise _Conflict

    def undo(self, mark: int) -> None:
        value, maxlhs, trail = self.value, self.maxlhs, self.trail
        while len(trail) > mark:
            j = trail.pop()
            y = value[j]
            value[j] = -1
            if y:
                self.fixed_cost -= self.cost[j]
            for r, a in self.occurs[j]:
                if a > 0 and y == 0:
                    maxlhs[r] += a
                elif a < 0 and y == 1:
                    maxlhs[r] -= a

    def initial(self) -> bool:
        """Propagate rows that force values before any branching."""
        try:
            for r, terms in enumerate(self.row_terms):
                slack = self.maxlhs[r] - self.row_rhs[r]
                if slack < 0:
                    raise _Conflict
                for t, b in terms:
                    if self.value[t] == -1 and abs(b) > slack:
                        self.assign(t, 1 if b > 0 else 0)
                        slack = self.maxlhs[r] - self.row_rhs[r]
        except _Conflict:
            return False
        return True


def solve(
    m: IlpModel,
    budget: float = 1800.0,
    *,
    node_limit: int | None = None,
    check: bool = __debug__,
) -> Solution:
    """Minimize ``m``'s objective exactly, within ``budget`` seconds.

    ``node_limit`` adds a deterministic budget on explored nodes; hitting
    either limit returns ``TimedOut`` with the best incumbent, if any.
    """
    if budget <= 0:
        raise ValueError(f"budget must be positive, got {budget}")
    start = time.perf_counter()
    deadline = start + budget
    eng = _Engine(m)
    names = eng.names
    order = eng.order
    nvars = len(names)

    best_cost: int | None = None
    best_values: list[int] | None = None
    nodes = 0
    timed_out = False

    if eng.initial():
        # stack entries: (branch variable position in order, value to try next, trail mark)
        stack: list[tuple[int, int, int]] = []
        pos = 0
        descend = True
        while True:
            if descend:
                nodes += 1
                if nodes % CHECK_EVERY == 0 and time.perf_counter() > deadline:
                    timed_out = True
                    break
                if node_limit is not None and nodes > node_limit:
                    timed_out = True
                    break
                if best_cost is not None and eng.fixed_cost >= best_cost:
                    descend = False
                    continue
                while pos < nvars and eng.value[order[pos]] != -1:
                    pos += 1
                if pos == nvars:
                    best_cost = eng.fixed_cost
                    best_values = list(eng.value)
                    descend = False
                    continue
                stack.append((pos, 1, len(eng.trail)))
            if not stack:
                break
            p, x, mark = stack.pop()
            eng.undo(mark)
            if x == 1:
                stack.append((p, 0, mark))
            try:
                eng.assign(order[p], x)
            except _Conflict:
                descend = False
                continue
            pos = p
            descend = True

    elapsed = time.perf_counter() - start
    assignment = None if best_values is None else dict(zip(names, best_values))
    if timed_out:
        status = SolveStatus.TIMED_OUT
    elif assignment is None:
        status = SolveStatus.INFEASIBLE
    else:
        status = SolveStatus.OPTIMAL
    if check and assignment is not None:
        result = verify(m, assignment)
        if not result.ok:
            raise AssertionError(f"solver produced an infeasible assignment: {result.violated[:5]}")
        assert m.objective_value(assignment) == Fraction(best_cost)
    return Solution(status, best_cost, assignment, nodes, elapsed)
