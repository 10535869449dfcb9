"""Weighted partial MaxSAT encoding of a belief graph and an exact solver.

The solver is branch-and-bound with unit propagation on hard clauses and
dynamic decomposition: once the undecided clauses fall apart into
variable-disjoint components, each component is solved independently and
the results are summed.  A bitmask brute-force enumerator serves as the
independent reference oracle, and a WCNF-style text export lets
third-party solvers cross-check instances.

Tie-breaking among equal-cost optima is deterministic: the flip pattern
(flipped = 1, kept = 0, read along the variable order) is minimized
lexicographically, so earlier variables prefer keeping their initial
label.  This order decomposes over variable-disjoint components, which
keeps decomposition exact.  Cost comparisons use absolute epsilon 1e-9.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .model import HARD, Assignment, BeliefGraph, Clause, StatementId

EPSILON = 1e-9
DEFAULT_MAX_VARIABLES = 2000
BRUTE_FORCE_MAX_VARIABLES = 22


class SolverLimitError(RuntimeError):
    """Instance exceeds the configured variable limit; no silent approximation."""


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class WeightedClause:
    literals: Clause
    weight: float  # HARD for hard clauses, else positive

    def __post_init__(self) -> None:
        if not self.literals:
            raise ValueError("empty clause")
        variables = [var for var, _ in self.literals]
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable in clause {self.literals!r}")
        if self.weight != HARD and not (self.weight > 0.0 and math.isfinite(self.weight)):
            raise ValueError(f"clause weight must be positive or HARD, got {self.weight!r}")

    @property
    def is_hard(self) -> bool:
        return self.weight == HARD


@dataclass(frozen=True)
class WeightedClauseSet:
    clauses: tuple[WeightedClause, ...]
    variable_order: tuple[StatementId, ...]
    initial_labels: Mapping[StatementId, bool]

    def __post_init__(self) -> None:
        in_order = set(self.variable_order)
        for clause in self.clauses:
            for var, _ in clause.literals:
                if var not in in_order:
                    raise ValueError(f"variable {var} missing from variable order")

    @property
    def variables(self) -> frozenset[StatementId]:
        return frozenset(self.variable_order)

    @classmethod
    def from_clauses(
        cls,
        clauses: Iterable[WeightedClause],
        initial_labels: Mapping[StatementId, bool] | None = None,
        variable_order: Sequence[StatementId] | None = None,
    ) -> "WeightedClauseSet":
        clauses = tuple(clauses)
        variables = {var for c in clauses for var, _ in c.literals}
        labels = dict(initial_labels or {})
        for var in variables:
            labels.setdefault(var, True)
        if variable_order is None:
            unit_weight: dict[StatementId, float] = {}
            for c in clauses:
                if len(c.literals) == 1 and not c.is_hard:
                    var = c.literals[0][0]
                    unit_weight[var] = unit_weight.get(var, 0.0) + c.weight
            variable_order = sorted(variables, key=lambda v: (-unit_weight.get(v, 0.0), v))
        return cls(clauses, tuple(variable_order), labels)


@dataclass(frozen=True)
class SolveResult:
    assignment: dict[StatementId, bool]
    optimal_cost: float
    status: SolveStatus
    nodes_explored: int = 0


def encode(graph: BeliefGraph, pins: Mapping[StatementId, bool] | None = None) -> WeightedClauseSet:
    """Translate the MPE objective over a belief graph into weighted MaxSAT.

    One soft unit clause per statement asserts its initial label at weight
    equal to its confidence (zero-confidence statements add no clause);
    each rule contributes its clause(s) at the rule's confidence.  Pins
    become hard unit clauses.
    """
    clauses: list[WeightedClause] = []
    for sid, node in graph.statements.items():
        if node.confidence > 0.0:
            clauses.append(WeightedClause(((sid, node.label),), node.confidence))
    for rule in graph.rules:
        for clause in rule.clauses():
            clauses.append(WeightedClause(clause, rule.confidence))
    if pins:
        for sid, value in pins.items():
            clauses.append(WeightedClause(((sid, bool(value)),), HARD))

    # Hypotheses branch first, then descending belief confidence.
    rest = sorted(
        (sid for sid in graph.statements if sid not in graph.hypotheses),
        key=lambda sid: (-graph.statements[sid].confidence, sid),
    )
    order = tuple(graph.hypotheses) + tuple(rest)
    return WeightedClauseSet.from_clauses(
        clauses, graph.initial_assignment(), variable_order=order
    )


def _lex_key(positions: Iterable[int]) -> tuple[int, ...]:
    """Order key for the flip-pattern tie-break.

    Comparing flip patterns lexicographically (kept = 0 before flipped = 1,
    scanning along the variable order) is the same as comparing the sorted
    flip positions negated: a pattern is smaller when, at the first
    position where the two differ, it keeps the initial label.
    """
    return tuple(-p for p in sorted(positions))


class _BranchAndBound:
    def __init__(self, cs: WeightedClauseSet):
        # Only variables that occur in clauses are searched; free variables
        # keep their initial labels, which is optimal and flip-minimal.
        active = sorted(
            {var for c in cs.clauses for var, _ in c.literals},
            key=cs.variable_order.index,
        )
        self.order = active
        self.index = {var: i for i, var in enumerate(active)}
        self.init = [bool(cs.initial_labels[var]) for var in active]
        self.lits: list[list[tuple[int, bool]]] = []
        self.weights: list[float] = []
        self.hard: list[bool] = []
        self.occ: list[list[int]] = [[] for _ in active]
        for ci, clause in enumerate(cs.clauses):
            self.lits.append([(self.index[var], pol) for var, pol in clause.literals])
            self.weights.append(clause.weight)
            self.hard.append(clause.is_hard)
            for var, _ in clause.literals:
                self.occ[self.index[var]].append(ci)
        n = len(active)
        self.value: list[bool | None] = [None] * n
        self.sat_count = [0] * len(self.lits)
        self.unassigned = [len(l) for l in self.lits]
        self.cost = 0.0
        self.flips: list[int] = []
        self.trail: list[int] = []
        self.nodes = 0
        # Component results cached by their undecided-clause signature, so
        # chain-shaped subproblems are solved once instead of per branch.
        self.memo: dict[
            frozenset[tuple[int, tuple[int, ...]]],
            tuple[float, tuple[int, ...], dict[int, bool]] | None,
        ] = {}

    def _assign(self, vi: int, val: bool) -> bool:
        """Assign and update clause state; False on hard-clause conflict."""
        self.value[vi] = val
        self.trail.append(vi)
        if val != self.init[vi]:
            self.flips.append(vi)
        ok = True
        for ci in self.occ[vi]:
            self.unassigned[ci] -= 1
            if any(v == vi and p == val for v, p in self.lits[ci]):
                self.sat_count[ci] += 1
            if self.sat_count[ci] == 0 and self.unassigned[ci] == 0:
                if self.hard[ci]:
                    ok = False
                else:
                    self.cost += self.weights[ci]
        return ok

    def _undo_to(self, trail_mark: int, flip_mark: int) -> None:
        while len(self.trail) > trail_mark:
            vi = self.trail.pop()
            val = self.value[vi]
            for ci in self.occ[vi]:
                if self.sat_count[ci] == 0 and self.unassigned[ci] == 0 and not self.hard[ci]:
                    self.cost -= self.weights[ci]
                self.unassigned[ci] += 1
                if any(v == vi and p == val for v, p in self.lits[ci]):
                    self.sat_count[ci] -= 1
            self.value[vi] = None
        del self.flips[flip_mark:]

    def _propagate(self) -> bool:
        """Unit-propagate hard clauses until fixpoint; False on conflict."""
        changed = True
        while changed:
            changed = False
            for ci, is_hard in enumerate(self.hard):
                if not is_hard or self.sat_count[ci] > 0:
                    continue
                if self.unassigned[ci] == 0:
                    return False
                if self.unassigned[ci] == 1:
                    vi, pol = next(
                        (v, p) for v, p in self.lits[ci] if self.value[v] is None
                    )
                    if not self._assign(vi, pol):
                        return False
                    changed = True
        return True

    # A partial solution is (cost, flip positions, variable values); _better
    # implements the documented cost-then-flip-pattern order.

    @staticmethod
    def _better(
        a: tuple[float, tuple[int, ...], dict[int, bool]],
        b: tuple[float, tuple[int, ...], dict[int, bool]],
    ) -> bool:
        if a[0] < b[0] - EPSILON:
            return True
        if a[0] > b[0] + EPSILON:
            return False
        return _lex_key(a[1]) < _lex_key(b[1])

    def _solve_subset(
        self, clause_ids: Sequence[int]
    ) -> tuple[float, tuple[int, ...], dict[int, bool]] | None:
        """Best completion of the still-undecided clauses among clause_ids.

        Splits them into variable-disjoint components and solves each
        independently; variables not touching any undecided clause keep
        their initial labels at zero extra cost.
        """
        undecided = [
            ci
            for ci in clause_ids
            if self.sat_count[ci] == 0 and self.unassigned[ci] > 0
        ]
        if not undecided:
            return 0.0, (), {}

        parent: dict[int, int] = {}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for ci in undecided:
            free = [v for v, _ in self.lits[ci] if self.value[v] is None]
            for v in free:
                parent.setdefault(v, v)
            root = find(free[0])
            for v in free[1:]:
                parent[find(v)] = root

        components: dict[int, list[int]] = {}
        for ci in undecided:
            v = next(v for v, _ in self.lits[ci] if self.value[v] is None)
            components.setdefault(find(v), []).append(ci)

        total_cost = 0.0
        positions: list[int] = []
        values: dict[int, bool] = {}
        for root in sorted(components):
            result = self._solve_component(components[root])
            if result is None:
                return None
            total_cost += result[0]
            positions.extend(result[1])
            values.update(result[2])
        return total_cost, tuple(sorted(positions)), values

    def _solve_component(
        self, clause_ids: list[int]
    ) -> tuple[float, tuple[int, ...], dict[int, bool]] | None:
        """Branch on the component's busiest free variable.

        Picking the variable shared by the most undecided clauses splits the
        component quickly, which is what makes decomposition and the memo
        effective; the choice does not affect the result because both values
        are explored and compared under the documented order.
        """
        self.nodes += 1
        signature = frozenset(
            (ci, tuple(v for v, _ in self.lits[ci] if self.value[v] is None))
            for ci in clause_ids
        )
        if signature in self.memo:
            return self.memo[signature]
        degree: dict[int, int] = {}
        for ci in clause_ids:
            for v, _ in self.lits[ci]:
                if self.value[v] is None:
                    degree[v] = degree.get(v, 0) + 1
        vi = max(degree, key=lambda v: (degree[v], -v))
        best: tuple[float, tuple[int, ...], dict[int, bool]] | None = None
        for val in (self.init[vi], not self.init[vi]):
            trail_mark = len(self.trail)
            flip_mark = len(self.flips)
            cost_mark = self.cost
            if self._assign(vi, val) and self._propagate():
                local = self.cost - cost_mark
                if best is None or local <= best[0] + EPSILON:
                    sub = self._solve_subset(clause_ids)
                    if sub is not None:
                        candidate = (
                            local + sub[0],
                            tuple(sorted(self.flips[flip_mark:] + list(sub[1]))),
                            {
                                v: self.value[v]  # type: ignore[dict-item]
                                for v in self.trail[trail_mark:]
                            }
                            | sub[2],
                        )
                        if best is None or self._better(candidate, best):
                            best = candidate
            self._undo_to(trail_mark, flip_mark)
            # A zero-cost, zero-flip completion cannot be beaten.
            if best is not None and best[0] == 0.0 and not best[1]:
                break
        self.memo[signature] = best
        return best

    def run(self) -> tuple[SolveStatus, float, list[bool] | None, int]:
        if not self._propagate():
            return SolveStatus.INFEASIBLE, math.inf, None, 1
        result = self._solve_subset(range(len(self.lits)))
        if result is None:
            return SolveStatus.INFEASIBLE, math.inf, None, self.nodes
        values = [
            result[2].get(vi, self.value[vi] if self.value[vi] is not None else self.init[vi])
            for vi in range(len(self.order))
        ]
        return SolveStatus.OPTIMAL, self.cost + result[0], values, self.nodes


def solve(cs: WeightedClauseSet, max_variables: int = DEFAULT_MAX_VARIABLES) -> SolveResult:
    """Exact minimum-cost assignment over all variables; deterministic."""
    if len(cs.variable_order) > max_variables:
        raise SolverLimitError(
            f"{len(cs.variable_order)} variables exceeds the limit of {max_variables}"
        )
    depth_needed = 4 * len(cs.variable_order) + 200
    if sys.getrecursionlimit() < depth_needed:
        sys.setrecursionlimit(depth_needed)
    search = _BranchAndBound(cs)
    status, cost, values, nodes = search.run()
    if status is SolveStatus.INFEASIBLE:
        return SolveResult({}, math.inf, status, nodes)
    assignment = {var: bool(cs.initial_labels[var]) for var in cs.variable_order}
    for vi, var in enumerate(search.order):
        assignment[var] = values[vi]
    return SolveResult(assignment, cost, status, nodes)


def brute_force_solve(
    cs: WeightedClauseSet, max_variables: int = BRUTE_FORCE_MAX_VARIABLES
) -> SolveResult:
    """Exhaustive reference enumeration, independent of the search path."""
    order = cs.variable_order
    n = len(order)
    if n > max_variables:
        raise SolverLimitError(
            f"{n} variables exceeds the brute-force limit of {max_variables}"
        )
    index = {var: i for i, var in enumerate(order)}
    init_bits = 0
    for var, i in index.items():
        if cs.initial_labels[var]:
            init_bits |= 1 << i

    m = np.arange(1 << n, dtype=np.uint32)
    costs = np.zeros(1 << n, dtype=np.float64)
    feasible = np.ones(1 << n, dtype=bool)
    full = np.uint32((1 << n) - 1)
    for clause in cs.clauses:
        pos_mask = np.uint32(0)
        neg_mask = np.uint32(0)
        for var, pol in clause.literals:
            bit = np.uint32(1 << index[var])
            if pol:
                pos_mask |= bit
            else:
                neg_mask |= bit
        satisfied = ((m & pos_mask) != 0) | ((~m & full & neg_mask) != 0)
        if clause.is_hard:
            feasible &= satisfied
        else:
            costs += np.where(satisfied, 0.0, clause.weight)

    if not feasible.any():
        return SolveResult({}, math.inf, SolveStatus.INFEASIBLE, 1 << n)
    costs[~feasible] = np.inf
    best_cost = costs.min()
    candidates = np.nonzero(costs <= best_cost + EPSILON)[0]

    def key(mask: int) -> tuple[int, ...]:
        flips = int(mask) ^ init_bits
        return _lex_key(i for i in range(n) if flips >> i & 1)

    winner = int(min(candidates, key=key))
    assignment = {var: bool(winner >> index[var] & 1) for var in order}
    return SolveResult(assignment, float(costs[winner]), SolveStatus.OPTIMAL, 1 << n)


def write_wcnf(cs: WeightedClauseSet, scale: int = 10**6) -> str:
    """WCNF-style text: header with counts and hard-weight sentinel, then
    one zero-terminated clause per line with the (integer-scaled) weight first."""
    order = cs.variable_order
    number = {var: i + 1 for i, var in enumerate(order)}
    soft_total = sum(
        max(1, round(c.weight * scale)) for c in cs.clauses if not c.is_hard
    )
    top = soft_total + 1
    lines = [f"p wcnf {len(order)} {len(cs.clauses)} {top}"]
    for clause in cs.clauses:
        weight = top if clause.is_hard else max(1, round(clause.weight * scale))
        lits = " ".join(
            str(number[var] if pol else -number[var]) for var, pol in clause.literals
        )
        lines.append(f"{weight} {lits} 0")
    return "\n".join(lines) + "\n"
