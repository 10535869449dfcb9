"""Belief-graph data model: statement and rule nodes, assignments, costs.

A belief graph is a bipartite factor graph: statement nodes carry a
true/false label and a confidence, rule nodes are disjunctive constraints
over statements.  All cost arithmetic stays in negative-log space; weights
are computed only on demand so large graphs never underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping

# Hard constraints carry an infinite confidence marker instead of a large
# finite weight, so solver correctness never depends on a magic constant.
HARD = math.inf

# Total cost of an assignment that violates a hard constraint.
INFEASIBLE_COST = math.inf


class RuleType(Enum):
    ENTAILMENT = "entailment"
    XOR_PAIR = "xor"
    MC_HARD = "mc_hard"
    MC_PAIRWISE = "mc_pairwise"


StatementId = int
Literal = tuple[StatementId, bool]
Clause = tuple[Literal, ...]
Assignment = Mapping[StatementId, bool]


class EvaluationError(KeyError):
    """A rule or cost evaluation referenced a statement missing from the assignment."""


@dataclass(frozen=True)
class StatementNode:
    """A natural-language statement with a believed label and confidence."""

    id: StatementId
    text: str
    label: bool
    confidence: float
    depth: int = 0
    is_hypothesis: bool = False
    is_negation_of: StatementId | None = None
    raw_score: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(
                f"statement confidence must be in [0, 1], got {self.confidence!r}"
            )
        if self.depth < 0:
            raise ValueError("statement depth must be non-negative")


@dataclass(frozen=True)
class RuleNode:
    """A disjunctive constraint, viewed as conjunctive premises -> disjunctive hypotheses.

    XOR pairs store a statement and its negation in ``hypothesis_ids`` and
    expand to their two clauses; MC_PAIRWISE holds the two mutually
    exclusive hypotheses and expands to a single all-negative clause.
    """

    id: str
    rule_type: RuleType
    premise_ids: tuple[StatementId, ...]
    hypothesis_ids: tuple[StatementId, ...]
    confidence: float
    raw_score: float = 1.0

    def __post_init__(self) -> None:
        if not self.hypothesis_ids:
            raise ValueError(f"rule {self.id}: hypothesis_ids must be non-empty")
        if set(self.premise_ids) & set(self.hypothesis_ids):
            raise ValueError(f"rule {self.id}: premises and hypotheses overlap")
        if self.rule_type is RuleType.MC_HARD:
            if self.confidence != HARD:
                raise ValueError(f"rule {self.id}: MC_HARD must have HARD confidence")
        else:
            if not math.isfinite(self.confidence) or self.confidence < 0.0:
                raise ValueError(
                    f"rule {self.id}: soft confidence must be finite and >= 0"
                )
        if self.rule_type is RuleType.ENTAILMENT and len(self.hypothesis_ids) != 1:
            raise ValueError(f"rule {self.id}: entailment rules have one hypothesis")
        if self.rule_type in (RuleType.XOR_PAIR, RuleType.MC_PAIRWISE):
            if self.premise_ids or len(self.hypothesis_ids) != 2:
                raise ValueError(
                    f"rule {self.id}: {self.rule_type.value} rules pair two statements"
                )

    @property
    def is_hard(self) -> bool:
        return self.confidence == HARD

    def statement_ids(self) -> tuple[StatementId, ...]:
        return self.premise_ids + self.hypothesis_ids

    def clauses(self) -> tuple[Clause, ...]:
        """The disjunctive clause(s) this rule contributes."""
        if self.rule_type is RuleType.XOR_PAIR:
            a, b = self.hypothesis_ids
            return (((a, True), (b, True)), ((a, False), (b, False)))
        if self.rule_type is RuleType.MC_PAIRWISE:
            a, b = self.hypothesis_ids
            return (((a, False), (b, False)),)
        negatives = tuple((s, False) for s in self.premise_ids)
        positives = tuple((s, True) for s in self.hypothesis_ids)
        return (negatives + positives,)


@dataclass(frozen=True, eq=True)
class BeliefGraph:
    """Bipartite factor graph of statement and rule nodes, with designated hypotheses."""

    statements: dict[StatementId, StatementNode]
    rules: tuple[RuleNode, ...]
    hypotheses: tuple[StatementId, ...]

    def __post_init__(self) -> None:
        if not self.hypotheses:
            raise ValueError("belief graph needs at least one hypothesis")
        for h in self.hypotheses:
            if h not in self.statements:
                raise ValueError(f"hypothesis {h} has no statement node")
        for rule in self.rules:
            for sid in rule.statement_ids():
                if sid not in self.statements:
                    raise ValueError(f"rule {rule.id} references unknown statement {sid}")

    def initial_assignment(self) -> dict[StatementId, bool]:
        return {sid: node.label for sid, node in self.statements.items()}

    def rule_by_id(self, rule_id: str) -> RuleNode:
        for rule in self.rules:
            if rule.id == rule_id:
                return rule
        raise KeyError(rule_id)

    def with_labels(self, assignment: Assignment) -> "BeliefGraph":
        """A copy of the graph with statement labels replaced by the assignment."""
        statements = {
            sid: replace(node, label=bool(assignment[sid]))
            for sid, node in self.statements.items()
        }
        return BeliefGraph(statements, self.rules, self.hypotheses)

    def without_rules(self, rule_ids: Iterable[str]) -> "BeliefGraph":
        dropped = set(rule_ids)
        kept = tuple(r for r in self.rules if r.id not in dropped)
        return BeliefGraph(dict(self.statements), kept, self.hypotheses)


def statement_cost(node: StatementNode, assigned: bool) -> float:
    """0 when the assignment agrees with the believed label, else the confidence."""
    return 0.0 if assigned == node.label else node.confidence


def clause_satisfied(clause: Clause, assignment: Assignment) -> bool:
    try:
        return any(assignment[var] == polarity for var, polarity in clause)
    except KeyError as exc:
        raise EvaluationError(f"assignment missing statement {exc.args[0]}") from exc


def rule_satisfied(rule: RuleNode, assignment: Assignment) -> bool:
    return all(clause_satisfied(c, assignment) for c in rule.clauses())


def rule_cost(rule: RuleNode, assignment: Assignment) -> float:
    """0 if satisfied, the confidence if violated (infinite for hard rules)."""
    return 0.0 if rule_satisfied(rule, assignment) else rule.confidence


def total_cost(graph: BeliefGraph, assignment: Assignment) -> float:
    """Summed statement and rule costs; INFEASIBLE_COST if a hard rule is violated."""
    cost = 0.0
    for sid, node in graph.statements.items():
        if sid not in assignment:
            raise EvaluationError(f"assignment missing statement {sid}")
        cost += statement_cost(node, assignment[sid])
    for rule in graph.rules:
        cost += rule_cost(rule, assignment)
    return cost


def assignment_weight(graph: BeliefGraph, assignment: Assignment) -> float:
    """exp(-total cost); 0.0 for infeasible assignments."""
    cost = total_cost(graph, assignment)
    if math.isinf(cost):
        return 0.0
    return math.exp(-cost)
