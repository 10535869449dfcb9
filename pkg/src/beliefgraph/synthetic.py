"""Seeded synthetic fixtures: belief graphs with known violations and
random weighted clause sets.  All randomness is seed-controlled."""

from __future__ import annotations

import random

from .model import HARD, BeliefGraph, RuleNode, RuleType, StatementNode
from .maxsat import WeightedClause, WeightedClauseSet


def synthetic_graph(
    seed: int,
    n_hypotheses: int = 4,
    target_statements: int = 400,
    target_rules: int = 90,
) -> BeliefGraph:
    """A random belief graph with at least one initially violated rule.

    Shape mirrors construction output: a layered entailment structure under
    the hypotheses, XOR-linked negation nodes, and the MC constraints.
    """
    rng = random.Random(seed)
    n_statements = rng.randint(max(n_hypotheses * 4, 50), target_statements)
    statements: dict[int, StatementNode] = {}
    rules: list[RuleNode] = []

    def conf() -> float:
        return round(rng.uniform(0.05, 0.99), 3)

    def add_statement(depth: int, label: bool | None = None, hyp: bool = False) -> int:
        sid = len(statements)
        statements[sid] = StatementNode(
            id=sid,
            text=f"synthetic statement {sid}",
            label=rng.random() < 0.8 if label is None else label,
            confidence=conf(),
            depth=depth,
            is_hypothesis=hyp,
        )
        return sid

    hyp_ids = [add_statement(0, hyp=True) for _ in range(n_hypotheses)]
    interior = list(hyp_ids)

    n_pairwise = n_hypotheses * (n_hypotheses - 1) // 2
    entailment_budget = max(1, target_rules - 1 - n_pairwise - 10)
    while len(rules) < entailment_budget and len(statements) < n_statements - 2:
        conclusion = rng.choice(interior)
        n_premises = rng.randint(1, 3)
        depth = statements[conclusion].depth + 1
        premise_ids = tuple(add_statement(depth, label=True) for _ in range(n_premises))
        # Roughly a quarter of the rules are seeded as violated: all
        # premises true, conclusion forced false.
        violated = rng.random() < 0.25
        if violated and statements[conclusion].label:
            node = statements[conclusion]
            statements[conclusion] = StatementNode(
                id=node.id, text=node.text, label=False, confidence=node.confidence,
                depth=node.depth, is_hypothesis=node.is_hypothesis,
            )
        rules.append(
            RuleNode(
                id=f"r{len(rules)}",
                rule_type=RuleType.ENTAILMENT,
                premise_ids=premise_ids,
                hypothesis_ids=(conclusion,),
                confidence=conf(),
                raw_score=1.0,
            )
        )
        interior.extend(premise_ids)

    # XOR pairs; about half seeded as violated (both sides believed true).
    for _ in range(min(10, (n_statements - len(statements)) // 2)):
        base = rng.choice(interior)
        neg = add_statement(statements[base].depth + 1, label=None)
        node = statements[neg]
        statements[neg] = StatementNode(
            id=node.id, text=node.text,
            label=statements[base].label if rng.random() < 0.5 else not statements[base].label,
            confidence=node.confidence, depth=node.depth, is_negation_of=base,
        )
        rules.append(
            RuleNode(
                id=f"r{len(rules)}",
                rule_type=RuleType.XOR_PAIR,
                premise_ids=(),
                hypothesis_ids=(base, neg),
                confidence=round(rng.uniform(0.5, 1.1), 3),
                raw_score=1.0,
            )
        )

    rules.append(
        RuleNode(
            id=f"r{len(rules)}",
            rule_type=RuleType.MC_HARD,
            premise_ids=(),
            hypothesis_ids=tuple(hyp_ids),
            confidence=HARD,
        )
    )
    for i in range(n_hypotheses):
        for j in range(i + 1, n_hypotheses):
            rules.append(
                RuleNode(
                    id=f"r{len(rules)}",
                    rule_type=RuleType.MC_PAIRWISE,
                    premise_ids=(),
                    hypothesis_ids=(hyp_ids[i], hyp_ids[j]),
                    confidence=0.98,
                    raw_score=1.0,
                )
            )

    graph = BeliefGraph(statements, tuple(rules), tuple(hyp_ids))

    # Guarantee at least one initial violation: force the first entailment
    # rule's conclusion false with all premises true.
    first = next(r for r in graph.rules if r.rule_type is RuleType.ENTAILMENT)
    assignment = graph.initial_assignment()
    if all(assignment[p] for p in first.premise_ids) and not assignment[first.hypothesis_ids[0]]:
        return graph
    fixed = dict(graph.statements)
    for sid in first.premise_ids:
        node = fixed[sid]
        fixed[sid] = StatementNode(
            id=node.id, text=node.text, label=True, confidence=node.confidence,
            depth=node.depth, is_hypothesis=node.is_hypothesis,
            is_negation_of=node.is_negation_of,
        )
    node = fixed[first.hypothesis_ids[0]]
    fixed[node.id] = StatementNode(
        id=node.id, text=node.text, label=False, confidence=node.confidence,
        depth=node.depth, is_hypothesis=node.is_hypothesis,
        is_negation_of=node.is_negation_of,
    )
    return BeliefGraph(fixed, graph.rules, graph.hypotheses)


def random_clause_set(
    seed: int,
    min_variables: int = 8,
    max_variables: int = 18,
) -> WeightedClauseSet:
    """A random mixed hard/soft instance for solver cross-checking."""
    rng = random.Random(seed)
    n = rng.randint(min_variables, max_variables)
    variables = list(range(n))
    initial = {v: rng.random() < 0.5 for v in variables}
    clauses: list[WeightedClause] = []
    for v in variables:
        if rng.random() < 0.8:
            clauses.append(
                WeightedClause(((v, initial[v]),), round(rng.uniform(0.05, 1.0), 3))
            )
    for _ in range(rng.randint(n // 2, 2 * n)):
        width = rng.randint(2, min(4, n))
        chosen = rng.sample(variables, width)
        literals = tuple((v, rng.random() < 0.5) for v in chosen)
        clauses.append(WeightedClause(literals, round(rng.uniform(0.05, 1.2), 3)))
    for _ in range(rng.randint(0, 2)):
        width = rng.randint(2, min(4, n))
        chosen = rng.sample(variables, width)
        literals = tuple((v, rng.random() < 0.5) for v in chosen)
        clauses.append(WeightedClause(literals, HARD))
    return WeightedClauseSet.from_clauses(clauses, initial, variable_order=variables)
