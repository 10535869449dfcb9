"""Belief-graph construction by recursive backward chaining over an oracle.

The oracle answers four kinds of queries: premise generation, statement
truth scoring, entailment scoring, and negation.  Construction walks each
hypothesis down to a depth limit, adding entailment rules, negations with
XOR pairs, and the multiple-choice constraints over the hypothesis set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Protocol, Sequence, runtime_checkable

from .calibration import (
    CalibrationConfig,
    apply_boundary_damping,
    calibrate_rule,
    calibrate_statement,
    label_from_score,
    xor_admissible,
)
from .model import (
    HARD,
    BeliefGraph,
    RuleNode,
    RuleType,
    StatementId,
    StatementNode,
)

DEFAULT_MAX_STATEMENTS = 2000

_WS = re.compile(r"\s+")


class ConstructionError(RuntimeError):
    """Graph construction failed; carries how far it got."""

    def __init__(self, message: str, statements_built: int = 0, rules_built: int = 0):
        super().__init__(message)
        self.statements_built = statements_built
        self.rules_built = rules_built


def canonicalize(text: str) -> str:
    """Lowercased, whitespace-collapsed, terminal-period-stripped node identity."""
    if not text or not text.strip():
        raise ValueError("cannot canonicalize empty text")
    canon = _WS.sub(" ", text.strip()).lower()
    return canon.rstrip(".").rstrip()


@runtime_checkable
class BeliefOracle(Protocol):
    """Behavioral interface for the model behind graph construction.

    Implementations must be deterministic for a fixed instance and input;
    live LLM backends are expected to cache.
    """

    def generate_premises(self, statement: str) -> list[str]:
        """Premises that together may entail the statement (may be empty)."""
        ...

    def score_statement(self, statement: str) -> float:
        """Truth score in [0, 1]: how strongly the model believes the statement."""
        ...

    def score_entailment(self, premises: Sequence[str], hypothesis: str) -> float:
        """Score in [0, 1] for how strongly the premises jointly entail the hypothesis."""
        ...

    def negate(self, statement: str) -> str:
        """The negated form of the statement."""
        ...


NEGATION_PREFIX = "it is not the case that "


def entailment_key(premises: Sequence[str], hypothesis: str) -> str:
    """Canonical lookup key for an entailment query."""
    return " && ".join(canonicalize(p) for p in premises) + " => " + canonicalize(hypothesis)


@dataclass
class MockOracle:
    """Deterministic table-driven oracle for desk-scale runs and tests.

    Unknown statements score ``default_score``, unknown premise queries
    return no premises, and unknown negations toggle a fixed prefix (an
    involution under canonicalization).
    """

    premises: dict[str, list[str]] = field(default_factory=dict)
    statement_scores: dict[str, float] = field(default_factory=dict)
    entailment_scores: dict[str, float] = field(default_factory=dict)
    negations: dict[str, str] = field(default_factory=dict)
    default_score: float = 0.5
    default_entailment_score: float = 0.85

    def __post_init__(self) -> None:
        self.premises = {canonicalize(k): list(v) for k, v in self.premises.items()}
        self.statement_scores = {
            canonicalize(k): float(v) for k, v in self.statement_scores.items()
        }
        self.entailment_scores = {k: float(v) for k, v in self.entailment_scores.items()}
        self.negations = {canonicalize(k): v for k, v in self.negations.items()}

    def generate_premises(self, statement: str) -> list[str]:
        return list(self.premises.get(canonicalize(statement), []))

    def score_statement(self, statement: str) -> float:
        return self.statement_scores.get(canonicalize(statement), self.default_score)

    def score_entailment(self, premises: Sequence[str], hypothesis: str) -> float:
        key = entailment_key(premises, hypothesis)
        return self.entailment_scores.get(key, self.default_entailment_score)

    def negate(self, statement: str) -> str:
        canon = canonicalize(statement)
        if canon in self.negations:
            return self.negations[canon]
        if canon.startswith(NEGATION_PREFIX):
            return canon[len(NEGATION_PREFIX):]
        return NEGATION_PREFIX + canon


@dataclass(frozen=True)
class HypothesisSet:
    """Candidate answers for one question, as declarative sentences."""

    hypotheses: tuple[str, ...]
    gold_index: int | None = None
    question_id: str | None = None

    def __post_init__(self) -> None:
        if not self.hypotheses:
            raise ValueError("hypothesis set must be non-empty")
        canon = [canonicalize(h) for h in self.hypotheses]
        if len(set(canon)) != len(canon):
            raise ValueError("duplicate hypotheses after canonicalization")
        if self.gold_index is not None and not 0 <= self.gold_index < len(self.hypotheses):
            raise ValueError("gold_index out of range")


class _Builder:
    def __init__(self, oracle: BeliefOracle, cfg: CalibrationConfig, max_statements: int):
        self.oracle = oracle
        self.cfg = cfg
        self.max_statements = max_statements
        self.nodes: dict[StatementId, StatementNode] = {}
        self.ids: dict[str, StatementId] = {}
        self.rules: list[RuleNode] = []
        self.xor_pairs: set[frozenset[StatementId]] = set()
        self._score_cache: dict[str, float] = {}
        self._premise_cache: dict[str, list[str]] = {}
        self._negation_cache: dict[str, str] = {}

    def _score(self, text: str) -> float:
        canon = canonicalize(text)
        if canon not in self._score_cache:
            self._score_cache[canon] = float(self.oracle.score_statement(text))
        return self._score_cache[canon]

    def _premises(self, text: str) -> list[str]:
        canon = canonicalize(text)
        if canon not in self._premise_cache:
            self._premise_cache[canon] = list(self.oracle.generate_premises(text))
        return self._premise_cache[canon]

    def _negate(self, text: str) -> str:
        canon = canonicalize(text)
        if canon not in self._negation_cache:
            self._negation_cache[canon] = self.oracle.negate(text)
        return self._negation_cache[canon]

    def next_rule_id(self) -> str:
        return f"r{len(self.rules)}"

    def extend(self, text: str, depth: int) -> StatementId:
        canon = canonicalize(text)
        if canon in self.ids:
            return self.ids[canon]
        if len(self.nodes) >= self.max_statements:
            raise ConstructionError(
                f"statement budget of {self.max_statements} exhausted",
                statements_built=len(self.nodes),
                rules_built=len(self.rules),
            )
        s_d = self._score(text)
        label, raw_conf = label_from_score(s_d)
        sid = len(self.nodes)
        self.ids[canon] = sid
        self.nodes[sid] = StatementNode(
            id=sid,
            text=_WS.sub(" ", text.strip()),
            label=label,
            confidence=calibrate_statement(raw_conf, self.cfg),
            depth=depth,
            raw_score=s_d,
        )
        if depth < self.cfg.d_max:
            premises = [p for p in self._premises(text) if canonicalize(p) != canon]
            if premises:
                premise_ids = tuple(dict.fromkeys(self.extend(p, depth + 1) for p in premises))
                premise_ids = tuple(p for p in premise_ids if p != sid)
                if premise_ids:
                    s_e = float(self.oracle.score_entailment(premises, text))
                    self.rules.append(
                        RuleNode(
                            id=self.next_rule_id(),
                            rule_type=RuleType.ENTAILMENT,
                            premise_ids=premise_ids,
                            hypothesis_ids=(sid,),
                            confidence=calibrate_rule(s_e, RuleType.ENTAILMENT, self.cfg),
                            raw_score=s_e,
                        )
                    )
            neg_text = self._negate(text)
            neg_id = self.extend(neg_text, depth + 1)
            if neg_id != sid:
                neg_node = self.nodes[neg_id]
                if neg_node.is_negation_of is None and neg_node.id != sid:
                    self.nodes[neg_id] = replace(neg_node, is_negation_of=sid)
                pair = frozenset((sid, neg_id))
                if pair not in self.xor_pairs:
                    self.xor_pairs.add(pair)
                    if xor_admissible(self._score(text), self._score(neg_text), self.cfg):
                        self.rules.append(
                            RuleNode(
                                id=self.next_rule_id(),
                                rule_type=RuleType.XOR_PAIR,
                                premise_ids=(),
                                hypothesis_ids=(sid, neg_id),
                                confidence=calibrate_rule(1.0, RuleType.XOR_PAIR, self.cfg),
                                raw_score=1.0,
                            )
                        )
        return sid


def generate_graph(
    hypothesis_set: HypothesisSet,
    oracle: BeliefOracle,
    cfg: CalibrationConfig | None = None,
    max_statements: int = DEFAULT_MAX_STATEMENTS,
) -> BeliefGraph:
    """Build the belief graph for a hypothesis set.

    Each hypothesis is expanded from depth 0; the multiple-choice
    constraints (one hard at-least-one clause, soft pairwise exclusions)
    are added over the hypothesis set, and boundary damping runs last.
    """
    cfg = cfg or CalibrationConfig()
    builder = _Builder(oracle, cfg, max_statements)
    hyp_ids: list[StatementId] = []
    try:
        for h in hypothesis_set.hypotheses:
            hyp_ids.append(builder.extend(h, 0))
    except ConstructionError:
        raise
    except Exception as exc:
        raise ConstructionError(
            f"oracle failure during construction: {exc}",
            statements_built=len(builder.nodes),
            rules_built=len(builder.rules),
        ) from exc

    for sid in hyp_ids:
        builder.nodes[sid] = replace(builder.nodes[sid], is_hypothesis=True)

    builder.rules.append(
        RuleNode(
            id=builder.next_rule_id(),
            rule_type=RuleType.MC_HARD,
            premise_ids=(),
            hypothesis_ids=tuple(hyp_ids),
            confidence=HARD,
        )
    )
    for i in range(len(hyp_ids)):
        for j in range(i + 1, len(hyp_ids)):
            builder.rules.append(
                RuleNode(
                    id=builder.next_rule_id(),
                    rule_type=RuleType.MC_PAIRWISE,
                    premise_ids=(),
                    hypothesis_ids=(hyp_ids[i], hyp_ids[j]),
                    confidence=calibrate_rule(1.0, RuleType.MC_PAIRWISE, cfg),
                    raw_score=1.0,
                )
            )

    graph = BeliefGraph(dict(builder.nodes), tuple(builder.rules), tuple(hyp_ids))
    return apply_boundary_damping(graph, cfg)
