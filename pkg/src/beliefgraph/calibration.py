"""Score calibration: raw oracle scores to node/rule confidences.

Raw model scores are heavily skewed towards 0 and 1, so they are squashed
with exp(k * (s - 1)) per channel, with a per-rule-type importance factor
t on top.  Also hosts the XOR margin filter and boundary damping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .model import BeliefGraph, RuleType


@dataclass(frozen=True)
class CalibrationConfig:
    """Calibration and construction hyperparameters (tuned once, then frozen)."""

    k: float = 9.0
    k_entailment: float = 36.0
    k_xor: float = 30.0
    k_mc: float = 9.0
    t_entailment: float = 1.02
    t_xor: float = 1.1
    t_mc: float = 0.98
    m_xor: float = 0.3
    beta: float = 0.95
    d_max: int = 5

    def __post_init__(self) -> None:
        for name in ("k", "k_entailment", "k_xor", "k_mc",
                     "t_entailment", "t_xor", "t_mc"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 <= self.m_xor <= 1.0:
            raise ValueError("m_xor must be in [0, 1]")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError("beta must be in (0, 1]")
        if self.d_max < 0:
            raise ValueError("d_max must be non-negative")


def calibrate_statement(s_raw: float, cfg: CalibrationConfig) -> float:
    """exp(k * (s_raw - 1)); strictly increasing, maps 1.0 to 1.0."""
    if not 0.0 <= s_raw <= 1.0:
        raise ValueError(f"raw statement score must be in [0, 1], got {s_raw!r}")
    return math.exp(cfg.k * (s_raw - 1.0))


_RULE_CHANNELS = {
    RuleType.ENTAILMENT: ("k_entailment", "t_entailment"),
    RuleType.XOR_PAIR: ("k_xor", "t_xor"),
    RuleType.MC_PAIRWISE: ("k_mc", "t_mc"),
}


def calibrate_rule(s_raw: float, rule_type: RuleType, cfg: CalibrationConfig) -> float:
    """t_i * exp(k_i * (s_raw - 1)) with a (k, t) channel per rule type.

    XOR and MC rules are fed a raw score of 1.0, so their confidences come
    out as exactly t_xor and t_mc.  May exceed 1; costs are unnormalized.
    """
    if rule_type not in _RULE_CHANNELS:
        raise ValueError(f"{rule_type} rules are never calibrated")
    if not 0.0 <= s_raw <= 1.0:
        raise ValueError(f"raw rule score must be in [0, 1], got {s_raw!r}")
    k_name, t_name = _RULE_CHANNELS[rule_type]
    k = getattr(cfg, k_name)
    t = getattr(cfg, t_name)
    return t * math.exp(k * (s_raw - 1.0))


def label_from_score(s_d: float) -> tuple[bool, float]:
    """Map a truth score to (label, raw confidence): (True, s) iff s >= 0.5."""
    if not 0.0 <= s_d <= 1.0:
        raise ValueError(f"truth score must be in [0, 1], got {s_d!r}")
    if s_d >= 0.5:
        return True, s_d
    return False, 1.0 - s_d


def xor_admissible(score_h: float, score_negh: float, cfg: CalibrationConfig) -> bool:
    """Keep an XOR pair only when the two raw truth scores clearly disagree.

    The margin test is inclusive: a gap of exactly m_xor drops the pair.  A
    tiny tolerance keeps that boundary stable under float rounding (e.g.
    0.8 - 0.5 evaluates slightly above 0.3).
    """
    return abs(score_h - score_negh) - cfg.m_xor > 1e-12


def apply_boundary_damping(graph: BeliefGraph, cfg: CalibrationConfig) -> BeliefGraph:
    """Scale down entailment rules whose premises have no support of their own.

    A premise counts as a leaf when no entailment rule in the graph concludes
    it.  Applied exactly once, at the end of construction.
    """
    concluded = {
        sid
        for rule in graph.rules
        if rule.rule_type is RuleType.ENTAILMENT
        for sid in rule.hypothesis_ids
    }
    rules = []
    for rule in graph.rules:
        if (
            rule.rule_type is RuleType.ENTAILMENT
            and not rule.is_hard
            and rule.premise_ids
            and all(p not in concluded for p in rule.premise_ids)
        ):
            rule = replace(rule, confidence=rule.confidence * cfg.beta)
        rules.append(rule)
    return BeliefGraph(dict(graph.statements), tuple(rules), graph.hypotheses)
