"""Belief-graph construction and exact MaxSAT-based belief revision."""

from .calibration import (
    CalibrationConfig,
    apply_boundary_damping,
    calibrate_rule,
    calibrate_statement,
    label_from_score,
    xor_admissible,
)
from .construction import (
    BeliefOracle,
    ConstructionError,
    HypothesisSet,
    MockOracle,
    canonicalize,
    generate_graph,
)
from .maxsat import (
    SolveResult,
    SolveStatus,
    SolverLimitError,
    WeightedClause,
    WeightedClauseSet,
    brute_force_solve,
    encode,
    solve,
    write_wcnf,
)
from .metrics import (
    ConsistencyReport,
    DatasetReport,
    ablate,
    consistency,
    evaluate_dataset,
    mc_accuracy,
)
from .model import (
    HARD,
    Assignment,
    BeliefGraph,
    RuleNode,
    RuleType,
    StatementNode,
    assignment_weight,
    rule_cost,
    rule_satisfied,
    statement_cost,
    total_cost,
)
from .oracle_client import (
    OracleDecodeError,
    OracleTransportError,
    RemoteOracle,
)
from .reasoner import (
    ExplanationSubgraph,
    ReasoningError,
    ReasoningOutcome,
    extract_explanation,
    predict,
    reason,
    resolve_interactive,
)
from .serialize import (
    SCHEMA_VERSION,
    InputError,
    document_to_graph,
    dumps,
    graph_to_document,
    load_graph,
    save_graph,
)

__version__ = "0.1.0"

__all__ = [
    "HARD",
    "Assignment",
    "BeliefGraph",
    "BeliefOracle",
    "CalibrationConfig",
    "ConsistencyReport",
    "ConstructionError",
    "DatasetReport",
    "ExplanationSubgraph",
    "HypothesisSet",
    "InputError",
    "MockOracle",
    "OracleDecodeError",
    "OracleTransportError",
    "ReasoningError",
    "ReasoningOutcome",
    "RemoteOracle",
    "RuleNode",
    "RuleType",
    "SCHEMA_VERSION",
    "SolveResult",
    "SolveStatus",
    "SolverLimitError",
    "StatementNode",
    "WeightedClause",
    "WeightedClauseSet",
    "ablate",
    "apply_boundary_damping",
    "assignment_weight",
    "brute_force_solve",
    "calibrate_rule",
    "calibrate_statement",
    "canonicalize",
    "consistency",
    "document_to_graph",
    "dumps",
    "encode",
    "evaluate_dataset",
    "extract_explanation",
    "generate_graph",
    "label_from_score",
    "load_graph",
    "mc_accuracy",
    "predict",
    "reason",
    "resolve_interactive",
    "rule_cost",
    "rule_satisfied",
    "save_graph",
    "solve",
    "statement_cost",
    "total_cost",
    "write_wcnf",
    "xor_admissible",
]
