"""Command-line surface: graph building, reasoning, interactive resolution,
and DOT export.

Exit codes: 0 ok, 2 input error, 3 oracle error, 4 infeasible, 5 internal.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .calibration import CalibrationConfig
from .construction import (
    BeliefOracle,
    ConstructionError,
    HypothesisSet,
    generate_graph,
)
from .dot import to_dot
from .metrics import ABLATABLE, ablate, consistency
from .oracle_client import OracleDecodeError, OracleTransportError, RemoteOracle
from .reasoner import ReasoningError, reason, resolve_interactive
from .serialize import (
    InputError,
    config_digest,
    dumps,
    graph_to_document,
    load_config,
    load_graph,
    load_mock_oracle,
    outcome_to_document,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ORACLE = 3
EXIT_INFEASIBLE = 4
EXIT_INTERNAL = 5


def _make_oracle(spec: str, cache_dir: Path | None = None) -> BeliefOracle:
    kind, _, rest = spec.partition(":")
    if kind == "mock" and rest:
        return load_mock_oracle(rest)
    if kind == "remote" and rest:
        cache = cache_dir / "oracle_cache.json" if cache_dir else None
        return RemoteOracle(rest, cache_path=cache)
    raise InputError(f"oracle spec must be mock:<path> or remote:<url>, got {spec!r}")


def _load_questions(path: str) -> list[HypothesisSet]:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc
    entries = raw if isinstance(raw, list) else [raw]
    questions = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "hypotheses" not in entry:
            raise InputError(f"{path}: question [{i}] must be an object with 'hypotheses'")
        try:
            questions.append(
                HypothesisSet(
                    hypotheses=tuple(str(h) for h in entry["hypotheses"]),
                    gold_index=entry.get("gold_index"),
                    question_id=entry.get("question_id"),
                )
            )
        except ValueError as exc:
            raise InputError(f"{path}: question [{i}]: {exc}") from exc
    return questions


def _provenance(args: argparse.Namespace, cfg: CalibrationConfig) -> dict:
    return {
        "oracle": args.oracle,
        "config_digest": config_digest(cfg),
        "seed": getattr(args, "seed", None),
    }


def _cmd_build_graph(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, {"d_max": args.d_max})
    questions = _load_questions(args.input)
    out = Path(args.output) if args.output else None
    oracle = _make_oracle(args.oracle, cache_dir=out.parent if out else Path("."))
    provenance = _provenance(args, cfg)

    if len(questions) == 1 and out is not None:
        graph = generate_graph(questions[0], oracle, cfg)
        out.write_text(dumps(graph_to_document(graph, provenance)))
        print(f"wrote {out}: {len(graph.statements)} statements, {len(graph.rules)} rules")
        return EXIT_OK

    if args.out_dir is None:
        raise InputError("multiple questions require --out-dir")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    def build(pair):
        index, question = pair
        graph = generate_graph(question, oracle, cfg)
        name = question.question_id or f"question_{index:04d}"
        path = out_dir / f"{name}.json"
        path.write_text(dumps(graph_to_document(graph, provenance)))
        return path

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        for path in pool.map(build, enumerate(questions)):
            print(f"wrote {path}")
    return EXIT_OK


def _summarize(graph, full_graph, outcome) -> dict:
    before = consistency(full_graph)
    after = consistency(full_graph, outcome.final_assignment)
    return {
        "tau_before": before.tau,
        "tau_after": after.tau,
        "self_consistency_before": before.self_consistency,
        "self_consistency_after": after.self_consistency,
        "flips": len(outcome.flipped),
        "discarded_rules": len(outcome.discarded_rules),
    }


def _print_summary(graph, outcome, summary: dict) -> None:
    print(f"tau before reasoning:  {summary['tau_before']:.4f}")
    print(f"tau after reasoning:   {summary['tau_after']:.4f}")
    print(f"{summary['flips']} flips, {summary['discarded_rules']} rules discarded")
    answers = [graph.statements[h].text for h in sorted(outcome.predictions)]
    if answers:
        print("answer: " + "; ".join(answers))
    else:
        print("answer: (no hypothesis believed)")


def _cmd_reason(args: argparse.Namespace) -> int:
    full_graph = load_graph(args.graph)
    graph = ablate(full_graph, args.ablate) if args.ablate else full_graph
    outcome = reason(graph)
    summary = _summarize(graph, full_graph, outcome)
    if args.output:
        Path(args.output).write_text(dumps(outcome_to_document(outcome, summary)))
    if args.export_dot:
        Path(args.export_dot).write_text(
            to_dot(full_graph, outcome.final_assignment, outcome.discarded_rules)
        )
    _print_summary(full_graph, outcome, summary)
    return EXIT_OK


def _cmd_resolve(args: argparse.Namespace) -> int:
    full_graph = load_graph(args.graph)

    stream_closed = False

    def ask(text: str) -> bool:
        nonlocal stream_closed
        print(f"Is it true that: {text}? [y/n] ", end="", flush=True)
        line = sys.stdin.readline()
        if not line:
            stream_closed = True
            raise EOFError("no interactive input available")
        return line.strip().lower() in ("y", "yes", "true", "t", "1")

    outcome = resolve_interactive(full_graph, ask, budget=args.budget)
    if stream_closed:
        print("warning: input stream closed, falling back to plain reasoning",
              file=sys.stderr)
    summary = _summarize(full_graph, full_graph, outcome)
    if args.output:
        Path(args.output).write_text(dumps(outcome_to_document(outcome, summary)))
    _print_summary(full_graph, outcome, summary)
    if outcome.discarded_rules:
        print(f"note: {len(outcome.discarded_rules)} conflicts remain")
    return EXIT_OK


def _cmd_export_dot(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    text = to_dot(graph)
    if args.output:
        Path(args.output).write_text(text)
    else:
        print(text, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="belief-graph",
        description="Build belief graphs from an oracle and repair them with exact MaxSAT.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-graph", help="construct a belief graph from hypotheses")
    p.add_argument("input", help="JSON question file (object or list of objects)")
    p.add_argument("-o", "--output", help="graph document output path")
    p.add_argument("--out-dir", help="output directory for multi-question input")
    p.add_argument("--oracle", required=True, help="mock:<path> or remote:<url>")
    p.add_argument("--config", help="calibration config JSON")
    p.add_argument("--d-max", type=int, default=None, help="max recursion depth override")
    p.add_argument("--seed", type=int, default=None, help="recorded in provenance")
    p.add_argument("--workers", type=int, default=4)
    p.set_defaults(func=_cmd_build_graph)

    p = sub.add_parser("reason", help="solve a graph document and emit the outcome")
    p.add_argument("graph", help="graph document path")
    p.add_argument("-o", "--output", help="outcome document output path")
    p.add_argument("--ablate", action="append", choices=sorted(ABLATABLE), default=[])
    p.add_argument("--export-dot", help="also write a DOT rendering of the outcome")
    p.set_defaults(func=_cmd_reason)

    p = sub.add_parser("resolve", help="interactively pin beliefs to resolve conflicts")
    p.add_argument("graph", help="graph document path")
    p.add_argument("-o", "--output", help="outcome document output path")
    p.add_argument("--budget", type=int, default=5, help="max user queries")
    p.set_defaults(func=_cmd_resolve)

    p = sub.add_parser("export-dot", help="render a graph document as DOT")
    p.add_argument("graph", help="graph document path")
    p.add_argument("-o", "--output", help="DOT output path (default stdout)")
    p.set_defaults(func=_cmd_export_dot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConstructionError, OracleTransportError, OracleDecodeError) as exc:
        print(f"oracle error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except ReasoningError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
