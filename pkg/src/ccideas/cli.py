"""Command-line entry point: simulate, validate-trace, rank, export-ontology, serve.

Exit codes: 0 on success, 1 on domain errors (protocol violations,
unsatisfied gates, malformed inputs the engine rejects), 2 on usage
errors. ``--deterministic`` suppresses timing output so simulate runs
are byte-stable for golden-file comparison.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import liveness
from .config import load_config
from .errors import EngineError
from .eventlog import EventLog, replay
from .model import IdeaCard
from .ranking import RankingWeights, score_cards, select_possible_solutions
from .sim import run_simulation


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ccideas",
        description="Idea-management engine for the 48H creativity workshop",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a scripted workshop end to end")
    p_sim.add_argument("--config", required=True, help="workshop configuration JSON")
    p_sim.add_argument("--seed", type=int, default=None,
                       help="simulation seed (defaults to the config's seed)")
    p_sim.add_argument("--deterministic", action="store_true",
                       help="suppress timing so output is byte-stable")
    p_sim.add_argument("--trace-out", default=None,
                       help="write the event trace as JSON lines")

    p_val = sub.add_parser("validate-trace", help="judge an activity trace for a role")
    p_val.add_argument("--role", required=True)
    p_val.add_argument("--trace", required=True,
                       help="comma-separated activity names (empty string for the empty trace)")
    p_val.add_argument("--corpus", default=None,
                       help="protocol corpus file (defaults to the built-in corpus)")

    p_rank = sub.add_parser("rank", help="rank idea cards from a JSON-lines file")
    p_rank.add_argument("--input", required=True, help="cards file, one JSON record per line")
    p_rank.add_argument("--config", default=None,
                        help="workshop configuration supplying default weights")
    p_rank.add_argument("--weights", default=None,
                        help="density,relevance,novelty,evaluation")
    p_rank.add_argument("--normalize", action="store_true",
                        help="scale the weights to sum to 1 instead of rejecting")
    p_rank.add_argument("--top", type=int, default=2)
    p_rank.add_argument("--out", default=None, help="write machine-readable ranking here")

    p_exp = sub.add_parser("export-ontology", help="export the triple store as N-Triples")
    p_exp.add_argument("--out", required=True)
    source = p_exp.add_mutually_exclusive_group(required=True)
    source.add_argument("--log", help="replay this event log")
    source.add_argument("--config", help="simulate this configuration, then export")
    p_exp.add_argument("--seed", type=int, default=None)

    p_srv = sub.add_parser("serve", help="serve the workshop HTTP API")
    p_srv.add_argument("--config", default=None)
    p_srv.add_argument("--log", default="workshop.log")
    p_srv.add_argument("--port", type=int, default=8000)
    p_srv.add_argument("--host", default="127.0.0.1")

    return parser


def _cmd_simulate(args) -> int:
    config = load_config(args.config)
    seed = config.seed if args.seed is None else args.seed
    started = time.perf_counter()
    events, engine = run_simulation(config, seed)
    elapsed = time.perf_counter() - started
    if args.trace_out:
        with open(args.trace_out, "w", encoding="utf-8") as fh:
            for event in events:
                fh.write(json.dumps(event, sort_keys=True, ensure_ascii=False) + "\n")
    summary = engine.verify_final()

    print(f"workshop: {engine.event.name}")
    print(f"seed: {seed}")
    print(f"teams: {len(engine.teams)}  participants: {summary['participants']}  "
          f"industries: {len(engine.industries)}")
    print(f"phase: {engine.phase.name}  completed: {str(engine.completed).lower()}")
    print(f"events: {len(events)}")
    print(f"ideas: {summary['ideas']}")
    print(f"idea cards: {summary['cards']}")
    print(f"idea cards per team: {summary['cards_per_team']}")
    print(f"evaluations: {summary['evaluations']}")
    print(f"possible solutions: {summary['possible_solutions']}")
    print(f"ontology triples: {summary['triples']}")
    print("gates:")
    for row in engine.gate_summary():
        mark = "ok" if row["satisfied"] else "UNSATISFIED"
        print(f"  [{mark}] {row['service']} (post: {row['postcondition']})")
    print("top cards:")
    for problem_id in sorted(engine.solutions):
        for solution in engine.solutions[problem_id]:
            print(f"  {problem_id}  rank {solution.rank}  {solution.card}  "
                  f"{solution.combined_score:.6f}")
    if not args.deterministic:
        print(f"elapsed: {elapsed:.3f}s")
    return 0


def _cmd_validate_trace(args) -> int:
    if args.corpus:
        corpus = liveness.parse_corpus(Path(args.corpus).read_text(encoding="utf-8"))
    else:
        corpus = liveness.default_corpus()
    if args.role not in corpus:
        print(f"error[UnknownRole]: role {args.role!r} not in corpus "
              f"(available: {', '.join(sorted(corpus))})", file=sys.stderr)
        return 1
    trace = [t.strip() for t in args.trace.split(",") if t.strip()]
    verdict = liveness.judge_trace(corpus[args.role], trace)
    print(f"role: {args.role}")
    print(f"trace length: {len(trace)}")
    print(f"verdict: {verdict.kind.value}")
    if verdict.violation_index is not None:
        print(f"violation at index: {verdict.violation_index} "
              f"({trace[verdict.violation_index]})")
    if verdict.allowed_next:
        print(f"allowed next: {', '.join(sorted(verdict.allowed_next))}")
    return 0 if verdict.ok else 1


def _parse_weights(args, parser: argparse.ArgumentParser) -> RankingWeights | None:
    if args.weights is None:
        return None
    parts = args.weights.split(",")
    if len(parts) != 4:
        parser.error("--weights expects four comma-separated numbers: d,r,n,e")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        parser.error(f"--weights values must be numbers, got {args.weights!r}")
    weights = RankingWeights(*values)
    if args.normalize:
        try:
            return weights.normalized()
        except EngineError as exc:
            parser.error(str(exc))
    try:
        weights.validate()
    except EngineError as exc:
        parser.error(str(exc))
    return weights


def _cmd_rank(args, parser: argparse.ArgumentParser) -> int:
    weights = _parse_weights(args, parser)
    if weights is None:
        weights = load_config(args.config).weights if args.config else RankingWeights()

    groups: dict[str, list[IdeaCard]] = {}
    evaluations: dict[str, list[int]] = {}
    with open(args.input, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            record = json.loads(line)
            card = IdeaCard(
                id=str(record.get("id", f"line_{lineno}")),
                team=str(record.get("team", "")),
                method=str(record.get("method", "")),
                source_ideas=frozenset(str(s) for s in record.get("source_ideas", ["-"])),
                title=str(record.get("title", "")),
                description=str(record.get("description", "")),
                scenery=str(record.get("scenery", "")),
                priority_client=str(record.get("priority_client", "")),
                advantage=str(record.get("advantage", "")),
                risk=str(record.get("risk", "")),
            )
            problem = str(record.get("problem", ""))
            groups.setdefault(problem, []).append(card)
            if record.get("evaluations"):
                evaluations[card.id] = [int(v) for v in record["evaluations"]]

    machine_records = []
    for problem in sorted(groups):
        scored = score_cards(groups[problem], problem, weights, evaluations)
        solutions = select_possible_solutions(scored, k=args.top)
        nominated = {s.card for s in solutions}
        label = problem or "(no problem statement)"
        print(f"problem: {label}")
        print(f"  {'card':<14} {'combined':>9} {'density':>8} {'relev':>7} "
              f"{'novelty':>8} {'eval':>6}  nominated")
        for card, vector in scored:
            print(f"  {card.id:<14} {vector.combined:>9.6f} {vector.width_density:>8.4f} "
                  f"{vector.relevance:>7.4f} {vector.novelty:>8.4f} "
                  f"{vector.evaluation:>6.3f}  {'*' if card.id in nominated else ''}")
        for card, vector in scored:
            machine_records.append({
                "problem": problem, "card": card.id,
                "combined": vector.combined, "width_density": vector.width_density,
                "relevance": vector.relevance, "novelty": vector.novelty,
                "evaluation": vector.evaluation,
                "rank": next((s.rank for s in solutions if s.card == card.id), None),
            })
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for record in machine_records:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
    return 0


def _cmd_export_ontology(args) -> int:
    if args.log:
        engine = replay(EventLog(args.log))
        if engine is None:
            print("error[NotConfigured]: the event log is empty", file=sys.stderr)
            return 1
    else:
        config = load_config(args.config)
        seed = config.seed if args.seed is None else args.seed
        _, engine = run_simulation(config, seed)
    text = engine.store.export_ntriples()
    Path(args.out).write_text(text, encoding="utf-8")
    print(f"exported {len(engine.store)} triples to {args.out}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    port = int(os.environ.get("CCIDEAS_PORT", args.port))
    log_path = os.environ.get("CCIDEAS_LOG", args.log)
    app = create_app(log_path, config_path=args.config)
    uvicorn.run(app, host=args.host, port=port)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "validate-trace":
            return _cmd_validate_trace(args)
        if args.command == "rank":
            return _cmd_rank(args, parser)
        if args.command == "export-ontology":
            return _cmd_export_ontology(args)
        if args.command == "serve":
            return _cmd_serve(args)
    except EngineError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error[IO]: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
