from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path
from typing import Any, Callable, Optional

from plan_x.config import BACKENDS, Config, load_config
from plan_x.errors import EXIT_OK, EXIT_UNSOLVABLE, EXIT_VALIDATION, PlanningError, PlanXError
from plan_x.io.json_io import read_json
from plan_x.pddl.reader import parse_domain, parse_problem
from plan_x.pddl.writer import render_steps
from plan_x.planner.grounding import GroundedTask, ground
from plan_x.planner.search import DEFAULT_NODE_LIMIT, HEURISTICS, plan
from plan_x.planner.validate import parse_plan, validate_plan
from plan_x.session import Session, SessionResult


_EXIT_WORDS = {"exit", "quit"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="plan-x",
        description="Office assistant: natural-language request -> PDDL problem -> optimal plan -> monitored execution.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    session = argparse.ArgumentParser(add_help=False)
    session.add_argument("--config", help="JSON config file")
    session.add_argument("--dump-dir", help="Write prompt, reply, task, problem, plan, report and response here")
    session.add_argument("--dump-problem", action="store_true", help="Print the generated PDDL problem")
    session.add_argument("--dump-plan", action="store_true", help="Print the plan before executing it")
    session.add_argument("--backend", choices=BACKENDS, help="Completion backend (overrides the config)")
    session.add_argument("--world", help="Office world directory (overrides the config)")

    run = sub.add_parser("run", parents=[session], help="Serve one request")
    run.add_argument("request", help="The request text")
    run.add_argument(
        "--seed-state",
        help="Task dictionary JSON to use instead of asking the completion backend",
    )

    sub.add_parser("repl", parents=[session], help="Serve requests read from stdin, one per line")

    planner = argparse.ArgumentParser(add_help=False)
    planner.add_argument("domain", help="PDDL domain file")
    planner.add_argument("problem", help="PDDL problem file")
    planner.add_argument("--heuristic", choices=HEURISTICS, default="hmax")
    planner.add_argument("--node-limit", type=int, default=DEFAULT_NODE_LIMIT)

    sub.add_parser("solve", parents=[planner], help="Print a cost-optimal plan for a domain and problem")
    check = sub.add_parser(
        "check-plan", parents=[planner], help="Validate a plan file and report its optimality gap"
    )
    check.add_argument("plan", help="Plan file")
    return p


def _session_config(args: argparse.Namespace) -> Config:
    config = load_config(args.config)
    overrides: dict[str, Any] = {}
    if args.dump_dir:
        overrides["dump_dir"] = Path(args.dump_dir)
    if args.dump_problem:
        overrides["dump_problem"] = True
    if args.dump_plan:
        overrides["dump_plan"] = True
    if args.backend:
        overrides["backend"] = args.backend
    if args.world:
        overrides["world"] = Path(args.world)
    return dataclasses.replace(config, **overrides)


def _print_result(result: SessionResult, config: Config) -> None:
    if config.dump_problem and result.problem is not None:
        print(result.problem_text, end="")
    if config.dump_plan and result.plan is not None:
        print(result.plan_text, end="")
    print(result.response, end="")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise PlanXError("config", f"cannot read {path}: {exc}") from exc


def _load_task(args: argparse.Namespace) -> GroundedTask:
    domain = parse_domain(_read_text(args.domain), args.domain)
    problem = parse_problem(_read_text(args.problem), domain, args.problem)
    return ground(domain, problem)


def _cmd_run(args: argparse.Namespace) -> int:
    config = _session_config(args)
    seed = None
    if args.seed_state:
        try:
            seed = read_json(args.seed_state)
        except (OSError, ValueError) as exc:
            raise PlanXError("config", f"cannot read seed state {args.seed_state}: {exc}") from exc
    result = Session(config).handle(args.request, seed)
    _print_result(result, config)
    return result.exit_code


def _cmd_repl(args: argparse.Namespace) -> int:
    config = _session_config(args)
    session = Session(config)
    while True:
        try:
            line = input("plan-x> ")
        except EOFError:
            print()
            return EXIT_OK
        request = line.strip()
        if not request:
            continue
        if request.lower() in _EXIT_WORDS:
            return EXIT_OK
        try:
            _print_result(session.handle(request), config)
        except PlanXError as exc:
            print(f"error: {exc}", file=sys.stderr)


def _cmd_solve(args: argparse.Namespace) -> int:
    task = _load_task(args)
    try:
        found = plan(task, heuristic=args.heuristic, node_limit=args.node_limit)
    except PlanningError as exc:
        print(f"unsolvable: {exc.detail}")
        if exc.unmet:
            print("unmet: " + " ".join(exc.unmet))
        return EXIT_UNSOLVABLE
    print(render_steps((str(step) for step in found.steps), found.total_cost), end="")
    return EXIT_OK


def _cmd_check_plan(args: argparse.Namespace) -> int:
    task = _load_task(args)
    steps = parse_plan(_read_text(args.plan), task, args.plan)
    report = validate_plan(task, steps)
    if not report.valid:
        print(f"invalid: {report.message}")
        return EXIT_VALIDATION
    try:
        optimum = plan(task, heuristic=args.heuristic, node_limit=args.node_limit).total_cost
    except PlanningError as exc:
        print(f"valid cost={report.cost} (optimum unknown: {exc.detail})")
        return EXIT_OK
    gap = report.cost - optimum
    verdict = "optimal" if gap == 0 else "suboptimal"
    print(f"valid {verdict} cost={report.cost} optimum={optimum} gap={gap}")
    return EXIT_OK


_COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "run": _cmd_run,
    "repl": _cmd_repl,
    "solve": _cmd_solve,
    "check-plan": _cmd_check_plan,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except PlanXError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
