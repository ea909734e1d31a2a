"""The request pipeline: entities, prompt, completion, dictionary, problem, plan, execution, response."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

from plan_x.compiler import compile_problem
from plan_x.config import Config, LoadedAssets, make_backend, validate_config
from plan_x.errors import (
    EXIT_ABORTED,
    EXIT_OK,
    EXIT_UNSOLVABLE,
    OutputParseError,
    PlanningError,
    TaskValidationError,
)
from plan_x.intent.catalog import example_task
from plan_x.intent.entities import extract_entities
from plan_x.intent.task_dict import TaskDictionary, merge_task_dictionaries, validate_task_dictionary
from plan_x.io.json_io import write_json, write_text
from plan_x.pddl.model import Problem
from plan_x.pddl.writer import render_problem, render_steps
from plan_x.planner.grounding import ground
from plan_x.planner.search import Plan, plan
from plan_x.prompt.backends import CompletionBackend, complete
from plan_x.prompt.builder import build_prompt
from plan_x.prompt.output import parse_llm_output
from plan_x.runtime.execute import STATUS_SUCCESS, ExecutionReport, execute_plan
from plan_x.runtime.registry import ExecutorRegistry, Services, default_registry
from plan_x.runtime.response import build_response, unsolvable_response
from plan_x.runtime.state import seed_state
from plan_x.runtime.world import OfficeWorld
from plan_x.utils.run_log import attach_run_log, detach_run_log


logger = logging.getLogger(__name__)

PROBLEM_NAME = "request"

PROMPT_FILE = "prompt.txt"
REPLY_FILE = "reply.txt"
TASK_FILE = "task.json"
PROBLEM_FILE = "problem.pddl"
PLAN_FILE = "plan.txt"
REPORT_FILE = "report.json"
RESPONSE_FILE = "response.txt"
RUN_LOG_FILE = "run.log"


@dataclass
class SessionResult:
    response: str
    exit_code: int
    task: Optional[TaskDictionary] = None
    problem: Optional[Problem] = None
    plan: Optional[Plan] = None
    report: Optional[ExecutionReport] = None
    fallback: bool = False

    @property
    def problem_text(self) -> str:
        return render_problem(self.problem) if self.problem is not None else ""

    @property
    def plan_text(self) -> str:
        if self.plan is None:
            return ""
        return render_steps((str(step) for step in self.plan.steps), self.plan.total_cost)


class Session:
    """One assistant session; the world persists across requests."""

    def __init__(
        self,
        config: Config,
        *,
        assets: Optional[LoadedAssets] = None,
        backend: Optional[CompletionBackend] = None,
        world: Optional[OfficeWorld] = None,
        registry: Optional[ExecutorRegistry] = None,
    ) -> None:
        self.config = config
        self.assets = assets or validate_config(config)
        self.backend = backend or make_backend(config)
        if world is None:
            world = OfficeWorld.load(config.world) if config.world is not None else OfficeWorld()
        self.world = world
        self.registry = registry or default_registry()
        self.services = Services(backend=self.backend, tree_max_depth=config.tree_max_depth)

    def _dump(self, name: str, data: Any) -> None:
        if self.config.dump_dir is None:
            return
        target = Path(self.config.dump_dir) / name
        if isinstance(data, str):
            write_text(target, data)
        else:
            write_json(target, data)

    def _task_from_backend(self, request: str) -> tuple[TaskDictionary, bool]:
        domain = self.assets.domain
        entities = extract_entities(request, self.assets.patterns)
        prompt = build_prompt(request, entities, domain, self.assets.catalog, self.assets.schemas)
        self._dump(PROMPT_FILE, prompt)
        reply = complete(prompt, self.backend)
        self._dump(REPLY_FILE, reply if reply.endswith("\n") else reply + "\n")
        try:
            raw = parse_llm_output(reply)
            task = validate_task_dictionary(raw, domain)
        except (OutputParseError, TaskValidationError) as exc:
            unknown = self.assets.catalog.unknown_intent()
            if unknown is None:
                raise
            logger.info("validate: fallback (%s) -> %s", exc.stage, unknown.name)
            return example_task(unknown, domain), True
        return task, False

    def handle(self, request: str, seed: Optional[Dict[str, Any]] = None) -> SessionResult:
        """Serve one request; ``seed`` is a task dictionary that replaces the completion step."""
        handler = None
        if self.config.dump_dir is not None:
            handler = attach_run_log(Path(self.config.dump_dir) / RUN_LOG_FILE)
        try:
            return self._handle(request, seed)
        finally:
            if handler is not None:
                detach_run_log(handler)

    def _handle(self, request: str, seed: Optional[Dict[str, Any]]) -> SessionResult:
        domain = self.assets.domain
        logger.info("session: start chars=%d seeded=%s", len(request), seed is not None)
        if seed is not None:
            task, fallback = validate_task_dictionary(seed, domain), False
        else:
            task, fallback = self._task_from_backend(request)
        task = merge_task_dictionaries([task])
        self._dump(TASK_FILE, task.to_json())

        problem = compile_problem(task, domain, PROBLEM_NAME)
        self._dump(PROBLEM_FILE, render_problem(problem))
        grounded = ground(domain, problem)
        policy = self.config.policy()
        try:
            found = plan(grounded, heuristic=policy.heuristic, node_limit=policy.node_limit)
        except PlanningError as exc:
            response = unsolvable_response(str(exc), exc.unmet)
            self._dump(RESPONSE_FILE, response)
            logger.info("session: unsolvable")
            return SessionResult(response, EXIT_UNSOLVABLE, task, problem, fallback=fallback)

        result = SessionResult("", EXIT_OK, task, problem, found, fallback=fallback)
        self._dump(PLAN_FILE, result.plan_text)

        state = seed_state(task, problem)
        report, _ = execute_plan(
            found, state, self.world, self.registry, policy, grounded, self.services
        )
        report.response = build_response(report)
        self._dump(REPORT_FILE, report.to_json())
        self._dump(RESPONSE_FILE, report.response)
        result.report = report
        result.response = report.response
        result.exit_code = EXIT_OK if report.status == STATUS_SUCCESS else EXIT_ABORTED
        logger.info("session: %s exit=%d", report.status, result.exit_code)
        return result


def handle_request(request: str, config: Config) -> str:
    return Session(config).handle(request).response
