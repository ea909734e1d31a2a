from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

from plan_x.errors import ExecutionError
from plan_x.pddl.model import Atom, Problem
from plan_x.pddl.writer import render_problem
from plan_x.planner.grounding import GroundedAction, GroundedTask
from plan_x.planner.search import Plan
from plan_x.runtime.registry import ActionContext, ExecutorRegistry, Services
from plan_x.runtime.replan import ActionKey, ReplanPolicy, replan
from plan_x.runtime.state import ExecutionState, copy_state, render_value, take_new_goals
from plan_x.runtime.world import OfficeWorld


logger = logging.getLogger(__name__)

STATUS_SUCCESS = "success"
STATUS_FAILED = "failed"
STATUS_ABORTED = "aborted"


@dataclass(frozen=True)
class StepRecord:
    number: int
    action: str
    applied: bool
    monitor: bool
    error: str = ""
    duration_s: float = field(default=0.0, compare=False)

    def to_json(self) -> Dict[str, Any]:
        # Durations stay out of the dump so repeated runs compare byte for byte.
        return {
            "step": self.number,
            "action": self.action,
            "applied": self.applied,
            "monitor": self.monitor,
            "error": self.error,
        }


@dataclass(frozen=True)
class ReplanRecord:
    trigger: str
    problem: str
    steps: Tuple[str, ...] = ()
    cost: Optional[int] = None
    reason: str = ""

    def to_json(self) -> Dict[str, Any]:
        return {
            "trigger": self.trigger,
            "problem": self.problem,
            "plan": list(self.steps),
            "cost": self.cost,
            "reason": self.reason,
        }


@dataclass
class ExecutionReport:
    status: str
    steps: List[StepRecord] = field(default_factory=list)
    replans: List[ReplanRecord] = field(default_factory=list)
    reason: str = ""
    goals: List[str] = field(default_factory=list)
    artifacts: List[str] = field(default_factory=list)
    outputs: Dict[str, Any] = field(default_factory=dict)
    messages: List[Dict[str, Any]] = field(default_factory=list)
    response: str = ""

    @property
    def executed(self) -> List[str]:
        return [s.action for s in self.steps if s.applied and s.monitor]

    def to_json(self) -> Dict[str, Any]:
        return {
            "status": self.status,
            "reason": self.reason,
            "goals": list(self.goals),
            "steps": [s.to_json() for s in self.steps],
            "replans": [r.to_json() for r in self.replans],
            "artifacts": list(self.artifacts),
            "outputs": self.outputs,
            "messages": self.messages,
            "response": self.response,
        }


def _context(
    action: GroundedAction, state: ExecutionState, world: OfficeWorld, services: Optional[Services]
) -> ActionContext:
    return ActionContext(action=action, state=state, world=world, services=services or Services())


def apply_action(
    action: GroundedAction,
    state: ExecutionState,
    world: OfficeWorld,
    registry: ExecutorRegistry,
    services: Optional[Services] = None,
) -> ExecutionState:
    """Run the executor on a copy of ``state``; any exception becomes an ``ExecutionError``."""
    executor = registry.get(action.name)
    working = copy_state(state)
    try:
        executor.apply(_context(action, working, world, services))
    except ExecutionError:
        raise
    except Exception as exc:
        raise ExecutionError(f"{action} raised {type(exc).__name__}: {exc}") from exc
    return working


def check_success(
    action: GroundedAction,
    state: ExecutionState,
    world: OfficeWorld,
    registry: ExecutorRegistry,
    services: Optional[Services] = None,
) -> bool:
    executor = registry.get(action.name)
    try:
        return bool(executor.succeeded(_context(action, state, world, services)))
    except Exception as exc:
        logger.info("monitor: %s raised %s", action, exc)
        return False


def _artifacts(state: ExecutionState) -> List[str]:
    saved = {
        str(entry["saved"])
        for entry in state.values()
        if isinstance(entry, dict) and entry.get("saved")
    }
    return sorted(saved)


def _outputs(state: ExecutionState) -> Dict[str, Any]:
    return {
        name: render_value(entry.get("value"))
        for name, entry in sorted(state.items())
        if isinstance(entry, dict) and entry.get("extracted_from")
    }


def execute_plan(
    plan: Plan,
    state: ExecutionState,
    world: OfficeWorld,
    registry: ExecutorRegistry,
    policy: ReplanPolicy,
    task: GroundedTask,
    services: Optional[Services] = None,
) -> Tuple[ExecutionReport, ExecutionState]:
    """Execute step by step, monitoring each action and replanning on failure or new goals.

    The symbolic state only advances when a monitor confirms the step. The loop
    ends with ``success`` once the plan is exhausted and every goal holds, or with
    ``aborted`` when the replan budget runs out or a replan finds no plan.
    """
    missing = registry.missing(plan.steps)
    if missing:
        raise ExecutionError(f"no executor registered for {', '.join(missing)}")

    report = ExecutionReport(status=STATUS_FAILED)
    problem: Problem = task.problem
    current_task = task
    symbolic: FrozenSet[Atom] = task.init_atoms()
    queue: List[GroundedAction] = list(plan.steps)
    outbox_before = len(world.outbox)
    attempts = 0
    failed_on: Dict[ActionKey, str] = {}
    logger.info("execute: start steps=%d", len(queue))

    while queue:
        action = queue.pop(0)
        number = len(report.steps) + 1
        started = time.perf_counter()
        world_before = world.fingerprint()
        error = ""
        applied = False
        passed = False
        try:
            candidate = apply_action(action, state, world, registry, services)
            applied = True
            passed = check_success(action, candidate, world, registry, services)
        except ExecutionError as exc:
            error = exc.detail
        if applied and passed:
            state = candidate
            symbolic = action.apply(symbolic)
        elif applied:
            error = "success monitor rejected the outcome"
        report.steps.append(
            StepRecord(number, str(action), applied, passed, error, time.perf_counter() - started)
        )

        new_goals: List[str] = []
        if passed:
            logger.info("execute: step %d ok %s", number, action)
            new_goals = take_new_goals(state)
            if not new_goals:
                continue
            trigger = f"step {number} {action} requested goals {' '.join(new_goals)}"
        else:
            logger.info("execute: step %d failed (%s) %s", number, action.name, error)
            failed_on[action.key] = world_before
            trigger = f"step {number} {action} failed: {error}"

        attempts += 1
        logger.info("replan: attempt %d/%d", attempts, policy.budget)
        world_now = world.fingerprint()
        blocked = frozenset(key for key, seen in failed_on.items() if seen == world_now)
        result = replan(
            task.domain,
            problem,
            symbolic,
            list(problem.goal),
            new_goals,
            policy.budget - attempts + 1,
            policy,
            blocked,
        )
        if result.aborted:
            report.replans.append(
                ReplanRecord(
                    trigger,
                    render_problem(result.problem) if result.problem else "",
                    reason=result.reason,
                )
            )
            report.status = STATUS_ABORTED
            report.reason = result.reason
            break
        report.replans.append(
            ReplanRecord(
                trigger,
                render_problem(result.problem),
                tuple(str(a) for a in result.plan.steps),
                result.plan.total_cost,
            )
        )
        problem = result.problem
        current_task = result.task
        queue = list(result.plan.steps)
        missing = registry.missing(queue)
        if missing:
            report.status = STATUS_ABORTED
            report.reason = f"no executor registered for {', '.join(missing)}"
            break
    else:
        if current_task.goal_holds(symbolic):
            report.status = STATUS_SUCCESS
        else:
            report.status = STATUS_FAILED
            report.reason = "plan finished with goals unmet: " + " ".join(
                str(g) for g in current_task.unmet_goals(symbolic)
            )

    report.goals = [str(g) for g in problem.goal]
    report.artifacts = _artifacts(state)
    report.outputs = _outputs(state)
    report.messages = [render_value(m) for m in world.outbox[outbox_before:]]
    logger.info(
        "execute: %s steps=%d replans=%d", report.status, len(report.steps), len(report.replans)
    )
    return report, state
