from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import AbstractSet, List, Optional, Sequence, Tuple

from plan_x.errors import PddlError, PlanningError
from plan_x.pddl.model import Atom, Domain, Literal, Problem, unique
from plan_x.pddl.reader import parse_state
from plan_x.planner.grounding import GroundedTask, ground
from plan_x.planner.search import DEFAULT_NODE_LIMIT, Plan, plan


logger = logging.getLogger(__name__)

DEFAULT_REPLAN_BUDGET = 3

ActionKey = Tuple[str, Tuple[str, ...]]


@dataclass(frozen=True)
class ReplanPolicy:
    budget: int = DEFAULT_REPLAN_BUDGET
    heuristic: str = "hmax"
    node_limit: int = DEFAULT_NODE_LIMIT


@dataclass(frozen=True)
class ReplanResult:
    problem: Optional[Problem] = None
    plan: Optional[Plan] = None
    task: Optional[GroundedTask] = None
    reason: str = ""

    @property
    def aborted(self) -> bool:
        return self.plan is None


def parse_goal_strings(goals: Sequence[str], domain: Domain, problem: Problem) -> List[Literal]:
    """Literals from goal strings injected during execution; raises ``ValueError``."""
    scope = dict(domain.constant_types())
    scope.update(problem.object_types())
    literals: List[Literal] = []
    for text in goals:
        try:
            parsed, numeric, diagnostics = parse_state(text, domain, scope, source="new_goals")
        except PddlError as exc:
            raise ValueError(exc.detail) from exc
        if diagnostics:
            raise ValueError("; ".join(d.message for d in diagnostics))
        if numeric:
            raise ValueError("numeric assignments cannot be goals")
        literals.extend(parsed)
    return literals


def build_replan_problem(
    problem: Problem, symbolic_state: AbstractSet[Atom], goals: Sequence[Literal]
) -> Problem:
    return Problem(
        name=problem.name,
        domain_name=problem.domain_name,
        objects=problem.objects,
        init=tuple(sorted(symbolic_state, key=str)),
        numeric_init=problem.numeric_init,
        goal=tuple(unique(list(goals))),
        metric=problem.metric,
    )


def replan(
    domain: Domain,
    problem: Problem,
    symbolic_state: AbstractSet[Atom],
    remaining_goals: Sequence[Literal],
    new_goals: Sequence[str],
    budget: int,
    policy: ReplanPolicy = ReplanPolicy(),
    blocked: AbstractSet[ActionKey] = frozenset(),
) -> ReplanResult:
    """Plan again from the tracked symbolic state towards remaining plus injected goals.

    Ground actions in ``blocked`` already failed on the current world and are
    left out of the search.
    """
    if budget <= 0:
        logger.info("replan: aborted (budget exhausted)")
        return ReplanResult(reason="replan budget exhausted")
    try:
        injected = parse_goal_strings(new_goals, domain, problem)
    except ValueError as exc:
        logger.info("replan: aborted (bad new goals)")
        return ReplanResult(reason=f"unusable new goals: {exc}")
    fresh = build_replan_problem(problem, symbolic_state, list(remaining_goals) + injected)
    task = ground(domain, fresh)
    if blocked:
        task = task.without(blocked)
        logger.info("replan: blocked %d failed action(s)", len(blocked))
    try:
        found = plan(task, heuristic=policy.heuristic, node_limit=policy.node_limit)
    except PlanningError as exc:
        logger.info("replan: aborted (%s)", exc.detail)
        unmet = f" unmet {' '.join(exc.unmet)}" if exc.unmet else ""
        return ReplanResult(problem=fresh, task=task, reason=f"{exc}{unmet}")
    logger.info("replan: ok steps=%d cost=%d", len(found), found.total_cost)
    return ReplanResult(problem=fresh, plan=found, task=task)
