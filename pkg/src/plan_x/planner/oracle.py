from __future__ import annotations

import heapq
import itertools
import logging
from typing import Dict, FrozenSet, List, Tuple

from plan_x.errors import PlanningError
from plan_x.pddl.model import Atom
from plan_x.planner.grounding import GroundedAction, GroundedTask
from plan_x.planner.search import Plan


logger = logging.getLogger(__name__)

DEFAULT_STATE_LIMIT = 500_000

AtomState = FrozenSet[Atom]


def _observed_atoms(task: GroundedTask) -> FrozenSet[Atom]:
    """Atoms some precondition or goal literal mentions."""
    seen = {literal.atom for action in task.actions for literal in action.precondition}
    seen.update(literal.atom for literal in task.goal_literals())
    return frozenset(seen)


def brute_force_plan(task: GroundedTask, max_cost: int, *, state_limit: int = DEFAULT_STATE_LIMIT) -> Plan:
    """Uniform-cost enumeration of every ground action, used to check ``plan`` in tests.

    States are sets of atoms. Atoms no precondition or goal reads are dropped,
    since they cannot change applicability or the goal test; nothing else is
    pruned and no heuristic is involved.
    """
    observed = _observed_atoms(task)
    start: AtomState = task.init_atoms() & observed
    counter = itertools.count()
    best: Dict[AtomState, int] = {start: 0}
    parent: Dict[AtomState, Tuple[AtomState, int]] = {}
    frontier: List[Tuple[int, int, AtomState]] = [(0, next(counter), start)]
    expanded = 0
    overflow = False

    while frontier:
        cost, _, state = heapq.heappop(frontier)
        if cost > best[state]:
            continue
        if task.goal_holds(state):
            result = Plan.of(_trace(task.actions, parent, state))
            logger.info("oracle: ok steps=%d cost=%d states=%d", len(result), result.total_cost, expanded)
            return result
        expanded += 1
        if expanded > state_limit:
            raise PlanningError(f"state limit {state_limit} exceeded", limit_exceeded=True)
        for idx, action in enumerate(task.actions):
            if not action.applicable(state):
                continue
            nxt = action.apply(state) & observed
            if nxt == state:
                continue
            step_cost = cost + action.cost
            if step_cost > max_cost:
                overflow = True
                continue
            if step_cost < best.get(nxt, step_cost + 1):
                best[nxt] = step_cost
                parent[nxt] = (state, idx)
                heapq.heappush(frontier, (step_cost, next(counter), nxt))

    if overflow:
        raise PlanningError(f"cost bound {max_cost} exceeded")
    raise PlanningError("search space exhausted")


def _trace(
    actions: Tuple[GroundedAction, ...],
    parent: Dict[AtomState, Tuple[AtomState, int]],
    state: AtomState,
) -> List[GroundedAction]:
    steps: List[GroundedAction] = []
    while state in parent:
        state, idx = parent[state]
        steps.append(actions[idx])
    steps.reverse()
    return steps
