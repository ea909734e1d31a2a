from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from plan_x.errors import PlanningError
from plan_x.planner.grounding import GroundedAction, GroundedTask


logger = logging.getLogger(__name__)

DEFAULT_NODE_LIMIT = 200_000
HEURISTICS = ("hmax", "blind")

State = Tuple[int, ...]


@dataclass(frozen=True)
class Plan:
    steps: Tuple[GroundedAction, ...] = ()
    total_cost: int = 0

    def __len__(self) -> int:
        return len(self.steps)

    @classmethod
    def of(cls, steps: List[GroundedAction]) -> "Plan":
        return cls(tuple(steps), sum(step.cost for step in steps))


@dataclass(frozen=True)
class SearchView:
    """Goal-relevant actions and the atoms a search state needs to track.

    An action is relevant when it adds a positively relevant atom or deletes a
    negatively relevant one; its preconditions then become relevant in turn.
    Dropping the other actions keeps every plan valid and never raises the
    optimum, and the remaining atoms never influence applicability.
    """

    actions: Tuple[int, ...]
    tracked: FrozenSet[int]
    init: State

    def project(self, atoms: FrozenSet[int]) -> State:
        return tuple(sorted(atoms & self.tracked))


def relevance_view(task: GroundedTask) -> SearchView:
    pos_rel: Set[int] = set(task.goal_pos)
    neg_rel: Set[int] = set(task.goal_neg)
    relevant: Set[int] = set()
    changed = True
    while changed:
        changed = False
        for idx in range(len(task.actions)):
            if idx in relevant:
                continue
            if task.add[idx] & pos_rel or task.delete[idx] & neg_rel:
                relevant.add(idx)
                pos_rel |= task.pre_pos[idx]
                neg_rel |= task.pre_neg[idx]
                changed = True
    tracked = frozenset(pos_rel | neg_rel)
    return SearchView(
        actions=tuple(sorted(relevant)),
        tracked=tracked,
        init=tuple(sorted(task.init & tracked)),
    )


def is_goal(task: GroundedTask, state: State) -> bool:
    atoms = set(state)
    return task.goal_pos <= atoms and not (task.goal_neg & atoms)


def successors(task: GroundedTask, view: SearchView, state: State) -> List[Tuple[int, State]]:
    atoms = frozenset(state)
    out: List[Tuple[int, State]] = []
    for idx in view.actions:
        if not task.pre_pos[idx] <= atoms or task.pre_neg[idx] & atoms:
            continue
        nxt = (atoms - task.delete[idx]) | (task.add[idx] & view.tracked)
        out.append((idx, tuple(sorted(nxt))))
    return out


def _hmax(task: GroundedTask, view: SearchView, state: State) -> Optional[int]:
    """Max-cost relaxed estimate; None when some goal is relaxed-unreachable."""
    if not task.goal_pos:
        return 0
    cost: Dict[int, int] = {atom: 0 for atom in state}
    pending = {idx: len(task.pre_pos[idx]) for idx in view.actions}
    support: Dict[int, int] = {idx: 0 for idx in view.actions}
    waiting: Dict[int, List[int]] = {}
    for idx in view.actions:
        for atom in task.pre_pos[idx]:
            waiting.setdefault(atom, []).append(idx)

    queue: List[Tuple[int, int]] = [(0, atom) for atom in state]
    heapq.heapify(queue)
    fired: Set[int] = set()
    for idx in view.actions:
        if pending[idx] == 0:
            fired.add(idx)
            for atom in task.add[idx]:
                value = task.actions[idx].cost
                if value < cost.get(atom, value + 1):
                    cost[atom] = value
                    heapq.heappush(queue, (value, atom))

    closed: Set[int] = set()
    while queue:
        value, atom = heapq.heappop(queue)
        if atom in closed or value > cost.get(atom, value):
            continue
        closed.add(atom)
        for idx in waiting.get(atom, ()):
            support[idx] = max(support[idx], value)
            pending[idx] -= 1
            if pending[idx] == 0 and idx not in fired:
                fired.add(idx)
                reached = support[idx] + task.actions[idx].cost
                for added in task.add[idx]:
                    if reached < cost.get(added, reached + 1):
                        cost[added] = reached
                        heapq.heappush(queue, (reached, added))

    worst = 0
    for atom in task.goal_pos:
        if atom not in cost:
            return None
        worst = max(worst, cost[atom])
    return worst


def _unmet_for(task: GroundedTask) -> List[str]:
    if task.unreachable_goals:
        return [str(atom) for atom in task.unreachable_goals]
    init = task.init_atoms()
    return [str(literal) for literal in task.unmet_goals(init)]


def plan(
    task: GroundedTask,
    *,
    heuristic: str = "hmax",
    node_limit: int = DEFAULT_NODE_LIMIT,
) -> Plan:
    """Cost-optimal plan by A* over the relevance view.

    ``heuristic="blind"`` turns the search into uniform-cost search. Ties are
    broken by insertion order, so equal inputs give equal plans.
    """
    if heuristic not in HEURISTICS:
        raise ValueError(f"unknown heuristic '{heuristic}'")
    logger.info("plan: start actions=%d heuristic=%s", len(task.actions), heuristic)
    if task.unreachable_goals:
        raise PlanningError("goal unreachable from init", unmet=_unmet_for(task))

    view = relevance_view(task)

    def estimate(state: State) -> Optional[int]:
        if heuristic == "blind":
            return 0
        return _hmax(task, view, state)

    start = view.init
    h0 = estimate(start)
    if h0 is None:
        raise PlanningError("goal unreachable from init", unmet=_unmet_for(task))

    counter = itertools.count()
    best: Dict[State, int] = {start: 0}
    parent: Dict[State, Tuple[State, int]] = {}
    frontier: List[Tuple[int, int, State]] = [(h0, next(counter), start)]
    closed: Set[State] = set()
    expanded = 0

    while frontier:
        _, _, state = heapq.heappop(frontier)
        if state in closed:
            continue
        if is_goal(task, state):
            steps = trace_steps(task, parent, state)
            result = Plan.of(steps)
            logger.info("plan: ok steps=%d cost=%d expanded=%d", len(result), result.total_cost, expanded)
            return result
        closed.add(state)
        expanded += 1
        if expanded > node_limit:
            raise PlanningError(
                f"node limit {node_limit} exceeded", unmet=_unmet_for(task), limit_exceeded=True
            )
        g = best[state]
        for idx, nxt in successors(task, view, state):
            if nxt in closed:
                continue
            cost = g + task.actions[idx].cost
            if cost < best.get(nxt, cost + 1):
                h = estimate(nxt)
                if h is None:
                    continue
                best[nxt] = cost
                parent[nxt] = (state, idx)
                heapq.heappush(frontier, (cost + h, next(counter), nxt))

    raise PlanningError("search space exhausted", unmet=_unmet_for(task))


def trace_steps(task: GroundedTask, parent: Dict[State, Tuple[State, int]], state: State) -> List[GroundedAction]:
    steps: List[GroundedAction] = []
    while state in parent:
        state, idx = parent[state]
        steps.append(task.actions[idx])
    steps.reverse()
    return steps
