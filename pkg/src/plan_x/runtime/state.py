from __future__ import annotations

import copy
from typing import Any, Dict, List, Optional

import pandas as pd

from plan_x.intent.task_dict import TaskDictionary
from plan_x.pddl.model import Problem


# Reserved entry: literal strings an executor asks the runtime to achieve next.
NEW_GOALS = "new_goals"

ExecutionState = Dict[str, Any]


def seed_state(task: TaskDictionary, problem: Optional[Problem] = None) -> ExecutionState:
    """One record per object, copied from the dictionary's entity values."""
    state: ExecutionState = {name: record.to_json() for name, record in task.entities.items()}
    if problem is not None:
        for obj in problem.objects:
            state.setdefault(obj.name, {"type": obj.type, "value": None})
    state[NEW_GOALS] = []
    return state


def _copy_value(value: Any) -> Any:
    if isinstance(value, (pd.DataFrame, pd.Series)):
        return value.copy(deep=True)
    if isinstance(value, dict):
        return {k: _copy_value(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_copy_value(v) for v in value]
    return copy.deepcopy(value)


def copy_state(state: ExecutionState) -> ExecutionState:
    return {name: _copy_value(entry) for name, entry in state.items()}


def take_new_goals(state: ExecutionState) -> List[str]:
    goals = [str(goal) for goal in state.get(NEW_GOALS) or []]
    state[NEW_GOALS] = []
    return goals


def render_value(value: Any) -> Any:
    """JSON-compatible rendering of a state value."""
    if isinstance(value, pd.DataFrame):
        return value.to_dict(orient="records")
    if isinstance(value, pd.Series):
        return value.tolist()
    if isinstance(value, dict):
        return {str(k): render_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [render_value(v) for v in value]
    if hasattr(value, "item") and callable(value.item):
        return value.item()
    return value
