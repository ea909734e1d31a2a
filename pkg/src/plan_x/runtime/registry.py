from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional

import pandas as pd

from plan_x.errors import ExecutionError
from plan_x.planner.grounding import GroundedAction
from plan_x.prompt.backends import CompletionBackend
from plan_x.runtime.state import ExecutionState
from plan_x.runtime.tree import DEFAULT_MAX_DEPTH
from plan_x.runtime.world import OfficeWorld


@dataclass
class Services:
    """Collaborators executors may call besides the world."""

    backend: Optional[CompletionBackend] = None
    tree_max_depth: int = DEFAULT_MAX_DEPTH


@dataclass
class ActionContext:
    action: GroundedAction
    state: ExecutionState
    world: OfficeWorld
    services: Services = field(default_factory=Services)

    def name(self, position: int) -> str:
        return self.action.args[position]

    def record(self, position: int) -> Dict[str, Any]:
        name = self.name(position)
        entry = self.state.get(name)
        if not isinstance(entry, dict):
            raise ExecutionError(f"no state entry for '{name}'")
        return entry

    def value(self, position: int) -> Any:
        return self.record(position).get("value")

    def text(self, position: int) -> str:
        value = self.value(position)
        if value is None:
            return ""
        if isinstance(value, pd.DataFrame):
            return value.to_csv(index=False)
        return str(value)

    def table(self, position: int) -> pd.DataFrame:
        value = self.value(position)
        if not isinstance(value, pd.DataFrame):
            raise ExecutionError(f"'{self.name(position)}' does not hold a table")
        return value

    def put(self, position: int, value: Any, **extras: Any) -> None:
        name = self.name(position)
        entry = dict(self.state.get(name) or {"type": "object"})
        entry["value"] = value
        entry.update(extras)
        self.state[name] = entry


ApplyFn = Callable[[ActionContext], None]
CheckFn = Callable[[ActionContext], bool]


@dataclass(frozen=True)
class Executor:
    name: str
    apply: ApplyFn
    succeeded: CheckFn


class ExecutorRegistry:
    def __init__(self) -> None:
        self._executors: Dict[str, Executor] = {}

    def register(self, name: str, apply: ApplyFn, succeeded: CheckFn) -> None:
        if name in self._executors:
            raise ValueError(f"executor for '{name}' already registered")
        self._executors[name] = Executor(name, apply, succeeded)

    def get(self, name: str) -> Executor:
        try:
            return self._executors[name]
        except KeyError:
            raise ExecutionError(f"no executor registered for '{name}'") from None

    def __contains__(self, name: object) -> bool:
        return name in self._executors

    def names(self) -> List[str]:
        return sorted(self._executors)

    def missing(self, actions: Iterable[GroundedAction]) -> List[str]:
        return sorted({a.name for a in actions if a.name not in self._executors})


def default_registry() -> ExecutorRegistry:
    from plan_x.runtime.executors import register_all

    registry = ExecutorRegistry()
    register_all(registry)
    return registry
