from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from plan_x.errors import MergeError, PddlError, TaskValidationError
from plan_x.pddl.model import Domain, Literal, NumericAssignment, unique
from plan_x.pddl.reader import parse_state


logger = logging.getLogger(__name__)

INIT_KEY = "init_state"
GOALS_KEY = "goals"
STATE_TYPE = "state"
_RESERVED = (INIT_KEY, GOALS_KEY)
_KEY_RE = re.compile(r"^[a-z][a-z0-9_-]*$")


@dataclass(frozen=True, eq=False)
class EntityRecord:
    type: str
    value: Any = None
    extras: Mapping[str, Any] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = dict(self.extras)
        out["type"] = self.type
        out["value"] = self.value
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EntityRecord):
            return NotImplemented
        return self.to_json() == other.to_json()

    def __hash__(self) -> int:
        return hash((self.type, repr(self.value)))


@dataclass(frozen=True)
class TaskDictionary:
    entities: Dict[str, EntityRecord]
    init: Tuple[Literal, ...] = ()
    numeric_init: Tuple[NumericAssignment, ...] = ()
    goals: Tuple[Literal, ...] = ()

    @property
    def init_state(self) -> str:
        parts = [str(literal) for literal in self.init]
        parts.extend(str(assignment) for assignment in self.numeric_init)
        return " ".join(parts)

    @property
    def goal_state(self) -> str:
        return "(and " + " ".join(str(literal) for literal in self.goals) + ")" if self.goals else "(and)"

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {key: record.to_json() for key, record in self.entities.items()}
        out[INIT_KEY] = {"type": STATE_TYPE, "value": self.init_state}
        out[GOALS_KEY] = {"type": STATE_TYPE, "value": self.goal_state}
        return out


def _state_text(raw: Any, key: str, violations: List[str]) -> Optional[str]:
    if isinstance(raw, str):
        return raw
    if isinstance(raw, dict) and isinstance(raw.get("value"), str):
        return raw["value"]
    violations.append(f"'{key}' must be a state record with a string value")
    return None


def _parse_literals(
    text: str,
    key: str,
    domain: Domain,
    scope: Dict[str, str],
    violations: List[str],
) -> Tuple[List[Literal], List[NumericAssignment]]:
    try:
        literals, numeric, diagnostics = parse_state(text, domain, scope, source=key)
    except PddlError as exc:
        violations.extend(f"{key}: unparseable literal string ({d.message})" for d in exc.diagnostics)
        return [], []
    for diagnostic in diagnostics:
        message = diagnostic.message
        if message.startswith("undeclared object"):
            message = message.replace("undeclared object", "literal argument has no entity key", 1)
        violations.append(f"{key}: {message}")
    return literals, numeric


def validate_task_dictionary(raw: Any, domain: Domain) -> TaskDictionary:
    """Check the backend's dictionary against ``domain``.

    Every violation is collected before raising.
    """
    if not isinstance(raw, dict):
        raise TaskValidationError(["task dictionary must be a JSON object"])
    violations: List[str] = []
    for key in _RESERVED:
        if key not in raw:
            violations.append(f"missing mandatory key '{key}'")

    constants = domain.constant_types()
    entities: Dict[str, EntityRecord] = {}
    for key, record in raw.items():
        if key in _RESERVED:
            continue
        if not isinstance(key, str) or key != key.lower():
            violations.append(f"key not lowercase: '{key}'")
            continue
        if key in domain.types:
            violations.append(f"key '{key}' collides with a type name")
            continue
        if key in constants:
            violations.append(f"key '{key}' collides with a domain constant")
            continue
        if not _KEY_RE.match(key):
            violations.append(f"key '{key}' is not a valid object name")
            continue
        if not isinstance(record, dict):
            violations.append(f"entity '{key}' must be a definition dictionary")
            continue
        type_name = record.get("type")
        if not isinstance(type_name, str) or type_name not in domain.types:
            violations.append(f"entity '{key}' has unknown type '{type_name}'")
            continue
        if "value" not in record:
            violations.append(f"entity '{key}' has no 'value'")
            continue
        extras = {k: v for k, v in record.items() if k not in ("type", "value")}
        entities[key] = EntityRecord(type_name, record["value"], extras)

    scope = dict(constants)
    scope.update({key: record.type for key, record in entities.items()})

    init: List[Literal] = []
    numeric: List[NumericAssignment] = []
    goals: List[Literal] = []
    init_text = _state_text(raw[INIT_KEY], INIT_KEY, violations) if INIT_KEY in raw else None
    if init_text is not None:
        init, numeric = _parse_literals(init_text, INIT_KEY, domain, scope, violations)
        for literal in init:
            if not literal.positive:
                violations.append(f"{INIT_KEY}: negative literal {literal} is not allowed")
    goal_text = _state_text(raw[GOALS_KEY], GOALS_KEY, violations) if GOALS_KEY in raw else None
    if goal_text is not None:
        goals, goal_numeric = _parse_literals(goal_text, GOALS_KEY, domain, scope, violations)
        if goal_numeric:
            violations.append(f"{GOALS_KEY}: numeric assignments are not allowed")

    if violations:
        raise TaskValidationError(violations)

    init_atoms = {literal.atom for literal in init}
    for literal in goals:
        if literal.positive and literal.atom in init_atoms:
            logger.warning("validate: goal %s already in %s", literal, INIT_KEY)
    task = TaskDictionary(
        entities=entities,
        init=tuple(init),
        numeric_init=tuple(numeric),
        goals=tuple(goals),
    )
    logger.info(
        "validate: ok entities=%d init=%d goals=%d",
        len(entities),
        len(task.init) + len(task.numeric_init),
        len(task.goals),
    )
    return task


def merge_task_dictionaries(dicts: Sequence[TaskDictionary]) -> TaskDictionary:
    entities: Dict[str, EntityRecord] = {}
    init: List[Literal] = []
    numeric: List[NumericAssignment] = []
    goals: List[Literal] = []
    for task in dicts:
        for key, record in task.entities.items():
            existing = entities.get(key)
            if existing is not None and existing != record:
                raise MergeError(f"key '{key}' is bound to conflicting records")
            entities[key] = record
        init.extend(task.init)
        numeric.extend(task.numeric_init)
        goals.extend(task.goals)
    for assignment in unique(numeric):
        clash = [a for a in numeric if a.term == assignment.term and a.value != assignment.value]
        if clash:
            raise MergeError(f"fluent {assignment.term} is assigned conflicting values")
    return TaskDictionary(
        entities=entities,
        init=tuple(unique(init)),
        numeric_init=tuple(unique(numeric)),
        goals=tuple(unique(goals)),
    )
