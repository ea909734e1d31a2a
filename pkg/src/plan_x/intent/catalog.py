from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from plan_x.errors import PlanXError, TaskValidationError
from plan_x.intent.task_dict import TaskDictionary, validate_task_dictionary
from plan_x.io.json_io import read_json
from plan_x.pddl.model import Domain


logger = logging.getLogger(__name__)

UNKNOWN_INTENT_PREFIX = "Unknown Intent"


@dataclass(frozen=True)
class Intent:
    name: str
    description: str
    example: Dict[str, Any]


@dataclass(frozen=True)
class IntentCatalog:
    intents: Tuple[Intent, ...] = ()

    def names(self) -> List[str]:
        return [intent.name for intent in self.intents]

    def find(self, name: str) -> Intent:
        for intent in self.intents:
            if intent.name == name:
                return intent
        raise KeyError(name)

    def unknown_intent(self) -> Optional[Intent]:
        for intent in self.intents:
            if intent.name.startswith(UNKNOWN_INTENT_PREFIX):
                return intent
        return None


def build_catalog(raw: Any, domain: Domain, source: str = "<catalog>") -> IntentCatalog:
    """Build a catalog and check every example against ``domain``."""
    if not isinstance(raw, list):
        raise PlanXError("config", f"{source}: intent catalog must be a JSON list")
    intents: List[Intent] = []
    problems: List[str] = []
    seen = set()
    for position, item in enumerate(raw):
        if not isinstance(item, dict) or not isinstance(item.get("name"), str):
            problems.append(f"entry {position} has no name")
            continue
        name = item["name"]
        if name in seen:
            problems.append(f"duplicate intent '{name}'")
            continue
        seen.add(name)
        example = item.get("example")
        try:
            validate_task_dictionary(example, domain)
        except TaskValidationError as exc:
            problems.append(f"intent '{name}': {exc.detail}")
            continue
        intents.append(Intent(name, str(item.get("description", "")), example))
    if problems:
        raise PlanXError("config", f"{source}: " + "; ".join(problems))
    logger.info("catalog: ok intents=%d", len(intents))
    return IntentCatalog(tuple(intents))


def load_catalog(path: str | Path, domain: Domain) -> IntentCatalog:
    catalog_path = Path(path)
    try:
        raw = read_json(catalog_path)
    except (OSError, ValueError) as exc:
        raise PlanXError("config", f"cannot read intent catalog {catalog_path}: {exc}") from exc
    return build_catalog(raw, domain, str(catalog_path))


def example_task(intent: Intent, domain: Domain) -> TaskDictionary:
    return validate_task_dictionary(intent.example, domain)
