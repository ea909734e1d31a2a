from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, List, Sequence, Tuple

from plan_x.errors import PlanXError
from plan_x.intent.catalog import IntentCatalog
from plan_x.intent.entities import EntityMap
from plan_x.io.json_io import read_json
from plan_x.pddl.model import ROOT_TYPE, Domain
from plan_x.pddl.writer import render_predicate


logger = logging.getLogger(__name__)

REQUEST_MARKER = "Request: "


@dataclass(frozen=True)
class SorSchema:
    name: str
    columns: Tuple[str, ...]


def build_schemas(raw: Any, source: str = "<schemas>") -> List[SorSchema]:
    if not isinstance(raw, list):
        raise PlanXError("config", f"{source}: schema file must be a JSON list")
    schemas: List[SorSchema] = []
    for position, item in enumerate(raw):
        if not isinstance(item, dict) or not isinstance(item.get("name"), str):
            raise PlanXError("config", f"{source}: schema {position} has no name")
        columns = item.get("columns", [])
        if not isinstance(columns, list) or not all(isinstance(c, str) for c in columns):
            raise PlanXError("config", f"{source}: schema '{item['name']}' columns must be strings")
        if len(set(columns)) != len(columns):
            raise PlanXError("config", f"{source}: schema '{item['name']}' repeats a column")
        schemas.append(SorSchema(item["name"], tuple(columns)))
    return schemas


def load_schemas(path: str | Path) -> List[SorSchema]:
    schema_path = Path(path)
    try:
        raw = read_json(schema_path)
    except (OSError, ValueError) as exc:
        raise PlanXError("config", f"cannot read schema file {schema_path}: {exc}") from exc
    return build_schemas(raw, str(schema_path))


_TASK_DEFINITION = (
    "You are working in an office environment. You answer requests from employees "
    "or clients. Information is stored in several systems of records (SOR)."
)

_SCHEMA_NOTE = (
    "Respect the upper or lower case of the schema fields when writing queries. "
    "Given a request, choose the appropriate SOR and identify the intents in the request."
)

_DICTIONARY_RULES = (
    "Return a single dictionary describing all intents; do not write functions or code "
    "and do not use external tools. The keys of the dictionary are the elements of the "
    "task (entities), 'init_state' and 'goals'. All keys are lowercase. 'init_state' and "
    "'goals' are mandatory. Each entity is a definition dictionary with the keys 'type' "
    "and 'value', plus element specific keys such as 'to', 'body' or 'subject' for "
    "emails. Types must be taken from the list above. Type names cannot be used as keys "
    "and keys cannot repeat."
)

_STATE_RULES = (
    "The value of 'init_state' is a state: a sequence of literals separated by spaces, "
    "holding what is true at the beginning. Each literal is written (<predicate> <arg> ...) "
    "with a predicate from the list above, and its arguments respect the declared types. "
    "Every argument of every literal must have an entry in the dictionary. The value of "
    "'goals' is a state as well, optionally wrapped in (and ...), holding what must be "
    "true at the end."
)

_MERGE_RULES = (
    "When the request holds more than one intent, merge their dictionaries: keep every "
    "entity, concatenate all 'init_state' literals and concatenate all 'goals' literals."
)

_OTHER_CONSTRAINTS = (
    "Do not include goal literals in the initial state. Use only one chat response. "
    "When writing queries, consider semantically equivalent values. Return the dictionary "
    "in a single response and do not prefix it with 'Output:'."
)


def _types_line(domain: Domain) -> str:
    ordered = [name for name in domain.types if name != ROOT_TYPE]
    ordered.append(ROOT_TYPE)
    return ", ".join(ordered)


def build_prompt(
    request: str,
    entities: EntityMap,
    domain: Domain,
    catalog: IntentCatalog,
    schemas: Sequence[SorSchema],
) -> str:
    lines: List[str] = [_TASK_DEFINITION]

    if schemas:
        rendered = ", ".join(f"{schema.name}: [{', '.join(schema.columns)}]" for schema in schemas)
        lines.append(f"Schemas: {rendered}")
    else:
        lines.append("Schemas: none")
    lines.append(_SCHEMA_NOTE)

    lines.append("")
    lines.append(f"The types of the task are: {_types_line(domain)}.")
    lines.append("The predicates are, as (<predicate-name> <parameters>):")
    for predicate in domain.predicates.values():
        lines.append(f"\t{render_predicate(predicate)}")
    lines.append("Parameters are written <variable> - <type>.")
    lines.append("The actions available are: " + ", ".join(a.name for a in domain.actions) + ".")

    lines.append("")
    lines.append(_DICTIONARY_RULES)
    lines.append(_STATE_RULES)
    lines.append(_MERGE_RULES)
    lines.append(_OTHER_CONSTRAINTS)

    lines.append("")
    lines.append("Examples are given as 'Intent: <intent>' followed by 'Output:' and the dictionary.")
    for intent in catalog.intents:
        lines.append("")
        lines.append(f"Intent: {intent.name}")
        lines.append("Output:")
        lines.append(json.dumps(intent.example, ensure_ascii=False))

    lines.append("")
    lines.append("Entities detected:")
    if entities:
        for entity_type, values in entities.items():
            lines.append(f"\t{entity_type}: {', '.join(values)}")
    else:
        lines.append("\tnone")

    lines.append("")
    lines.append(f"{REQUEST_MARKER}{request}")
    prompt = "\n".join(lines) + "\n"
    logger.info("prompt: ok chars=%d intents=%d", len(prompt), len(catalog.intents))
    return prompt


def request_of(prompt: str) -> str:
    """The request a prompt was built for (everything after the last marker)."""
    idx = prompt.rfind(REQUEST_MARKER)
    if idx < 0:
        return prompt.strip()
    return prompt[idx + len(REQUEST_MARKER):].strip()
