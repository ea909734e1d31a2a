from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Tuple

from plan_x.errors import PlanXError
from plan_x.io.json_io import read_json


logger = logging.getLogger(__name__)

EntityMap = Dict[str, List[str]]


@dataclass(frozen=True)
class EntityMatch:
    entity_type: str
    text: str
    start: int
    end: int


@dataclass(frozen=True)
class PatternSet:
    """Compiled entity patterns in declaration order."""

    patterns: Tuple[Tuple[str, "re.Pattern[str]"], ...] = ()

    @property
    def entity_types(self) -> List[str]:
        return [name for name, _ in self.patterns]


def compile_patterns(raw: object, source: str = "<patterns>") -> PatternSet:
    if not isinstance(raw, dict):
        raise PlanXError("config", f"{source}: pattern file must be a JSON object")
    compiled: List[Tuple[str, "re.Pattern[str]"]] = []
    problems: List[str] = []
    for name, expr in raw.items():
        if not isinstance(expr, str) or not expr:
            problems.append(f"pattern '{name}' must be a non-empty string")
            continue
        try:
            pattern = re.compile(expr)
        except re.error as exc:
            problems.append(f"pattern '{name}' is not a valid regex: {exc}")
            continue
        if pattern.match(""):
            problems.append(f"pattern '{name}' matches the empty string")
            continue
        compiled.append((name, pattern))
    if problems:
        raise PlanXError("config", f"{source}: " + "; ".join(problems))
    return PatternSet(tuple(compiled))


def load_patterns(path: str | Path) -> PatternSet:
    pattern_path = Path(path)
    try:
        raw = read_json(pattern_path)
    except (OSError, ValueError) as exc:
        raise PlanXError("config", f"cannot read pattern file {pattern_path}: {exc}") from exc
    return compile_patterns(raw, str(pattern_path))


def find_entities(request: str, patterns: PatternSet) -> List[EntityMatch]:
    """Non-overlapping matches, longest first at each position.

    Ties on start and length go to the pattern declared first.
    """
    candidates: List[Tuple[int, int, int, EntityMatch]] = []
    for order, (name, pattern) in enumerate(patterns.patterns):
        for match in pattern.finditer(request):
            if match.end() == match.start():
                continue
            found = EntityMatch(name, match.group(0), match.start(), match.end())
            candidates.append((found.start, -(found.end - found.start), order, found))
    candidates.sort(key=lambda item: item[:3])

    selected: List[EntityMatch] = []
    cursor = 0
    for _, _, _, found in candidates:
        if found.start < cursor:
            continue
        selected.append(found)
        cursor = found.end
    return selected


def extract_entities(request: str, patterns: PatternSet) -> EntityMap:
    entities: EntityMap = {}
    for found in find_entities(request, patterns):
        entities.setdefault(found.entity_type, []).append(found.text)
    logger.info(
        "extract: ok entities=%d types=%d",
        sum(len(values) for values in entities.values()),
        len(entities),
    )
    return entities
