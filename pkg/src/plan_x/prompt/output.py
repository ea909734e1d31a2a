from __future__ import annotations

import ast
import json
import logging
import re
from typing import Any, Dict, List, Tuple

from plan_x.errors import OutputParseError


logger = logging.getLogger(__name__)

_JSON_LITERALS = {"true": "True", "false": "False", "null": "None"}
_LITERAL_RE = re.compile(r"""("(?:\\.|[^"\\])*"|'(?:\\.|[^'\\])*')|\b(true|false|null)\b""")


def _first_object_span(reply: str) -> Tuple[int, int]:
    start = reply.find("{")
    if start < 0:
        raise OutputParseError("no JSON object found in reply")
    depth = 0
    quote = ""
    escaped = False
    for idx in range(start, len(reply)):
        ch = reply[idx]
        if quote:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == quote:
                quote = ""
            continue
        if ch in ("'", '"'):
            quote = ch
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return start, idx + 1
    raise OutputParseError("unbalanced braces in reply")


def _reject_duplicates(pairs: List[Tuple[str, Any]]) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for key, value in pairs:
        if key in out:
            raise OutputParseError(f"duplicate key '{key}'")
        out[key] = value
    return out


def _python_literals(snippet: str) -> str:
    """Python spelling of JSON ``true``/``false``/``null`` outside string literals."""
    return _LITERAL_RE.sub(lambda m: m.group(1) or _JSON_LITERALS[m.group(2)], snippet)


def parse_llm_output(reply: str) -> Dict[str, Any]:
    """First complete object in ``reply`` as strict JSON data.

    Prose, code fences and Python-style single quotes around it are tolerated.
    """
    start, end = _first_object_span(reply)
    snippet = reply[start:end]
    try:
        parsed = json.loads(snippet, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError:
        try:
            parsed = ast.literal_eval(_python_literals(snippet))
        except (ValueError, SyntaxError) as exc:
            raise OutputParseError(f"reply object is neither JSON nor a dictionary literal: {exc}") from exc
    if not isinstance(parsed, dict):
        raise OutputParseError("reply object is not a dictionary")
    # Round-trip through json so tuples, sets and non-string keys surface here.
    try:
        normalized = json.loads(json.dumps(parsed))
    except (TypeError, ValueError) as exc:
        raise OutputParseError(f"reply object is not JSON-compatible: {exc}") from exc
    logger.info("parse: ok keys=%d", len(normalized))
    return normalized
