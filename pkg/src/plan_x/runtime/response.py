from __future__ import annotations

import json
from typing import Any, List

from plan_x.runtime.execute import STATUS_ABORTED, STATUS_SUCCESS, ExecutionReport


FALLBACK_RESPONSE = "Apologies, I'm not able to help with that. Try another question!"

_OUTCOMES = {
    STATUS_SUCCESS: "Done: all goals achieved.",
    STATUS_ABORTED: "Stopped: execution aborted.",
}


def _inline(value: Any) -> str:
    if isinstance(value, str):
        return value
    return json.dumps(value, ensure_ascii=False, sort_keys=True)


def _contents_lines(contents: Any) -> List[str]:
    if isinstance(contents, list):
        lines = []
        for item in contents:
            if isinstance(item, dict) and "name" in item:
                lines.append(f"{item['name']}: {_inline(item.get('value'))}")
            else:
                lines.append(_inline(item))
        return lines
    if contents in (None, ""):
        return []
    return [_inline(contents)]


def build_response(report: ExecutionReport) -> str:
    """Plain-text account of an execution.

    Contents sent to the user come first, then one line per executed step,
    replans, the outcome, produced files and extracted values.
    """
    lines: List[str] = []
    responses = [m for m in report.messages if m.get("kind") == "response"]
    for message in responses:
        lines.extend(_contents_lines(message.get("contents")))
    if lines:
        lines.append("")

    for step in report.steps:
        status = "done" if step.applied and step.monitor else "failed"
        line = f"Step {step.number}: {step.action} ... {status}"
        lines.append(f"{line} ({step.error})" if step.error else line)
    for replan in report.replans:
        if replan.steps:
            lines.append(f"Replanned after {replan.trigger}: {len(replan.steps)} new step(s).")
        else:
            lines.append(f"Could not replan after {replan.trigger}: {replan.reason}")

    lines.append(_OUTCOMES.get(report.status, "Finished with goals unmet."))
    if report.reason and report.status != STATUS_SUCCESS:
        lines.append(f"Reason: {report.reason}")
    if report.artifacts:
        lines.append("Files: " + ", ".join(report.artifacts))
    if not responses:
        for name, value in report.outputs.items():
            lines.append(f"{name}: {_inline(value)}")
    for message in report.messages:
        if message.get("kind") != "response":
            lines.append(f"Sent {message.get('kind')} to {message.get('to')}.")
    return "\n".join(lines) + "\n"


def unsolvable_response(message: str, unmet: List[str]) -> str:
    lines = [f"No plan found ({message})."]
    if unmet:
        lines.append("Unmet goals: " + " ".join(unmet))
    return "\n".join(lines) + "\n"
