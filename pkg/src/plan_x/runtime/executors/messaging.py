"""Responses to the user and the simulated mailbox."""

from __future__ import annotations

import re
from typing import Any, Dict, List

from plan_x.errors import ExecutionError
from plan_x.runtime.registry import ActionContext, ExecutorRegistry
from plan_x.runtime.state import NEW_GOALS, render_value
from plan_x.runtime.world import WorldError


_FIELD_RE = re.compile(r"^\s*([A-Za-z][A-Za-z0-9 _-]*):\s*(.+?)\s*$")


def _sent(ctx: ActionContext, **match: Any) -> bool:
    return any(all(message.get(k) == v for k, v in match.items()) for message in ctx.world.outbox)


# ------------------------------------------------------------- responses


def create_response(ctx: ActionContext) -> None:
    ctx.put(1, [])


def create_response_success(ctx: ActionContext) -> bool:
    return ctx.value(1) == []


def add_to_response(ctx: ActionContext) -> None:
    contents = ctx.value(2)
    if not isinstance(contents, list):
        contents = [contents] if contents else []
    record = ctx.record(1)
    contents = contents + [
        {"name": ctx.name(1), "type": record.get("type"), "value": render_value(record.get("value"))}
    ]
    ctx.put(2, contents)


def add_to_response_success(ctx: ActionContext) -> bool:
    contents = ctx.value(2)
    return isinstance(contents, list) and any(
        isinstance(item, dict) and item.get("name") == ctx.name(1) for item in contents
    )


def send_response(ctx: ActionContext) -> None:
    contents = render_value(ctx.value(1))
    ctx.world.send({"kind": "response", "response": ctx.name(1), "to": "user", "contents": contents})
    ctx.put(1, ctx.value(1), sent=True)


def send_response_success(ctx: ActionContext) -> bool:
    return _sent(ctx, kind="response", response=ctx.name(1))


# ----------------------------------------------------------------- email


def _outgoing(ctx: ActionContext, kind: str) -> None:
    email = ctx.record(1)
    recipient = email.get("to")
    if not recipient:
        raise ExecutionError(f"'{ctx.name(1)}' has no recipient")
    body = email.get("body") or ""
    attached = ctx.text(2)
    ctx.world.send(
        {
            "kind": kind,
            "email": ctx.name(1),
            "contents": ctx.name(2),
            "to": recipient,
            "subject": email.get("subject") or "",
            "body": f"{body}\n\n{attached}".strip(),
        }
    )


def send_response_email(ctx: ActionContext) -> None:
    _outgoing(ctx, "email")


def send_response_email_success(ctx: ActionContext) -> bool:
    return _sent(ctx, kind="email", email=ctx.name(1), contents=ctx.name(2))


def notify_email(ctx: ActionContext) -> None:
    _outgoing(ctx, "notification")


def notify_email_success(ctx: ActionContext) -> bool:
    return _sent(ctx, kind="notification", email=ctx.name(1), contents=ctx.name(2))


def _message(ctx: ActionContext, position: int) -> Dict[str, Any]:
    ref = ctx.value(position) or ctx.name(position)
    try:
        return ctx.world.inbox_message(ref)
    except WorldError as exc:
        raise ExecutionError(str(exc)) from exc


def read_email(ctx: ActionContext) -> None:
    """Body into the contents entry; a ``goals`` field is handed to the runtime."""
    message = _message(ctx, 1)
    ctx.put(2, message.get("body", ""), sender=message.get("from"), subject=message.get("subject"))
    attachment = message.get("attachment")
    target = ctx.value(3)
    if attachment is not None and isinstance(target, str) and target.strip():
        ctx.world.write_text(target, str(attachment))
    ctx.put(1, ctx.value(1), read=True, sender=message.get("from"), subject=message.get("subject"))
    goals = message.get("goals")
    if goals:
        ctx.state.setdefault(NEW_GOALS, [])
        ctx.state[NEW_GOALS].append(str(goals))


def read_email_success(ctx: ActionContext) -> bool:
    return ctx.record(1).get("read") is True and isinstance(ctx.value(2), str)


def reply_email(ctx: ActionContext) -> None:
    message = _message(ctx, 1)
    ctx.world.send(
        {
            "kind": "reply",
            "email": ctx.name(1),
            "contents": ctx.name(2),
            "to": message.get("from", ""),
            "subject": "Re: " + str(message.get("subject", "")),
            "body": ctx.text(2),
        }
    )


def reply_email_success(ctx: ActionContext) -> bool:
    return _sent(ctx, kind="reply", email=ctx.name(1), contents=ctx.name(2))


def parse_email(ctx: ActionContext) -> None:
    message = _message(ctx, 1)
    fields: Dict[str, str] = {}
    lines: List[str] = str(message.get("body", "")).splitlines()
    for line in lines:
        match = _FIELD_RE.match(line)
        if match:
            fields[match.group(1).strip().lower()] = match.group(2)
    ctx.put(1, ctx.value(1), fields=fields)


def parse_email_success(ctx: ActionContext) -> bool:
    return isinstance(ctx.record(1).get("fields"), dict)


def register(registry: ExecutorRegistry) -> None:
    registry.register("create-response", create_response, create_response_success)
    registry.register("add-to-response", add_to_response, add_to_response_success)
    registry.register("send-response", send_response, send_response_success)
    registry.register("send-response-email", send_response_email, send_response_email_success)
    registry.register("notify-email", notify_email, notify_email_success)
    registry.register("read-email", read_email, read_email_success)
    registry.register("reply-email", reply_email, reply_email_success)
    registry.register("parse-email", parse_email, parse_email_success)
