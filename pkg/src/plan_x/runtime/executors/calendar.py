from __future__ import annotations

from typing import Any, Dict, List

import pandas as pd

from plan_x.errors import ExecutionError
from plan_x.runtime.registry import ActionContext, ExecutorRegistry
from plan_x.runtime.world import APPOINTMENT_COLUMNS


WORKING_HOURS = range(8, 18)


def read_appointments(ctx: ActionContext) -> None:
    table = ctx.world.appointments()
    ctx.put(1, table.to_dict(orient="records"))
    ctx.put(2, table, type="dataframe", columns=list(APPOINTMENT_COLUMNS), source="calendar")


def read_appointments_success(ctx: ActionContext) -> bool:
    value = ctx.value(2)
    return isinstance(value, pd.DataFrame) and list(value.columns) == list(APPOINTMENT_COLUMNS)


def find_free_slots(ctx: ActionContext) -> None:
    """Free working hours on every day that has at least one appointment."""
    table = ctx.world.appointments()
    busy: Dict[str, set] = {}
    for row in table.to_dict(orient="records"):
        day = str(row["start"])[:10]
        busy.setdefault(day, set()).add(int(row["hour"]))
    slots: List[Dict[str, Any]] = [
        {"date": day, "hour": hour}
        for day in sorted(busy)
        for hour in WORKING_HOURS
        if hour not in busy[day]
    ]
    ctx.put(2, pd.DataFrame(slots, columns=["date", "hour"]), type="dataframe", columns=["date", "hour"])


def find_free_slots_success(ctx: ActionContext) -> bool:
    value = ctx.value(2)
    return isinstance(value, pd.DataFrame) and list(value.columns) == ["date", "hour"]


def add_to_appointments(ctx: ActionContext) -> None:
    item = ctx.value(1)
    if not isinstance(item, dict) or not item.get("subject") or not item.get("start"):
        raise ExecutionError(f"'{ctx.name(1)}' needs a subject and a start time")
    try:
        start = pd.Timestamp(item["start"])
    except ValueError as exc:
        raise ExecutionError(f"bad start time {item['start']!r}") from exc
    row = {
        "subject": item["subject"],
        "start": start.isoformat(),
        "hour": int(start.hour),
        "year": int(start.year),
        "isrecurring": bool(item.get("isrecurring", False)),
    }
    ctx.world.add_appointment(row)
    ctx.put(1, item, booked=row["start"])


def add_to_appointments_success(ctx: ActionContext) -> bool:
    booked = ctx.record(1).get("booked")
    subject = ctx.value(1).get("subject")
    return any(r.get("start") == booked and r.get("subject") == subject for r in ctx.world.calendar)


def register(registry: ExecutorRegistry) -> None:
    registry.register("read-appointments", read_appointments, read_appointments_success)
    registry.register("find-free-slots", find_free_slots, find_free_slots_success)
    registry.register("add-to-appointments", add_to_appointments, add_to_appointments_success)
