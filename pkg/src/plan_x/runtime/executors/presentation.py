"""Executors building charts and presentation containers.

A presentation file is a JSON container::

    {"format": "plan-x-presentation/1", "name": "...",
     "slides": [{"name": "Slide 1", "title": "...", "items": [...]}]}

Slide items are ``{"type": "chart", "chart": {...}}``, ``{"type": "text", ...}``,
``{"type": "table", "columns": [...], "rows": [...]}`` or ``{"type": "note", ...}``.
"""

from __future__ import annotations

import copy
from typing import Any, Dict, List

from plan_x.errors import ExecutionError
from plan_x.runtime.registry import ActionContext, ExecutorRegistry
from plan_x.runtime.state import render_value
from plan_x.runtime.world import WorldError


PRESENTATION_FORMAT = "plan-x-presentation/1"


def _label(ctx: ActionContext, position: int) -> str:
    value = ctx.value(position)
    if isinstance(value, str) and value.strip():
        return value
    if isinstance(value, dict) and value.get("name"):
        return str(value["name"])
    return ctx.name(position)


def _chart(ctx: ActionContext, position: int) -> Dict[str, Any]:
    value = ctx.value(position)
    if not isinstance(value, dict) or "kind" not in value:
        raise ExecutionError(f"'{ctx.name(position)}' is not a chart")
    return value


def _deck(ctx: ActionContext, position: int) -> Dict[str, Any]:
    value = ctx.value(position)
    if not isinstance(value, dict) or "slides" not in value:
        raise ExecutionError(f"'{ctx.name(position)}' is not a presentation")
    return value


def _slide(ctx: ActionContext, slide_pos: int, deck_pos: int) -> Dict[str, Any]:
    record = ctx.record(slide_pos)
    deck = _deck(ctx, deck_pos)
    index = record.get("index")
    if record.get("presentation") != ctx.name(deck_pos) or not isinstance(index, int):
        raise ExecutionError(f"'{ctx.name(slide_pos)}' is not a slide of '{ctx.name(deck_pos)}'")
    return deck["slides"][index]


def _has_item(slide: Dict[str, Any], source: str) -> bool:
    return any(item.get("source") == source for item in slide.get("items", []))


# ---------------------------------------------------------------- graphs


def create_graph(ctx: ActionContext) -> None:
    kind = ctx.record(1).get("type", "graph")
    ctx.put(1, {"kind": kind, "name": _label(ctx, 1), "series": []})


def create_graph_success(ctx: ActionContext) -> bool:
    value = ctx.value(1)
    return isinstance(value, dict) and value.get("series") == []


def add_to_graph(ctx: ActionContext) -> None:
    data = ctx.table(1)
    chart = copy.deepcopy(_chart(ctx, 2))
    reference = ctx.table(4)
    x_name = ctx.text(3)
    if x_name not in reference.columns:
        if len(reference.columns) != 1:
            raise ExecutionError(f"'{ctx.name(4)}' has no column '{x_name}'")
        x_name = str(reference.columns[0])
    y_columns = [c for c in data.columns if str(c) != x_name]
    if not y_columns:
        raise ExecutionError(f"'{ctx.name(1)}' has no value column to plot")
    if len(data) != len(reference):
        raise ExecutionError(
            f"cannot plot {len(data)} values against {len(reference)} references"
        )
    x = render_value(reference[x_name].tolist())
    for column in y_columns:
        chart["series"].append({"name": str(column), "x": x, "y": render_value(data[column].tolist())})
    chart["x_label"] = x_name
    chart["y_label"] = str(y_columns[0])
    ctx.put(2, chart, used=True)


def add_to_graph_success(ctx: ActionContext) -> bool:
    value = ctx.value(2)
    return isinstance(value, dict) and bool(value.get("series"))


# --------------------------------------------------------- presentations


def create_presentation(ctx: ActionContext) -> None:
    ctx.put(1, {"name": _label(ctx, 1), "slides": []})


def create_presentation_success(ctx: ActionContext) -> bool:
    value = ctx.value(1)
    return isinstance(value, dict) and isinstance(value.get("slides"), list)


def create_slide(ctx: ActionContext) -> None:
    deck = copy.deepcopy(_deck(ctx, 2))
    index = len(deck["slides"])
    name = _label(ctx, 1)
    deck["slides"].append({"name": name, "title": ctx.text(3), "items": []})
    ctx.put(2, deck)
    ctx.put(1, name, presentation=ctx.name(2), index=index)


def create_slide_success(ctx: ActionContext) -> bool:
    slide = _slide(ctx, 1, 2)
    return slide.get("title") == ctx.text(3)


def _add_item(ctx: ActionContext, slide_pos: int, deck_pos: int, item: Dict[str, Any]) -> None:
    deck = copy.deepcopy(_deck(ctx, deck_pos))
    ctx.put(deck_pos, deck)
    _slide(ctx, slide_pos, deck_pos)["items"].append(item)


def add_to_slide(ctx: ActionContext) -> None:
    item = {"type": "chart", "source": ctx.name(1), "chart": copy.deepcopy(_chart(ctx, 1))}
    _add_item(ctx, 2, 3, item)


def add_to_slide_success(ctx: ActionContext) -> bool:
    return _has_item(_slide(ctx, 2, 3), ctx.name(1))


def add_text_to_slide(ctx: ActionContext) -> None:
    _add_item(ctx, 2, 3, {"type": "text", "source": ctx.name(1), "text": ctx.text(1)})


def add_table_to_slide(ctx: ActionContext) -> None:
    table = ctx.table(1)
    item = {
        "type": "table",
        "source": ctx.name(1),
        "columns": [str(c) for c in table.columns],
        "rows": render_value(table),
    }
    _add_item(ctx, 2, 3, item)


def contents_in_presentation(ctx: ActionContext) -> None:
    note = {"type": "note", "source": ctx.name(1), "graph": ctx.name(2), "text": str(render_value(ctx.value(1)))}
    _add_item(ctx, 3, 4, note)


def contents_in_presentation_success(ctx: ActionContext) -> bool:
    return _has_item(_slide(ctx, 3, 4), ctx.name(1))


def generate_presentation(ctx: ActionContext) -> None:
    deck = _deck(ctx, 1)
    container = {"format": PRESENTATION_FORMAT, "name": deck["name"], "slides": deck["slides"]}
    value = ctx.value(2)
    if not isinstance(value, str) or not value.strip():
        raise ExecutionError(f"'{ctx.name(2)}' has no file path")
    key = ctx.world.write_presentation(value, container)
    ctx.put(2, value, saved=key)
    ctx.put(1, deck, path=key)


def generate_presentation_success(ctx: ActionContext) -> bool:
    key = ctx.record(2).get("saved")
    if not key:
        return False
    try:
        written = ctx.world.presentation(key)
    except WorldError:
        return False
    slides: List[Any] = written.get("slides", [])
    return len(slides) == len(_deck(ctx, 1)["slides"])


def register(registry: ExecutorRegistry) -> None:
    registry.register("create-graph", create_graph, create_graph_success)
    registry.register("add-to-graph", add_to_graph, add_to_graph_success)
    registry.register("create-presentation", create_presentation, create_presentation_success)
    registry.register("create-slide", create_slide, create_slide_success)
    registry.register("add-to-slide", add_to_slide, add_to_slide_success)
    registry.register("add-to-slide-basic", add_to_slide, add_to_slide_success)
    registry.register("add-text-to-slide", add_text_to_slide, add_to_slide_success)
    registry.register("add-table-to-slide", add_table_to_slide, add_to_slide_success)
    registry.register("contents-in-presentation", contents_in_presentation, contents_in_presentation_success)
    registry.register("generate-presentation", generate_presentation, generate_presentation_success)
