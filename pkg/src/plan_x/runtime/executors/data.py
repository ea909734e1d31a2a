"""Executors for files, API fixtures and table manipulation."""

from __future__ import annotations

from typing import Any, Dict

import pandas as pd

from plan_x.errors import ExecutionError
from plan_x.runtime.query_filter import QueryError, query_mask, run_query
from plan_x.runtime.registry import ActionContext, ExecutorRegistry
from plan_x.runtime.world import WorldError


def _path(ctx: ActionContext, position: int) -> str:
    value = ctx.value(position)
    if not isinstance(value, str) or not value.strip():
        raise ExecutionError(f"'{ctx.name(position)}' has no file path")
    return value


def column_entry_name(column: str) -> str:
    return (str(column).replace(" ", "-") + "_column").lower()


def _is_table(ctx: ActionContext, position: int) -> bool:
    return isinstance(ctx.record(position).get("value"), pd.DataFrame)


# --------------------------------------------------------------- files


def read_data(ctx: ActionContext) -> None:
    path = _path(ctx, 2)
    try:
        key = ctx.world.resolve(path, ".csv")
        table = ctx.world.read_table(key)
    except WorldError as exc:
        raise ExecutionError(str(exc)) from exc
    columns = [str(c) for c in table.columns]
    ctx.put(1, table, type="dataframe", columns=columns, source=key)
    for column in columns:
        name = column_entry_name(column)
        if name not in ctx.state:
            ctx.state[name] = {"type": "column", "value": column}


def read_data_success(ctx: ActionContext) -> bool:
    return _is_table(ctx, 1)


def connect_api(ctx: ActionContext) -> None:
    try:
        table = ctx.world.api_table(ctx.text(1))
    except WorldError as exc:
        raise ExecutionError(str(exc)) from exc
    key = ctx.text(4)
    matches = table.astype(str).eq(key).any(axis=1)
    selected = table[matches].reset_index(drop=True)
    ctx.put(2, selected, type="dataframe", columns=[str(c) for c in selected.columns], source=f"api:{ctx.text(1)}")


def connect_api_success(ctx: ActionContext) -> bool:
    return _is_table(ctx, 2) and not ctx.table(2).empty


def _read_text_payload(ctx: ActionContext) -> None:
    path = _path(ctx, 2)
    try:
        key = ctx.world.resolve(path, ".txt")
        text = ctx.world.read_text(key)
    except WorldError as exc:
        raise ExecutionError(str(exc)) from exc
    ctx.put(1, text, source=key)


def _text_read_success(ctx: ActionContext) -> bool:
    record = ctx.record(1)
    return isinstance(record.get("value"), str) and "source" in record


def _save_text(ctx: ActionContext) -> None:
    key = ctx.world.write_text(_path(ctx, 2), ctx.text(1))
    ctx.put(2, ctx.value(2), saved=key)


def _saved_text_success(ctx: ActionContext) -> bool:
    key = ctx.record(2).get("saved")
    return bool(key) and ctx.world.has_file(key) and ctx.world.read_text(key) == ctx.text(1)


def save_data(ctx: ActionContext) -> None:
    key = ctx.world.write_table(_path(ctx, 2), ctx.table(1))
    ctx.put(2, ctx.value(2), saved=key)


def save_data_success(ctx: ActionContext) -> bool:
    key = ctx.record(2).get("saved")
    return bool(key) and ctx.world.has_file(key) and len(ctx.world.read_table(key)) == len(ctx.table(1))


def find_info(ctx: ActionContext) -> None:
    needle = ctx.text(1).strip()
    target = ctx.value(2)
    only = None
    if isinstance(target, str) and target.strip():
        try:
            only = ctx.world.resolve(target, ".txt")
        except WorldError as exc:
            raise ExecutionError(str(exc)) from exc
    hits = ctx.world.find_text(needle, only)
    if not hits:
        raise ExecutionError(f"no file mentions {needle!r}")
    ctx.put(3, "\n".join(line for _, line in hits), type="text", sources=sorted({k for k, _ in hits}))


def find_info_success(ctx: ActionContext) -> bool:
    value = ctx.value(3)
    return isinstance(value, str) and bool(value)


# ---------------------------------------------------------- dataframes


def _query(ctx: ActionContext, engine: str) -> None:
    text = ctx.text(1)
    try:
        result = run_query(text, ctx.table(2))
    except QueryError as exc:
        raise ExecutionError(f"query {ctx.name(1)}: {exc}") from exc
    ctx.put(3, result, columns=[str(c) for c in result.columns], query=text, engine=engine)


def query_data(ctx: ActionContext) -> None:
    _query(ctx, "file")


def query_data_basic(ctx: ActionContext) -> None:
    _query(ctx, "basic")


def query_data_optimized(ctx: ActionContext) -> None:
    _query(ctx, "optimized")


def query_data_success(ctx: ActionContext) -> bool:
    return _is_table(ctx, 3) and ctx.record(3).get("query") == ctx.text(1)


def extract_data(ctx: ActionContext) -> None:
    table = ctx.table(2)
    kind = ctx.record(1).get("type")
    extracted: Any
    if kind == "count":
        extracted = int(len(table))
    elif kind == "value-counts":
        if table.columns.empty:
            raise ExecutionError(f"'{ctx.name(2)}' has no columns to count")
        counts = table.iloc[:, 0].value_counts(sort=True)
        extracted = {str(k): int(v) for k, v in counts.items()}
    else:
        if table.empty:
            raise ExecutionError(f"'{ctx.name(2)}' is empty")
        extracted = table.iat[0, 0]
        extracted = extracted.item() if hasattr(extracted, "item") else extracted
    ctx.put(1, extracted)
    ctx.put(3, extracted, extracted_from=ctx.name(2))


def extract_data_success(ctx: ActionContext) -> bool:
    return ctx.record(3).get("extracted_from") == ctx.name(2)


def create_data(ctx: ActionContext) -> None:
    source = ctx.table(1)
    rows = ctx.value(2)
    if isinstance(rows, list) and rows and all(isinstance(r, dict) for r in rows):
        created = pd.DataFrame(rows)
    else:
        created = pd.DataFrame(columns=source.columns)
    ctx.put(2, created, columns=[str(c) for c in created.columns])


def table_at_3(ctx: ActionContext) -> bool:
    return _is_table(ctx, 3)


def table_at_2(ctx: ActionContext) -> bool:
    return _is_table(ctx, 2)


def delete_data(ctx: ActionContext) -> None:
    table = ctx.table(1)
    doomed = ctx.table(2)
    common = [c for c in table.columns if c in doomed.columns]
    if not common:
        raise ExecutionError(f"'{ctx.name(2)}' shares no columns with '{ctx.name(1)}'")
    merged = table.merge(doomed[common].drop_duplicates(), on=common, how="left", indicator=True)
    kept = merged[merged["_merge"] == "left_only"].drop(columns="_merge").reset_index(drop=True)
    ctx.put(3, kept, columns=[str(c) for c in kept.columns], deleted=int(len(table) - len(kept)))


def delete_data_success(ctx: ActionContext) -> bool:
    return _is_table(ctx, 3) and len(ctx.table(3)) <= len(ctx.table(1))


def _coerce(text: str, column: pd.Series) -> Any:
    if pd.api.types.is_bool_dtype(column):
        return text.strip().lower() in ("true", "1", "yes")
    if pd.api.types.is_numeric_dtype(column):
        try:
            number = float(text)
        except ValueError:
            return text
        return int(number) if number.is_integer() else number
    return text


def _selection(ctx: ActionContext, table: pd.DataFrame) -> pd.Series:
    record = ctx.record(2)
    if record.get("type") == "query":
        try:
            return query_mask(ctx.text(2), table)
        except QueryError as exc:
            raise ExecutionError(f"query {ctx.name(2)}: {exc}") from exc
    return pd.Series(True, index=table.index)


def _set_column(ctx: ActionContext, create: bool) -> None:
    table = ctx.table(1).copy()
    column = ctx.text(3)
    if column not in table.columns:
        if not create:
            raise ExecutionError(f"unknown column '{column}'")
        table[column] = ""
    mask = _selection(ctx, table)
    table.loc[mask, column] = _coerce(ctx.text(4), table[column])
    ctx.put(5, table, columns=[str(c) for c in table.columns], changed=int(mask.sum()))


def modify_data(ctx: ActionContext) -> None:
    _set_column(ctx, create=False)


def add_value(ctx: ActionContext) -> None:
    _set_column(ctx, create=True)


def set_column_success(ctx: ActionContext) -> bool:
    return _is_table(ctx, 5) and ctx.text(3) in ctx.table(5).columns


def modify_row(ctx: ActionContext) -> None:
    table = ctx.table(1).copy()
    row = ctx.value(2)
    if not isinstance(row, dict) or not row:
        raise ExecutionError(f"'{ctx.name(2)}' is not a row")
    key = table.columns[0] if len(table.columns) else None
    if key is not None and key in row and (table[key] == row[key]).any():
        for column, value in row.items():
            table.loc[table[key] == row[key], column] = value
    else:
        table = pd.concat([table, pd.DataFrame([row])], ignore_index=True)
    ctx.put(3, table, columns=[str(c) for c in table.columns])


def modify_row_success(ctx: ActionContext) -> bool:
    if not _is_table(ctx, 3):
        return False
    row: Dict[str, Any] = ctx.value(2)
    table = ctx.table(3)
    mask = pd.Series(True, index=table.index)
    for column, value in row.items():
        if column not in table.columns:
            return False
        mask &= table[column].astype(str) == str(value)
    return bool(mask.any())


def merge_data(ctx: ActionContext) -> None:
    left, right = ctx.table(1), ctx.table(2)
    if list(left.columns) == list(right.columns):
        merged = pd.concat([left, right], ignore_index=True)
    else:
        common = [c for c in left.columns if c in right.columns]
        if not common:
            raise ExecutionError(f"'{ctx.name(1)}' and '{ctx.name(2)}' share no columns")
        merged = left.merge(right, on=common, how="inner")
    ctx.put(3, merged, columns=[str(c) for c in merged.columns])


def match_items(ctx: ActionContext) -> None:
    table, other = ctx.table(1), ctx.table(2)
    column = ctx.text(3)
    for name, frame in ((ctx.name(1), table), (ctx.name(2), other)):
        if column not in frame.columns:
            raise ExecutionError(f"'{name}' has no column '{column}'")
    matched = table[table[column].isin(other[column])].reset_index(drop=True)
    ctx.put(4, matched, columns=[str(c) for c in matched.columns], key=column)


def match_items_success(ctx: ActionContext) -> bool:
    return _is_table(ctx, 4) and ctx.record(4).get("key") == ctx.text(3)


def register(registry: ExecutorRegistry) -> None:
    registry.register("read-data", read_data, read_data_success)
    registry.register("connect-api", connect_api, connect_api_success)
    registry.register("read-pdf", _read_text_payload, _text_read_success)
    registry.register("read-word", _read_text_payload, _text_read_success)
    registry.register("save-pdf", _save_text, _saved_text_success)
    registry.register("save-text", _save_text, _saved_text_success)
    registry.register("save-data", save_data, save_data_success)
    registry.register("find-info", find_info, find_info_success)
    registry.register("query-data", query_data, query_data_success)
    registry.register("query-data-basic", query_data_basic, query_data_success)
    registry.register("query-data-optimized", query_data_optimized, query_data_success)
    registry.register("extract-data", extract_data, extract_data_success)
    registry.register("create-data", create_data, table_at_2)
    registry.register("delete-data", delete_data, delete_data_success)
    registry.register("modify-data", modify_data, set_column_success)
    registry.register("add-value", add_value, set_column_success)
    registry.register("modify-row", modify_row, modify_row_success)
    registry.register("merge-data", merge_data, table_at_3)
    registry.register("match-items", match_items, match_items_success)
