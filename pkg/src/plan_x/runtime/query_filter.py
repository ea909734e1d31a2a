"""Filter expressions over tables, written in dataframe subscript syntax.

Supported forms::

    df['balance']                                   column projection
    df[['year', 'balance']]                         multi-column projection
    df[(df['trade-id'] == 'TR123')]                 row selection
    df[(df['hour'] >= 8) & (df['hour'] <= 11)]      combined with & | ~
    df[df['isrecurring'] == True]['subject']        subscripts chain left to right

Expressions are parsed into a small tree and evaluated with pandas; nothing is
handed to the host interpreter.
"""

from __future__ import annotations

import operator
from functools import lru_cache
from typing import Any, Callable, Dict, List, Sequence, Tuple

import pandas as pd
import pyparsing as pp


class QueryError(ValueError):
    pass


_COMPARATORS: Dict[str, Callable[[Any, Any], Any]] = {
    "==": operator.eq,
    "!=": operator.ne,
    ">=": operator.ge,
    "<=": operator.le,
    ">": operator.gt,
    "<": operator.lt,
}


def _column(table: pd.DataFrame, name: str) -> pd.Series:
    if name not in table.columns:
        raise QueryError(f"unknown column '{name}'")
    return table[name]


class EvalComparison:
    def __init__(self, tokens: pp.ParseResults) -> None:
        self.column, self.op, self.value = tokens[0], tokens[1], tokens[2]

    def mask(self, table: pd.DataFrame) -> pd.Series:
        series = _column(table, self.column)
        try:
            return _COMPARATORS[self.op](series, self.value).astype(bool)
        except TypeError as exc:
            raise QueryError(
                f"cannot compare column '{self.column}' with {self.value!r}"
            ) from exc

    def __repr__(self) -> str:
        return f"df[{self.column!r}] {self.op} {self.value!r}"


class EvalNot:
    def __init__(self, tokens: pp.ParseResults) -> None:
        self.operand = tokens[0][1]

    def mask(self, table: pd.DataFrame) -> pd.Series:
        return ~self.operand.mask(table)


class EvalLogic:
    def __init__(self, tokens: pp.ParseResults) -> None:
        items = tokens[0]
        self.op = items[1]
        self.operands = list(items[0::2])

    def mask(self, table: pd.DataFrame) -> pd.Series:
        result = self.operands[0].mask(table)
        for operand in self.operands[1:]:
            if self.op == "&":
                result = result & operand.mask(table)
            else:
                result = result | operand.mask(table)
        return result


class EvalSelect:
    def __init__(self, tokens: pp.ParseResults) -> None:
        self.condition = tokens[0]

    def apply(self, table: pd.DataFrame) -> pd.DataFrame:
        return table[self.condition.mask(table)].reset_index(drop=True)


class EvalProject:
    def __init__(self, tokens: pp.ParseResults) -> None:
        first = tokens[0]
        self.columns: Tuple[str, ...] = (
            (first,) if isinstance(first, str) else tuple(first)
        )

    def apply(self, table: pd.DataFrame) -> pd.DataFrame:
        for name in self.columns:
            _column(table, name)
        return table.loc[:, list(self.columns)].reset_index(drop=True)


def _build_grammar() -> pp.ParserElement:
    quoted = pp.QuotedString("'", esc_char="\\") | pp.QuotedString('"', esc_char="\\")
    boolean = pp.Keyword("True").set_parse_action(lambda: True) | pp.Keyword(
        "False"
    ).set_parse_action(lambda: False)
    literal = quoted | boolean | pp.pyparsing_common.number
    frame = pp.Keyword("df")
    column_ref = pp.Suppress(frame + "[") + quoted + pp.Suppress("]")
    comparison = (column_ref + pp.one_of(list(_COMPARATORS)) + literal).set_parse_action(
        EvalComparison
    )
    condition = pp.infix_notation(
        comparison,
        [
            ("~", 1, pp.OpAssoc.RIGHT, EvalNot),
            ("&", 2, pp.OpAssoc.LEFT, EvalLogic),
            ("|", 2, pp.OpAssoc.LEFT, EvalLogic),
        ],
    )
    selection = condition.copy().add_parse_action(EvalSelect)
    column_list = pp.Group(
        pp.Suppress("[") + pp.delimited_list(quoted) + pp.Suppress("]")
    )
    projection = (quoted | column_list).set_parse_action(EvalProject)
    subscript = pp.Suppress("[") + (selection | projection) + pp.Suppress("]")
    return pp.Suppress(frame) + pp.OneOrMore(subscript) + pp.StringEnd()


_GRAMMAR = _build_grammar()


@lru_cache(maxsize=256)
def parse_query(text: str) -> Tuple[Any, ...]:
    """Parse ``text`` into subscript steps; raises ``QueryError``."""
    try:
        return tuple(_GRAMMAR.parse_string(text.strip(), parse_all=True))
    except pp.ParseBaseException as exc:
        raise QueryError(f"malformed query at column {exc.col}: {text!r}") from exc


def run_query(text: str, table: pd.DataFrame) -> pd.DataFrame:
    result = table
    for step in parse_query(text):
        result = step.apply(result)
    return result


def query_mask(text: str, table: pd.DataFrame) -> pd.Series:
    """Rows of ``table`` the query's selections keep; projections are ignored."""
    mask = pd.Series(True, index=table.index)
    for step in parse_query(text):
        if isinstance(step, EvalSelect):
            mask &= step.condition.mask(table)
    return mask


def query_columns(text: str) -> List[str]:
    """Columns a pure projection query selects, or [] for selections."""
    steps: Sequence[Any] = parse_query(text)
    if steps and isinstance(steps[-1], EvalProject):
        return list(steps[-1].columns)
    return []
