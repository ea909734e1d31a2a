from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Union

import pyparsing as pp

from plan_x.errors import Diagnostic, PddlError


@dataclass
class SExpr:
    """One node of a parsed s-expression with its source offset."""

    value: Union[str, List["SExpr"]]
    loc: int

    @property
    def is_atom(self) -> bool:
        return isinstance(self.value, str)

    @property
    def items(self) -> List["SExpr"]:
        if isinstance(self.value, str):
            raise TypeError("atom has no items")
        return self.value

    @property
    def head(self) -> Optional[str]:
        if self.is_atom or not self.items or not self.items[0].is_atom:
            return None
        return self.items[0].value  # type: ignore[return-value]

    def __str__(self) -> str:
        if isinstance(self.value, str):
            return self.value
        return "(" + " ".join(str(item) for item in self.value) + ")"


def _atom_action(s: str, loc: int, toks: pp.ParseResults) -> SExpr:
    return SExpr(toks[0].lower(), loc)


def _list_action(s: str, loc: int, toks: pp.ParseResults) -> SExpr:
    return SExpr(list(toks), loc)


def _build_grammar() -> pp.ParserElement:
    atom = pp.Regex(r"[^()\s;]+").set_parse_action(_atom_action)
    expr = pp.Forward()
    group = (pp.Suppress("(") + pp.ZeroOrMore(expr) + pp.Suppress(")")).set_parse_action(
        _list_action
    )
    expr <<= atom | group
    document = pp.ZeroOrMore(expr) + pp.StringEnd()
    document.ignore(pp.Regex(r";[^\n]*"))
    return document


_GRAMMAR = _build_grammar()


class SourceText:
    """Parsed document plus the helpers needed to report positions."""

    def __init__(self, text: str, source: str = "<string>") -> None:
        self.text = text
        self.source = source
        try:
            parsed = _GRAMMAR.parse_string(text, parse_all=True)
        except pp.ParseBaseException as exc:
            raise PddlError(
                [Diagnostic(exc.lineno, exc.col, _describe_parse_error(text, exc))],
                source,
            ) from exc
        self.exprs: List[SExpr] = list(parsed)

    def position(self, node: SExpr) -> tuple[int, int]:
        return pp.lineno(node.loc, self.text), pp.col(node.loc, self.text)

    def diagnostic(self, node: SExpr, message: str) -> Diagnostic:
        line, column = self.position(node)
        return Diagnostic(line, column, message)


def _describe_parse_error(text: str, exc: pp.ParseBaseException) -> str:
    depth = 0
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
    if depth > 0:
        return f"unbalanced parentheses ({depth} unclosed)"
    if depth < 0:
        return "unbalanced parentheses (unexpected ')')"
    return f"syntax error: {exc.msg}"
