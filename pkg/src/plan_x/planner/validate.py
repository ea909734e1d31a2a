from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import pyparsing as pp

from plan_x.errors import Diagnostic, PddlError
from plan_x.planner.grounding import GroundedAction, GroundedTask
from plan_x.planner.search import Plan


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    cost: int
    # 1-based; None when every step applied.
    failed_step: Optional[int] = None
    message: str = ""
    state: Tuple[str, ...] = ()
    unmet: Tuple[str, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "cost": self.cost,
            "failed_step": self.failed_step,
            "message": self.message,
            "state": list(self.state),
            "unmet": list(self.unmet),
        }


def validate_plan(
    task: GroundedTask, plan: Union[Plan, Sequence[GroundedAction]]
) -> ValidationReport:
    """Replay ``plan`` from the initial state and check the goal at the end."""
    steps = plan.steps if isinstance(plan, Plan) else tuple(plan)
    state = task.init_atoms()
    cost = 0
    for position, action in enumerate(steps, start=1):
        unmet = action.unmet(state)
        if unmet:
            rendered = tuple(str(literal) for literal in unmet)
            logger.info("validate-plan: step %d failed %s", position, action)
            return ValidationReport(
                valid=False,
                cost=cost,
                failed_step=position,
                message=f"step {position} {action}: precondition {' '.join(rendered)} unmet",
                state=_render(state),
                unmet=rendered,
            )
        state = action.apply(state)
        cost += action.cost

    missing = tuple(str(literal) for literal in task.unmet_goals(state))
    if missing:
        logger.info("validate-plan: goal unmet %s", " ".join(missing))
        return ValidationReport(
            valid=False,
            cost=cost,
            message=f"goal not satisfied: {' '.join(missing)}",
            state=_render(state),
            unmet=missing,
        )
    logger.info("validate-plan: ok steps=%d cost=%d", len(steps), cost)
    return ValidationReport(valid=True, cost=cost, message="ok", state=_render(state))


def _render(state: Iterable) -> Tuple[str, ...]:
    return tuple(sorted(str(atom) for atom in state))


def _build_plan_grammar() -> pp.ParserElement:
    name = pp.Regex(r"[A-Za-z][A-Za-z0-9_-]*")
    lisp = pp.Suppress("(") + pp.Group(name + pp.Group(pp.ZeroOrMore(name))) + pp.Suppress(")")
    call = pp.Group(
        name
        + pp.Suppress("(")
        + pp.Group(pp.Optional(pp.delimited_list(name)))
        + pp.Suppress(")")
    )
    label = pp.Suppress(pp.Regex(r"[0-9]+(\.[0-9]+)?:"))
    duration = pp.Suppress(pp.Regex(r"\[[^\]]*\]"))
    step = pp.Optional(label) + (lisp | call).set_parse_action(_tag_location) + pp.Optional(duration)
    document = pp.ZeroOrMore(step) + pp.StringEnd()
    document.ignore(pp.Regex(r";[^\n]*"))
    return document


def _tag_location(s: str, loc: int, toks: pp.ParseResults) -> Tuple[int, str, List[str]]:
    group = toks[0]
    return (loc, group[0].lower(), [arg.lower() for arg in group[1]])


_PLAN_GRAMMAR = _build_plan_grammar()


def parse_plan(text: str, task: GroundedTask, source: str = "<plan>") -> List[GroundedAction]:
    """Read a plan file into grounded steps.

    Accepts ``(name a b)`` and ``name(a, b)`` steps, optional ``N:`` labels,
    ``[duration]`` suffixes and ``;`` comments, including the cost footer.
    """
    try:
        parsed = _PLAN_GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseBaseException as exc:
        raise PddlError(
            [Diagnostic(exc.lineno, exc.col, f"unreadable plan step near '{exc.line.strip()}'")],
            source,
        ) from exc

    steps: List[GroundedAction] = []
    diagnostics: List[Diagnostic] = []
    for loc, name, args in parsed:
        try:
            steps.append(task.instantiate(name, args))
        except ValueError as exc:
            diagnostics.append(Diagnostic(pp.lineno(loc, text), pp.col(loc, text), str(exc)))
    if diagnostics:
        raise PddlError(diagnostics, source)
    logger.info("parse-plan: ok steps=%d", len(steps))
    return steps
