from plan_x.pddl.model import (
    ActionSchema,
    Atom,
    Domain,
    FluentTerm,
    Literal,
    NumericAssignment,
    Predicate,
    Problem,
    TypedName,
)
from plan_x.pddl.reader import parse_domain, parse_problem, parse_state
from plan_x.pddl.writer import render_predicate, render_problem, render_steps

__all__ = [
    "ActionSchema",
    "Atom",
    "Domain",
    "FluentTerm",
    "Literal",
    "NumericAssignment",
    "Predicate",
    "Problem",
    "TypedName",
    "parse_domain",
    "parse_problem",
    "parse_state",
    "render_predicate",
    "render_problem",
    "render_steps",
]
