from __future__ import annotations

import logging
from typing import Dict, List, Optional

from plan_x.errors import CompileError
from plan_x.intent.task_dict import TaskDictionary
from plan_x.pddl.model import (
    TOTAL_COST,
    Atom,
    Domain,
    FluentTerm,
    NumericAssignment,
    Problem,
    TypedName,
)


logger = logging.getLogger(__name__)

AGENT_OBJECT = "ai"


def _agent_type(domain: Domain) -> Optional[str]:
    """Most specific agent type required by any action's first parameter."""
    for schema in domain.actions:
        for param in schema.params:
            if domain.is_subtype(param.type, "agent"):
                return param.type
    return None


def compile_problem(task: TaskDictionary, domain: Domain, name: str = "task") -> Problem:
    objects: List[TypedName] = []
    seen: Dict[str, str] = {}
    for key, record in task.entities.items():
        if key in seen:
            raise CompileError(f"duplicate object '{key}'")
        seen[key] = record.type
        objects.append(TypedName(key, record.type))

    agent_type = _agent_type(domain)
    if agent_type is not None:
        has_agent = any(domain.is_subtype(t, agent_type) for t in seen.values())
        if not has_agent:
            if AGENT_OBJECT in seen:
                raise CompileError(f"duplicate object '{AGENT_OBJECT}'")
            objects.append(TypedName(AGENT_OBJECT, agent_type))
            seen[AGENT_OBJECT] = agent_type

    for literal in list(task.init) + list(task.goals):
        for arg in literal.atom.args:
            if arg not in seen and arg not in domain.constant_types():
                raise CompileError(f"literal {literal} references unknown object '{arg}'")

    numeric: List[NumericAssignment] = list(task.numeric_init)
    metric = domain.has_costs()
    total = FluentTerm(TOTAL_COST)
    if metric and not any(a.term == total for a in numeric):
        numeric.append(NumericAssignment(total, 0))

    init: List[Atom] = [literal.atom for literal in task.init if literal.positive]
    problem = Problem(
        name=name,
        domain_name=domain.name,
        objects=tuple(objects),
        init=tuple(init),
        numeric_init=tuple(numeric),
        goal=tuple(task.goals),
        metric=metric,
    )
    logger.info(
        "compile: ok objects=%d init=%d goals=%d",
        len(problem.objects),
        len(problem.init) + len(problem.numeric_init),
        len(problem.goal),
    )
    return problem
