from __future__ import annotations

from typing import Iterable, List

from plan_x.pddl.model import Predicate, Problem


def render_predicate(predicate: Predicate) -> str:
    if not predicate.params:
        return f"({predicate.name})"
    params = " ".join(f"{p.name} - {p.type}" for p in predicate.params)
    return f"({predicate.name} {params})"


def render_problem(problem: Problem) -> str:
    lines: List[str] = [
        f"(define (problem {problem.name})",
        f"  (:domain {problem.domain_name})",
    ]
    if problem.objects:
        lines.append("  (:objects")
        for obj in problem.objects:
            lines.append(f"    {obj.name} - {obj.type}")
        lines.append("  )")
    else:
        lines.append("  (:objects)")

    init_lines = [str(atom) for atom in problem.init]
    init_lines.extend(str(assignment) for assignment in problem.numeric_init)
    if init_lines:
        lines.append("  (:init")
        lines.extend(f"    {item}" for item in init_lines)
        lines.append("  )")
    else:
        lines.append("  (:init)")

    if problem.goal:
        lines.append("  (:goal (and")
        lines.extend(f"    {literal}" for literal in problem.goal)
        lines.append("  ))")
    else:
        lines.append("  (:goal (and))")

    if problem.metric:
        lines.append("  (:metric minimize (total-cost)))")
    else:
        lines[-1] = lines[-1] + ")"
    return "\n".join(lines) + "\n"


def render_steps(steps: Iterable[str], total_cost: int) -> str:
    """Plan file text: one ``(name args)`` per line and a cost footer."""
    lines = list(steps)
    lines.append(f"; cost = {total_cost}")
    return "\n".join(lines) + "\n"
