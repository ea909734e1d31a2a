from plan_x.planner.grounding import GroundedAction, GroundedTask, ground
from plan_x.planner.oracle import brute_force_plan
from plan_x.planner.search import DEFAULT_NODE_LIMIT, HEURISTICS, Plan, plan, relevance_view
from plan_x.planner.validate import ValidationReport, parse_plan, validate_plan

__all__ = [
    "DEFAULT_NODE_LIMIT",
    "HEURISTICS",
    "GroundedAction",
    "GroundedTask",
    "Plan",
    "ValidationReport",
    "brute_force_plan",
    "ground",
    "parse_plan",
    "plan",
    "relevance_view",
    "validate_plan",
]
