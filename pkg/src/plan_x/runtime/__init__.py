from plan_x.runtime.execute import (
    STATUS_ABORTED,
    STATUS_FAILED,
    STATUS_SUCCESS,
    ExecutionReport,
    ReplanRecord,
    StepRecord,
    apply_action,
    check_success,
    execute_plan,
)
from plan_x.runtime.registry import ActionContext, ExecutorRegistry, Services, default_registry
from plan_x.runtime.replan import DEFAULT_REPLAN_BUDGET, ReplanPolicy, ReplanResult, replan
from plan_x.runtime.response import FALLBACK_RESPONSE, build_response, unsolvable_response
from plan_x.runtime.state import NEW_GOALS, ExecutionState, copy_state, seed_state
from plan_x.runtime.world import OfficeWorld, WorldError

__all__ = [
    "DEFAULT_REPLAN_BUDGET",
    "FALLBACK_RESPONSE",
    "NEW_GOALS",
    "STATUS_ABORTED",
    "STATUS_FAILED",
    "STATUS_SUCCESS",
    "ActionContext",
    "ExecutionReport",
    "ExecutionState",
    "ExecutorRegistry",
    "OfficeWorld",
    "ReplanPolicy",
    "ReplanRecord",
    "ReplanResult",
    "Services",
    "StepRecord",
    "WorldError",
    "apply_action",
    "build_response",
    "check_success",
    "copy_state",
    "default_registry",
    "execute_plan",
    "replan",
    "seed_state",
    "unsolvable_response",
]
