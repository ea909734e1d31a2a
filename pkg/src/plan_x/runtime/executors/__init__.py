from plan_x.runtime.executors import calendar, data, learning, llm_ops, messaging, presentation
from plan_x.runtime.registry import ExecutorRegistry

_MODULES = (data, presentation, calendar, learning, messaging, llm_ops)


def register_all(registry: ExecutorRegistry) -> None:
    for module in _MODULES:
        module.register(registry)


__all__ = ["register_all"]
