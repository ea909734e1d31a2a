from __future__ import annotations

from dataclasses import dataclass
from typing import Any, List, Sequence


EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_UNSOLVABLE = 3
EXIT_ABORTED = 4
EXIT_BACKEND = 5


class PlanXError(RuntimeError):
    """Base error; every message names exactly one pipeline stage."""

    def __init__(self, stage: str, message: str, exit_code: int = EXIT_VALIDATION) -> None:
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.detail = message
        self.exit_code = exit_code


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    message: str

    def render(self, source: str = "<string>") -> str:
        return f"{source}:{self.line}:{self.col}: {self.message}"


class PddlError(PlanXError):
    def __init__(self, diagnostics: Sequence[Diagnostic], source: str = "<string>") -> None:
        self.diagnostics: List[Diagnostic] = list(diagnostics)
        self.source = source
        rendered = "; ".join(d.render(source) for d in self.diagnostics)
        super().__init__("pddl", rendered or "invalid PDDL")


class TaskValidationError(PlanXError):
    def __init__(self, violations: Sequence[str]) -> None:
        self.violations: List[str] = list(violations)
        super().__init__("validate", "; ".join(self.violations))


class BackendError(PlanXError):
    def __init__(self, message: str) -> None:
        super().__init__("complete", message, EXIT_BACKEND)


class OutputParseError(PlanXError):
    def __init__(self, message: str) -> None:
        super().__init__("parse", message)


class MergeError(PlanXError):
    def __init__(self, message: str) -> None:
        super().__init__("merge", message)


class CompileError(PlanXError):
    def __init__(self, message: str) -> None:
        super().__init__("compile", message)


class PlanningError(PlanXError):
    def __init__(
        self,
        message: str,
        unmet: Sequence[str] = (),
        limit_exceeded: bool = False,
    ) -> None:
        self.unmet: List[str] = list(unmet)
        self.limit_exceeded = limit_exceeded
        super().__init__("plan", message, EXIT_UNSOLVABLE)


class ExecutionError(PlanXError):
    def __init__(self, message: str) -> None:
        super().__init__("execute", message, EXIT_ABORTED)


class ExecutionAborted(PlanXError):
    def __init__(self, message: str, report: Any = None) -> None:
        self.report = report
        super().__init__("execute", message, EXIT_ABORTED)
