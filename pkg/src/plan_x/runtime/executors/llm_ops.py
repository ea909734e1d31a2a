"""Text operations answered by the completion backend or the web fixtures."""

from __future__ import annotations

from plan_x.errors import BackendError, ExecutionError
from plan_x.prompt.backends import complete
from plan_x.prompt.builder import REQUEST_MARKER
from plan_x.runtime.registry import ActionContext, ExecutorRegistry
from plan_x.runtime.world import WorldError


TEXT_PREAMBLE = "You are an office assistant. Reply with plain text only, no JSON."


def ask_backend(ctx: ActionContext, request: str) -> str:
    backend = ctx.services.backend
    if backend is None:
        raise ExecutionError("no completion backend configured for text operations")
    try:
        reply = complete(f"{TEXT_PREAMBLE}\n{REQUEST_MARKER}{request}", backend)
    except BackendError as exc:
        raise ExecutionError(exc.detail) from exc
    return reply.strip()


def _web(ctx: ActionContext, query: str) -> str:
    try:
        return ctx.world.web_result(query)
    except WorldError as exc:
        raise ExecutionError(str(exc)) from exc


def _filled(position: int):
    def check(ctx: ActionContext) -> bool:
        value = ctx.value(position)
        return isinstance(value, str) and bool(value.strip()) and ctx.record(position).get("by") == ctx.action.name

    return check


def explain(ctx: ActionContext) -> None:
    ctx.put(2, ask_backend(ctx, f"Explain the following text: {ctx.text(1)}"), by="explain")


def translate(ctx: ActionContext) -> None:
    language = ctx.text(2)
    ctx.put(3, ask_backend(ctx, f"Translate into {language}: {ctx.text(1)}"), by="translate", language=language)


def summarize(ctx: ActionContext) -> None:
    ctx.put(2, ask_backend(ctx, f"Summarize the following text: {ctx.text(1)}"), by="summarize")


def ask_llm(ctx: ActionContext) -> None:
    ctx.put(2, ask_backend(ctx, ctx.text(1)), by="ask-llm")


def search_web(ctx: ActionContext) -> None:
    ctx.put(2, _web(ctx, ctx.text(1)), by="search-web")


def deep_research(ctx: ActionContext) -> None:
    question = ctx.text(1)
    sources = _web(ctx, question)
    answer = ask_backend(ctx, f"Research in depth: {question}\nSources: {sources}")
    ctx.put(2, answer, by="deep-research", sources=sources)


def merge_answer(ctx: ActionContext) -> None:
    merged = f"{ctx.text(1).strip()}\n\n{ctx.text(3).strip()}".strip()
    ctx.put(1, ctx.value(1), merged=merged, question=ctx.name(2))


def merge_answer_success(ctx: ActionContext) -> bool:
    return bool(ctx.record(1).get("merged"))


def register(registry: ExecutorRegistry) -> None:
    registry.register("explain", explain, _filled(2))
    registry.register("translate", translate, _filled(3))
    registry.register("summarize", summarize, _filled(2))
    registry.register("ask-llm", ask_llm, _filled(2))
    registry.register("search-web", search_web, _filled(2))
    registry.register("deep-research", deep_research, _filled(2))
    registry.register("merge-answer", merge_answer, merge_answer_success)
