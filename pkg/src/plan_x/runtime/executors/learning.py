from __future__ import annotations

from plan_x.errors import ExecutionError
from plan_x.runtime.registry import ActionContext, ExecutorRegistry
from plan_x.runtime.tree import DecisionTreeClassifier
from plan_x.runtime.world import WorldError


SUPPORTED_ALGORITHMS = ("DecisionTreeClassifier",)


def _model_name(ctx: ActionContext, position: int) -> str:
    value = ctx.value(position)
    return value if isinstance(value, str) and value.strip() else ctx.name(position)


def learn_supervised(ctx: ActionContext) -> None:
    algorithm = ctx.text(2).strip()
    if algorithm not in SUPPORTED_ALGORITHMS:
        raise ExecutionError(f"unsupported algorithm {algorithm!r}")
    target = ctx.text(3)
    try:
        model = DecisionTreeClassifier(max_depth=ctx.services.tree_max_depth).fit(ctx.table(1), target)
    except ValueError as exc:
        raise ExecutionError(f"cannot train on '{ctx.name(1)}': {exc}") from exc
    name = _model_name(ctx, 4)
    ctx.world.save_model(name, model.to_json())
    ctx.put(4, name, trained_on=target, algorithm=algorithm, depth=model.depth())


def learn_supervised_success(ctx: ActionContext) -> bool:
    name = _model_name(ctx, 4)
    return name in ctx.world.models and ctx.world.models[name].get("target") == ctx.text(3)


def predict_using_learned_model(ctx: ActionContext) -> None:
    try:
        dump = ctx.world.model(_model_name(ctx, 3))
    except WorldError as exc:
        raise ExecutionError(str(exc)) from exc
    model = DecisionTreeClassifier.from_json(dump)
    target = ctx.text(2)
    if model.target != target:
        raise ExecutionError(f"model {_model_name(ctx, 3)!r} predicts {model.target!r}, not {target!r}")
    table = ctx.table(1).copy()
    try:
        table[target] = model.predict(table)
    except ValueError as exc:
        raise ExecutionError(str(exc)) from exc
    ctx.put(4, table, type="dataframe", columns=[str(c) for c in table.columns], predicted=target)


def predict_success(ctx: ActionContext) -> bool:
    value = ctx.value(4)
    return (
        ctx.record(4).get("predicted") == ctx.text(2)
        and len(value) == len(ctx.table(1))
        and ctx.text(2) in value.columns
    )


def register(registry: ExecutorRegistry) -> None:
    registry.register("learn-supervised", learn_supervised, learn_supervised_success)
    registry.register("predict-using-learned-model", predict_using_learned_model, predict_success)
