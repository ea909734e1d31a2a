from __future__ import annotations

import random
from collections import Counter
from dataclasses import replace
from typing import Dict, List, Optional

import pytest

from conftest import (
    BARCHART_REQUEST,
    LEARNING_REQUEST,
    TRADE_REQUEST,
    TWO_DATABASES_REQUEST,
    UNSOLVABLE_REQUEST,
    compiled,
)
from plan_x.errors import PddlError, PlanningError
from plan_x.pddl import Atom, FluentTerm, Literal, NumericAssignment, Problem, TypedName
from plan_x.pddl.model import Domain
from plan_x.planner import brute_force_plan, ground, parse_plan, plan, validate_plan


TRADE_PLAN = """(read-data ai dataframe1 data-file1)
(query-data ai query1 dataframe1 filtered-dataframe)
(create-response ai chat-response)
(add-to-response ai filtered-dataframe chat-response)
(send-response ai chat-response)
"""

RANDOM_TYPES = [
    "dataframe",
    "dataframe",
    "csv-file",
    "database",
    "query",
    "text",
    "response",
    "bar-chart",
    "presentation",
    "slide",
    "title",
    "column",
]
RANDOM_PREDICATES = [
    "in",
    "available",
    "query-result",
    "reference",
    "database-query-basic",
    "database-query-optimized",
    "database-backed",
]
MAX_OBJECTS = 8
MAX_GOALS = 6
# Keeps the exhaustive enumeration cheap enough for two hundred tasks.
MAX_GROUND_ACTIONS = 16


def test_trade_plan_is_optimal(domain: Domain) -> None:
    _, _, task = compiled(TRADE_REQUEST, domain)

    found = plan(task)

    assert found.total_cost == 5
    assert Counter(step.name for step in found.steps) == Counter(
        ["read-data", "query-data", "create-response", "add-to-response", "send-response"]
    )
    assert brute_force_plan(task, 10).total_cost == 5
    assert validate_plan(task, found).valid


def test_blind_search_agrees_on_cost(domain: Domain) -> None:
    _, _, task = compiled(TRADE_REQUEST, domain)

    assert plan(task, heuristic="blind").total_cost == plan(task).total_cost


def test_unknown_heuristic(domain: Domain) -> None:
    _, _, task = compiled(TRADE_REQUEST, domain)

    with pytest.raises(ValueError, match="unknown heuristic 'greedy'"):
        plan(task, heuristic="greedy")


def test_handwritten_trade_plan_validates(domain: Domain) -> None:
    _, _, task = compiled(TRADE_REQUEST, domain)

    report = validate_plan(task, parse_plan(TRADE_PLAN, task))

    assert report.valid
    assert report.cost == 5
    assert report.failed_step is None


def test_missing_first_step_fails_at_step_one(domain: Domain) -> None:
    _, _, task = compiled(TRADE_REQUEST, domain)
    steps = parse_plan(TRADE_PLAN, task)[1:]

    report = validate_plan(task, steps)

    assert not report.valid
    assert report.failed_step == 1
    assert report.message == (
        "step 1 (query-data ai query1 dataframe1 filtered-dataframe): "
        "precondition (available dataframe1) unmet"
    )


def test_truncated_plan_misses_the_goal(domain: Domain) -> None:
    _, _, task = compiled(TRADE_REQUEST, domain)
    steps = parse_plan(TRADE_PLAN, task)[:-1]

    report = validate_plan(task, steps)

    assert not report.valid
    assert report.failed_step is None
    assert report.message == "goal not satisfied: (sent chat-response)"
    assert report.cost == 4


def test_plan_file_formats(domain: Domain) -> None:
    _, _, task = compiled(TRADE_REQUEST, domain)
    text = (
        "; produced elsewhere\n"
        "0: (READ-DATA ai dataframe1 data-file1) [1]\n"
        "1.0: query-data(ai, query1, dataframe1, filtered-dataframe)\n"
        "create-response(ai, chat-response)\n"
        "; cost = 3\n"
    )

    steps = parse_plan(text, task)

    assert [str(step) for step in steps] == [
        "(read-data ai dataframe1 data-file1)",
        "(query-data ai query1 dataframe1 filtered-dataframe)",
        "(create-response ai chat-response)",
    ]


def test_plan_file_with_unknown_action(domain: Domain) -> None:
    _, _, task = compiled(TRADE_REQUEST, domain)

    with pytest.raises(PddlError, match="unknown action 'teleport'") as excinfo:
        parse_plan("(read-data ai dataframe1 data-file1)\n(teleport ai)\n", task, "p.plan")

    assert excinfo.value.diagnostics[0].line == 2


def test_plan_file_with_garbage(domain: Domain) -> None:
    _, _, task = compiled(TRADE_REQUEST, domain)

    with pytest.raises(PddlError, match="unreadable plan step"):
        parse_plan("(read-data ai dataframe1\n", task)


def test_bar_chart_plan_uses_basic_queries(domain: Domain) -> None:
    _, _, task = compiled(BARCHART_REQUEST, domain)

    found = plan(task)

    names = [step.name for step in found.steps]
    assert len(found) == 9
    assert found.total_cost == 17
    assert names.count("query-data-basic") == 2
    assert "add-to-slide" in names
    assert "add-to-slide-basic" not in names
    assert names.index("generate-presentation") > names.index("add-to-slide")


def test_cheaper_queries_outweigh_cheaper_reads(domain: Domain) -> None:
    _, _, task = compiled(TWO_DATABASES_REQUEST, domain)

    found = plan(task)

    names = [step.name for step in found.steps]
    assert found.total_cost == 12
    assert names.count("query-data-optimized") == 2
    assert "query-data-basic" not in names
    reads = [step for step in found.steps if step.name == "read-data"]
    assert [step.args for step in reads] == [("ai", "dataframe1", "database2")]
    assert brute_force_plan(task, found.total_cost).total_cost == found.total_cost

    db1_only = plan(task.without({("read-data", ("ai", "dataframe1", "database2"))}))
    assert db1_only.total_cost == 17
    assert found.total_cost < db1_only.total_cost

    _, _, again = compiled(TWO_DATABASES_REQUEST, domain)
    assert plan(again).steps == found.steps
    assert plan(task).steps == found.steps


def test_learning_plan(domain: Domain) -> None:
    _, _, task = compiled(LEARNING_REQUEST, domain)

    found = plan(task)

    assert found.total_cost == 4
    assert Counter(step.name for step in found.steps) == Counter(
        ["read-data", "read-data", "learn-supervised", "predict-using-learned-model"]
    )


def test_unreachable_goal_names_the_literal(domain: Domain) -> None:
    _, _, task = compiled(UNSOLVABLE_REQUEST, domain)

    with pytest.raises(PlanningError, match="goal unreachable from init") as excinfo:
        plan(task)

    assert excinfo.value.unmet == ["(replied-email email1)"]
    assert excinfo.value.exit_code == 3
    with pytest.raises(PlanningError, match="search space exhausted"):
        brute_force_plan(task, sum(action.cost for action in task.actions))


def test_removed_action_makes_the_trade_unsolvable(domain: Domain) -> None:
    _, _, task = compiled(TRADE_REQUEST, domain)
    key = ("read-data", ("ai", "dataframe1", "data-file1"))
    assert task.find(*key) is not None

    pruned = task.without({key})

    assert pruned.find(*key) is None
    with pytest.raises(PlanningError):
        plan(pruned)
    with pytest.raises(PlanningError, match="search space exhausted"):
        brute_force_plan(pruned, sum(action.cost for action in pruned.actions))


def test_node_limit(domain: Domain) -> None:
    _, _, task = compiled(BARCHART_REQUEST, domain)

    with pytest.raises(PlanningError, match="node limit 1 exceeded") as excinfo:
        plan(task, node_limit=1)

    assert excinfo.value.limit_exceeded


def test_unassigned_cost_fluent_defaults_to_one(domain: Domain) -> None:
    _, problem, task = compiled(TRADE_REQUEST, domain)

    assert problem.fluent_value(FluentTerm("database-cost", ("data-file1",))) is None
    read = task.actions[task.find("read-data", ("ai", "dataframe1", "data-file1"))]
    assert read.cost == 1


def _random_problem(rng: random.Random, domain: Domain) -> Problem:
    objects = [TypedName("ai", "ai-agent")]
    count = rng.randint(1, MAX_OBJECTS - 1)
    objects += [TypedName(f"o{i}", rng.choice(RANDOM_TYPES)) for i in range(count)]
    types: Dict[str, str] = {o.name: o.type for o in objects}

    init: List[Atom] = []
    for _ in range(rng.randint(1, 6)):
        predicate = domain.predicates[rng.choice(RANDOM_PREDICATES)]
        args: List[str] = []
        for param in predicate.params:
            pool = [name for name, t in types.items() if domain.is_subtype(t, param.type)]
            if not pool:
                break
            args.append(rng.choice(pool))
        else:
            atom = Atom(predicate.name, tuple(args))
            if atom not in init:
                init.append(atom)

    numeric = [
        NumericAssignment(FluentTerm("database-cost", (name,)), rng.randint(1, 3))
        for name, t in types.items()
        if domain.is_subtype(t, "data-file")
    ]
    numeric.append(NumericAssignment(FluentTerm("total-cost"), 0))
    return Problem("random", domain.name, tuple(objects), tuple(init), tuple(numeric), (), True)


def _with_random_goals(rng: random.Random, domain: Domain, problem: Problem) -> Optional[Problem]:
    reachable = ground(domain, problem)
    candidates = sorted(
        {atom for action in reachable.actions for atom in action.add_effects} - set(problem.init),
        key=str,
    )
    if not candidates:
        return None
    goals = [
        Literal(atom)
        for atom in rng.sample(candidates, min(len(candidates), rng.randint(1, MAX_GOALS)))
    ]
    if problem.init and rng.random() < 0.15:
        # Nothing deletes, so a negated init atom can never hold.
        goals[-1] = Literal(rng.choice(problem.init), positive=False)
    elif len(candidates) > len(goals) and rng.random() < 0.15:
        goals[-1] = Literal(rng.choice(candidates), positive=False)
    return replace(problem, goal=tuple(goals))


def test_search_matches_exhaustive_enumeration_on_random_tasks(domain: Domain) -> None:
    rng = random.Random(20240716)
    compared = unsolvable = 0
    for _ in range(20000):
        if compared == 200:
            break
        problem = _with_random_goals(rng, domain, _random_problem(rng, domain))
        if problem is None:
            continue
        task = ground(domain, problem)
        if len(task.actions) > MAX_GROUND_ACTIONS:
            continue
        bound = sum(action.cost for action in task.actions)
        try:
            found = plan(task)
        except PlanningError as exc:
            assert not exc.limit_exceeded, str(problem)
            with pytest.raises(PlanningError) as oracle_error:
                brute_force_plan(task, bound)
            assert not oracle_error.value.limit_exceeded, str(problem)
            unsolvable += 1
        else:
            reference = brute_force_plan(task, bound)
            assert reference.total_cost == found.total_cost, str(problem)
            report = validate_plan(task, found)
            assert report.valid and report.cost == found.total_cost
        compared += 1

    assert compared == 200
    assert unsolvable > 0
