from __future__ import annotations

import copy
import logging

import pytest

from conftest import BARCHART_REQUEST, TRADE_REQUEST, scripted_task
from plan_x.config import asset_path
from plan_x.errors import MergeError, PlanXError, TaskValidationError
from plan_x.intent.catalog import build_catalog, example_task, load_catalog
from plan_x.intent.task_dict import merge_task_dictionaries, validate_task_dictionary
from plan_x.pddl.model import Atom, Domain, Literal
from plan_x.pddl.reader import parse_domain


def test_trade_dictionary_validates(domain: Domain) -> None:
    task = validate_task_dictionary(scripted_task(TRADE_REQUEST), domain)

    assert len(task.entities) == 5
    assert len(task.init) == 3
    assert len(task.goals) == 3
    assert task.entities["query1"].value == 'df[(df["trade-id"] == "TR123")]'


def test_empty_task_is_valid(domain: Domain) -> None:
    raw = {
        "init_state": {"type": "state", "value": ""},
        "goals": {"type": "state", "value": "(and)"},
    }

    task = validate_task_dictionary(raw, domain)

    assert task.entities == {}
    assert task.goals == ()
    assert task.goal_state == "(and)"


def test_uppercase_key_is_rejected(domain: Domain) -> None:
    raw = scripted_task(TRADE_REQUEST)
    raw["Data-File1"] = raw.pop("data-file1")

    with pytest.raises(TaskValidationError, match="key not lowercase: 'Data-File1'"):
        validate_task_dictionary(raw, domain)


def test_every_violation_is_reported(domain: Domain) -> None:
    raw = {
        "dataframe": {"type": "dataframe", "value": []},
        "thing1": {"type": "gizmo", "value": 1},
        "text1": {"type": "text", "value": "hello"},
        "goals": {"type": "state", "value": "(and (sent text1) (available ghost))"},
    }

    with pytest.raises(TaskValidationError) as excinfo:
        validate_task_dictionary(raw, domain)

    violations = excinfo.value.violations
    assert "missing mandatory key 'init_state'" in violations
    assert "key 'dataframe' collides with a type name" in violations
    assert "entity 'thing1' has unknown type 'gizmo'" in violations
    assert any("type mismatch: 'text1' is text" in v for v in violations)
    assert any("literal argument has no entity key 'ghost'" in v for v in violations)
    assert excinfo.value.stage == "validate"


def test_key_naming_a_domain_constant_is_rejected() -> None:
    domain = parse_domain(
        """
        (define (domain chat)
          (:requirements :strips :typing)
          (:types text response - object)
          (:constants chat-response - response)
          (:predicates (sent ?r - response) (summarized ?t - text ?t1 - text)))
        """
    )
    raw = {
        "chat-response": {"type": "response", "value": ""},
        "text1": {"type": "text", "value": "hello"},
        "init_state": {"type": "state", "value": ""},
        "goals": {"type": "state", "value": "(and (sent chat-response))"},
    }

    with pytest.raises(TaskValidationError) as excinfo:
        validate_task_dictionary(raw, domain)

    assert excinfo.value.violations == ["key 'chat-response' collides with a domain constant"]

    del raw["chat-response"]
    task = validate_task_dictionary(raw, domain)
    assert sorted(task.entities) == ["text1"]


def test_unparseable_state_string(domain: Domain) -> None:
    raw = {
        "init_state": {"type": "state", "value": "(available"},
        "goals": {"type": "state", "value": "(and)"},
    }

    with pytest.raises(TaskValidationError, match="init_state: unparseable literal string"):
        validate_task_dictionary(raw, domain)


def test_goal_already_in_init_is_kept_with_a_warning(
    domain: Domain, caplog: pytest.LogCaptureFixture
) -> None:
    raw = {
        "text1": {"type": "text", "value": "x"},
        "init_state": {"type": "state", "value": "(available text1)"},
        "goals": {"type": "state", "value": "(available text1)"},
    }

    with caplog.at_level(logging.WARNING, logger="plan_x"):
        task = validate_task_dictionary(raw, domain)

    assert task.goals == (Literal(Atom("available", ("text1",))),)
    assert "already in init_state" in caplog.text


def test_numeric_assignments_live_apart_from_literals(domain: Domain) -> None:
    task = validate_task_dictionary(scripted_task(BARCHART_REQUEST), domain)

    assert [str(a) for a in task.numeric_init] == ["(= (database-cost database1) 1)"]
    assert "(= (database-cost database1) 1)" in task.init_state


def test_extra_record_fields_survive(domain: Domain) -> None:
    raw = {
        "model1": {"type": "model", "value": "investor", "algorithm": "ml-algorithm1"},
        "init_state": {"type": "state", "value": ""},
        "goals": {"type": "state", "value": "(and)"},
    }

    task = validate_task_dictionary(raw, domain)

    assert task.to_json()["model1"] == {"type": "model", "value": "investor", "algorithm": "ml-algorithm1"}


def test_merge_of_one_dictionary_is_identity(domain: Domain) -> None:
    task = validate_task_dictionary(scripted_task(TRADE_REQUEST), domain)

    assert merge_task_dictionaries([task]) == task


def test_merge_summarize_and_explain(domain: Domain) -> None:
    catalog = load_catalog(asset_path("intents.json"), domain)
    summarize = example_task(catalog.find("Summarize"), domain)
    explain = example_task(catalog.find("Explain"), domain)

    merged = merge_task_dictionaries([summarize, explain])

    assert sorted(merged.entities) == ["text1", "text2"]
    assert Literal(Atom("summarized", ("text1", "text2"))) in merged.goals
    assert Literal(Atom("explained", ("text1", "text2"))) in merged.goals


def test_merge_is_commutative_up_to_sets(domain: Domain) -> None:
    catalog = load_catalog(asset_path("intents.json"), domain)
    a = example_task(catalog.find("Summarize"), domain)
    b = example_task(catalog.find("Explain"), domain)

    ab = merge_task_dictionaries([a, b])
    ba = merge_task_dictionaries([b, a])

    assert ab.entities == ba.entities
    assert set(ab.init) == set(ba.init)
    assert set(ab.goals) == set(ba.goals)


def test_merge_conflicting_records(domain: Domain) -> None:
    first = validate_task_dictionary(scripted_task(TRADE_REQUEST), domain)
    raw = copy.deepcopy(scripted_task(TRADE_REQUEST))
    raw["query1"]["value"] = "df[df['status'] == 'failed']"
    second = validate_task_dictionary(raw, domain)

    with pytest.raises(MergeError, match="key 'query1' is bound to conflicting records"):
        merge_task_dictionaries([first, second])


def test_merge_conflicting_costs(domain: Domain) -> None:
    first = validate_task_dictionary(scripted_task(BARCHART_REQUEST), domain)
    raw = copy.deepcopy(scripted_task(BARCHART_REQUEST))
    raw["init_state"]["value"] = raw["init_state"]["value"].replace(
        "(= (database-cost database1) 1)", "(= (database-cost database1) 4)"
    )
    second = validate_task_dictionary(raw, domain)

    with pytest.raises(MergeError, match="assigned conflicting values"):
        merge_task_dictionaries([first, second])


def test_shipped_catalog_is_self_consistent(domain: Domain) -> None:
    catalog = load_catalog(asset_path("intents.json"), domain)

    for intent in catalog.intents:
        validate_task_dictionary(intent.example, domain)
    names = catalog.names()
    for expected in ("Read file", "Count", "Create chart slide", "Deep research", "Match files"):
        assert expected in names
    unknown = catalog.unknown_intent()
    assert unknown is not None
    assert unknown.name.startswith("Unknown Intent")


def test_catalog_rejects_duplicates_and_bad_examples(domain: Domain) -> None:
    good = {"init_state": {"type": "state", "value": ""}, "goals": {"type": "state", "value": "(and)"}}
    raw = [
        {"name": "Ping", "description": "", "example": good},
        {"name": "Ping", "description": "", "example": good},
        {"name": "Broken", "description": "", "example": {"goals": good["goals"]}},
    ]

    with pytest.raises(PlanXError, match="duplicate intent 'Ping'") as excinfo:
        build_catalog(raw, domain)

    assert "intent 'Broken': missing mandatory key 'init_state'" in str(excinfo.value)
