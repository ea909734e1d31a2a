from __future__ import annotations

import shutil
from pathlib import Path

from conftest import (
    BARCHART_REQUEST,
    COUNT_APPOINTMENTS_REQUEST,
    EXPLAIN_REQUEST,
    GIBBERISH_REQUEST,
    RECURRING_2024,
    SAVE_APPOINTMENTS_REQUEST,
    TRADE_REQUEST,
    UNSOLVABLE_REQUEST,
    scripted_task,
)
from plan_x.config import Config
from plan_x.errors import EXIT_OK, EXIT_UNSOLVABLE
from plan_x.runtime.response import FALLBACK_RESPONSE
from plan_x.session import RUN_LOG_FILE, Session, handle_request


def test_dumps_are_reproducible(office: Path, tmp_path: Path) -> None:
    twin = tmp_path / "twin"
    shutil.copytree(office, twin)
    first_dir, second_dir = tmp_path / "dump1", tmp_path / "dump2"

    first = Session(Config(world=office, dump_dir=first_dir)).handle(BARCHART_REQUEST)
    second = Session(Config(world=twin, dump_dir=second_dir)).handle(BARCHART_REQUEST)

    assert first.exit_code == second.exit_code == EXIT_OK
    names = sorted(p.name for p in first_dir.iterdir())
    assert names == sorted(p.name for p in second_dir.iterdir())
    assert {"prompt.txt", "reply.txt", "task.json", "problem.pddl", "plan.txt", "report.json", "response.txt"} <= set(names)
    for name in names:
        if name == RUN_LOG_FILE:
            continue
        assert (first_dir / name).read_bytes() == (second_dir / name).read_bytes(), name
    assert "; cost = 17" in (first_dir / "plan.txt").read_text(encoding="utf-8")


def test_run_log_mirrors_pipeline_stages(office: Path, tmp_path: Path) -> None:
    dump = tmp_path / "dump"

    Session(Config(world=office, dump_dir=dump)).handle(TRADE_REQUEST)

    log = (dump / RUN_LOG_FILE).read_text(encoding="utf-8")
    for stage in ("session: start", "prompt: ok", "compile: ok", "plan: ok", "execute: success"):
        assert stage in log
    assert log.startswith("[")


def test_unrecognised_request_gets_the_apology(office: Path) -> None:
    result = Session(Config(world=office)).handle(GIBBERISH_REQUEST)

    assert result.fallback
    assert result.exit_code == EXIT_OK
    assert result.response.splitlines()[0] == FALLBACK_RESPONSE


def test_unsolvable_request_names_the_unmet_goal(office: Path) -> None:
    result = Session(Config(world=office)).handle(UNSOLVABLE_REQUEST)

    assert result.exit_code == EXIT_UNSOLVABLE
    assert result.plan is None
    assert result.response.startswith("No plan found (plan: goal unreachable from init).")
    assert "Unmet goals: (replied-email email1)" in result.response


def test_seed_state_skips_the_backend(office: Path, tmp_path: Path) -> None:
    dump = tmp_path / "dump"

    result = Session(Config(world=office, dump_dir=dump)).handle(
        "A request the scripted backend has never seen.", seed=scripted_task(TRADE_REQUEST)
    )

    assert result.exit_code == EXIT_OK
    assert not result.fallback
    assert not (dump / "prompt.txt").exists()
    assert "TR123" in result.response


def test_world_persists_between_requests(office: Path) -> None:
    session = Session(Config(world=office))

    saved = session.handle(SAVE_APPOINTMENTS_REQUEST)
    counted = session.handle(COUNT_APPOINTMENTS_REQUEST)

    assert saved.exit_code == counted.exit_code == EXIT_OK
    assert f"recurring-data-counts: {RECURRING_2024}" in counted.response
    assert len(session.world.outbox) == 1


def test_text_operations_ask_the_backend(office: Path) -> None:
    result = Session(Config(world=office)).handle(EXPLAIN_REQUEST)

    assert result.exit_code == EXIT_OK
    assert result.plan is not None
    assert "(explain ai text1 text2)" in result.plan_text
    assert "Banks borrow short-term from the central bank" in result.response


def test_handle_request_returns_the_response_text(office: Path) -> None:
    response = handle_request(TRADE_REQUEST, Config(world=office))

    assert response.endswith("Done: all goals achieved.\n")
    assert "TR123" in response
