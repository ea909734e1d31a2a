from __future__ import annotations

import json
from pathlib import Path

import pandas as pd
import pytest

from plan_x.errors import PlanXError
from plan_x.runtime.world import OfficeWorld, WorldError, normalize_path


def test_normalize_path() -> None:
    assert normalize_path("./genplanx/graph.pptx") == "genplanx/graph.pptx"
    assert normalize_path("genplanx\\file_1.csv") == "genplanx/file_1.csv"


@pytest.mark.parametrize("path", ["../secrets.csv", "/etc/passwd", "a/../../b", ""])
def test_paths_outside_the_root_are_refused(path: str) -> None:
    with pytest.raises(WorldError):
        normalize_path(path)


def test_load_reads_every_store(office: Path) -> None:
    world = OfficeWorld.load(office)

    assert "annual-report.csv" in world.files
    assert "genplanx/file_1.csv" in world.files
    assert len(world.calendar) == 10
    assert list(world.read_table("annual-report")["balance"]) == [120, 135, 150, 90, 170]
    assert world.resolve("./genplanx/investment_data", ".csv") == "genplanx/investment_data.csv"


def test_unreadable_world_file_is_a_config_error(tmp_path: Path) -> None:
    (tmp_path / "appointments.json").write_text("{not json", encoding="utf-8")

    with pytest.raises(PlanXError, match="cannot load world file appointments.json") as excinfo:
        OfficeWorld.load(tmp_path)

    assert excinfo.value.stage == "config"
    assert excinfo.value.exit_code == 2


def test_missing_file(office: Path) -> None:
    world = OfficeWorld.load(office)

    with pytest.raises(WorldError, match="no such file: missing.csv"):
        world.read_table("missing.csv")


def test_writes_go_through_to_disk(tmp_path: Path) -> None:
    world = OfficeWorld.load(tmp_path)

    world.write_table("out/table.csv", pd.DataFrame({"a": [1, 2]}))
    world.write_text("notes/memo.pdf", "quarterly memo")
    world.write_presentation("genplanx/graph.pptx", {"name": "deck", "slides": []})

    assert (tmp_path / "out" / "table.csv").read_text(encoding="utf-8") == "a\n1\n2\n"
    assert (tmp_path / "notes" / "memo.pdf.txt").read_text(encoding="utf-8") == "quarterly memo"
    assert json.loads((tmp_path / "genplanx" / "graph.pptx").read_text(encoding="utf-8")) == {
        "name": "deck",
        "slides": [],
    }
    reloaded = OfficeWorld.load(tmp_path)
    assert reloaded.read_text("notes/memo.pdf") == "quarterly memo"
    assert reloaded.presentation("genplanx/graph.pptx")["name"] == "deck"


def test_fingerprint_follows_readable_content(office: Path) -> None:
    world = OfficeWorld.load(office)
    before = world.fingerprint()

    world.send({"kind": "response", "to": "user", "contents": []})
    assert world.fingerprint() == before

    world.write_text("notes.txt", "hello")
    assert world.fingerprint() != before


def test_equal_worlds_have_equal_fingerprints(office: Path) -> None:
    assert OfficeWorld.load(office).fingerprint() == OfficeWorld.load(office).fingerprint()


def test_snapshot_and_restore(office: Path) -> None:
    world = OfficeWorld.load(office)
    snapshot = world.snapshot()
    before = world.fingerprint()

    world.write_text("scratch.txt", "temporary")
    world.add_appointment({"subject": "extra", "start": "2024-09-01T09:00:00", "hour": 9, "year": 2024, "isrecurring": False})
    world.restore(snapshot)

    assert world.fingerprint() == before
    assert not (office / "scratch.txt").exists()
    assert len(json.loads((office / "appointments.json").read_text(encoding="utf-8"))) == 10


def test_find_text_is_case_insensitive(tmp_path: Path) -> None:
    world = OfficeWorld.load(tmp_path)
    world.write_text("policies/travel.txt", "Hotels up to 150 EUR.\nTrains in second class.")
    world.write_text("policies/it.txt", "Laptops are renewed every 3 years.")

    assert world.find_text("hotels") == [("policies/travel.txt", "Hotels up to 150 EUR.")]
    assert world.find_text("laptops", "policies/travel.txt") == []


def test_inbox_lookup_by_id_or_subject() -> None:
    world = OfficeWorld(inbox=[{"id": "msg-1", "subject": "Figures", "from": "a@b.c", "body": ""}])

    assert world.inbox_message("msg-1") is world.inbox_message("Figures")
    with pytest.raises(WorldError):
        world.inbox_message("msg-2")
