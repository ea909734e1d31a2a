from __future__ import annotations

import json
from pathlib import Path

import pytest

from plan_x.config import Config, config_from_mapping, load_config, make_backend, validate_config
from plan_x.errors import PlanXError
from plan_x.prompt.backends import ENDPOINT_ENV, HttpBackend, ScriptedBackend


def test_defaults_use_shipped_assets() -> None:
    config = Config()

    assets = validate_config(config)

    assert assets.domain.name == "assistant"
    assert assets.catalog.unknown_intent() is not None
    assert [s.name for s in assets.schemas] == ["SOR 1", "SOR 2"]
    assert isinstance(make_backend(config), ScriptedBackend)


def test_unknown_keys_are_rejected() -> None:
    with pytest.raises(PlanXError, match="unknown config keys: colour, flavour"):
        config_from_mapping({"flavour": 1, "colour": 2, "backend": "scripted"})


def test_relative_paths_resolve_against_the_config_file(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv(ENDPOINT_ENV, raising=False)
    config_file = tmp_path / "conf" / "plan-x.json"
    config_file.parent.mkdir()
    config_file.write_text(json.dumps({"world": "office", "replan_budget": 1}), encoding="utf-8")

    config = load_config(config_file)

    assert config.world == tmp_path / "conf" / "office"
    assert config.replan_budget == 1
    assert config.policy().budget == 1


def test_endpoint_from_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv(ENDPOINT_ENV, "http://llm.local/complete")

    config = load_config()

    assert config.endpoint == "http://llm.local/complete"


def test_http_backend_is_built_from_config(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv(ENDPOINT_ENV, raising=False)
    config = Config(backend="http", endpoint="http://llm.local/complete", timeout=5.0, model="m")

    validate_config(config)
    backend = make_backend(config)

    assert isinstance(backend, HttpBackend)
    assert backend.endpoint == "http://llm.local/complete"
    assert backend.timeout == 5.0


@pytest.mark.parametrize(
    ("overrides", "message"),
    [
        ({"backend": "telepathy"}, "unknown backend 'telepathy'"),
        ({"heuristic": "ff"}, "unknown heuristic 'ff'"),
        ({"replan_budget": -1}, "replan_budget must be a non-negative integer"),
        ({"node_limit": True}, "node_limit must be a non-negative integer"),
        ({"timeout": 0}, "timeout must be positive"),
        ({"backend": "http", "endpoint": ""}, "http backend needs an endpoint"),
    ],
)
def test_invalid_settings(overrides: dict, message: str) -> None:
    with pytest.raises(PlanXError, match=message) as excinfo:
        validate_config(Config(**overrides))

    assert excinfo.value.stage == "config"


def test_missing_files(tmp_path: Path) -> None:
    with pytest.raises(PlanXError, match="domain file not found"):
        validate_config(Config(domain=tmp_path / "missing.pddl"))
    with pytest.raises(PlanXError, match="world directory not found"):
        validate_config(Config(world=tmp_path / "missing"))


def test_unreadable_config_file(tmp_path: Path) -> None:
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")

    with pytest.raises(PlanXError, match="cannot read config"):
        load_config(broken)
