from __future__ import annotations

import dataclasses
import logging
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional

from plan_x.errors import PlanXError
from plan_x.intent.catalog import IntentCatalog, load_catalog
from plan_x.intent.entities import PatternSet, load_patterns
from plan_x.io.json_io import read_json
from plan_x.pddl.model import Domain
from plan_x.pddl.reader import parse_domain
from plan_x.planner.search import DEFAULT_NODE_LIMIT, HEURISTICS
from plan_x.prompt.backends import ENDPOINT_ENV, CompletionBackend, HttpBackend, ScriptedBackend
from plan_x.prompt.builder import SorSchema, load_schemas
from plan_x.runtime.replan import DEFAULT_REPLAN_BUDGET, ReplanPolicy
from plan_x.runtime.tree import DEFAULT_MAX_DEPTH


logger = logging.getLogger(__name__)

BACKENDS = ("scripted", "http")
_PATH_KEYS = ("domain", "intents", "patterns", "schemas", "script", "world")


def asset_path(name: str) -> Path:
    return Path(str(resources.files("plan_x").joinpath("assets", name)))


@dataclass
class Config:
    domain: Path = field(default_factory=lambda: asset_path("assistant.pddl"))
    intents: Path = field(default_factory=lambda: asset_path("intents.json"))
    patterns: Path = field(default_factory=lambda: asset_path("patterns.json"))
    schemas: Path = field(default_factory=lambda: asset_path("schemas.json"))
    backend: str = "scripted"
    script: Path = field(default_factory=lambda: asset_path("scripted_replies.json"))
    endpoint: str = ""
    timeout: float = 30.0
    model: Optional[str] = None
    temperature: Optional[float] = None
    world: Optional[Path] = None
    replan_budget: int = DEFAULT_REPLAN_BUDGET
    node_limit: int = DEFAULT_NODE_LIMIT
    heuristic: str = "hmax"
    tree_max_depth: int = DEFAULT_MAX_DEPTH
    dump_dir: Optional[Path] = None
    dump_problem: bool = False
    dump_plan: bool = False

    def policy(self) -> ReplanPolicy:
        return ReplanPolicy(
            budget=self.replan_budget, heuristic=self.heuristic, node_limit=self.node_limit
        )


@dataclass(frozen=True)
class LoadedAssets:
    """Everything a request needs that is parsed once at startup."""

    domain: Domain
    catalog: IntentCatalog
    patterns: PatternSet
    schemas: List[SorSchema]


def _field_names() -> List[str]:
    return [f.name for f in dataclasses.fields(Config)]


def config_from_mapping(raw: Dict[str, Any], base_dir: Optional[Path] = None) -> Config:
    unknown = sorted(set(raw) - set(_field_names()))
    if unknown:
        raise PlanXError("config", f"unknown config keys: {', '.join(unknown)}")
    values: Dict[str, Any] = {}
    for key, value in raw.items():
        if key in _PATH_KEYS or key == "dump_dir":
            if value is None:
                values[key] = None
                continue
            path = Path(str(value)).expanduser()
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            values[key] = path
        else:
            values[key] = value
    return Config(**values)


def load_config(path: Optional[str | Path] = None) -> Config:
    """Read a JSON config file; relative paths resolve against its directory."""
    if path is None:
        config = Config()
    else:
        config_path = Path(path)
        try:
            raw = read_json(config_path)
        except (OSError, ValueError) as exc:
            raise PlanXError("config", f"cannot read config {config_path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise PlanXError("config", f"{config_path}: config must be a JSON object")
        config = config_from_mapping(raw, config_path.parent)
    endpoint = os.environ.get(ENDPOINT_ENV)
    if endpoint:
        config.endpoint = endpoint
    return config


def _require_file(path: Optional[Path], what: str) -> Path:
    if path is None or not Path(path).is_file():
        raise PlanXError("config", f"{what} not found: {path}")
    return Path(path)


def validate_config(config: Config) -> LoadedAssets:
    """Check every setting and parse the assets; raises ``PlanXError`` (stage config)."""
    if config.backend not in BACKENDS:
        raise PlanXError("config", f"unknown backend '{config.backend}' (expected one of {', '.join(BACKENDS)})")
    if config.heuristic not in HEURISTICS:
        raise PlanXError("config", f"unknown heuristic '{config.heuristic}'")
    for key in ("replan_budget", "node_limit", "tree_max_depth"):
        value = getattr(config, key)
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise PlanXError("config", f"{key} must be a non-negative integer, got {value!r}")
    if not isinstance(config.timeout, (int, float)) or config.timeout <= 0:
        raise PlanXError("config", f"timeout must be positive, got {config.timeout!r}")
    if config.backend == "scripted":
        _require_file(config.script, "scripted replies")
    elif not config.endpoint:
        raise PlanXError("config", f"http backend needs an endpoint (config or {ENDPOINT_ENV})")
    if config.world is not None and not Path(config.world).is_dir():
        raise PlanXError("config", f"world directory not found: {config.world}")

    domain_path = _require_file(config.domain, "domain file")
    try:
        domain = parse_domain(domain_path.read_text(encoding="utf-8"), str(domain_path))
    except OSError as exc:
        raise PlanXError("config", f"cannot read domain {domain_path}: {exc}") from exc
    catalog = load_catalog(_require_file(config.intents, "intent catalog"), domain)
    patterns = load_patterns(_require_file(config.patterns, "pattern file"))
    schemas = load_schemas(_require_file(config.schemas, "schema file"))
    logger.info(
        "config: ok backend=%s domain=%s intents=%d", config.backend, domain.name, len(catalog.intents)
    )
    return LoadedAssets(domain=domain, catalog=catalog, patterns=patterns, schemas=schemas)


def make_backend(config: Config) -> CompletionBackend:
    if config.backend == "scripted":
        return ScriptedBackend.from_file(config.script)
    return HttpBackend(
        config.endpoint,
        timeout=config.timeout,
        model=config.model,
        temperature=config.temperature,
    )
