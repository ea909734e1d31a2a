from __future__ import annotations

import io
import json
import urllib.error
from typing import Any, Dict, List

import pytest

from conftest import BARCHART_REQUEST, LEARNING_REQUEST, TRADE_REQUEST, scripted_task
from plan_x.config import asset_path
from plan_x.errors import BackendError, OutputParseError, PlanXError
from plan_x.intent.catalog import IntentCatalog, load_catalog
from plan_x.intent.entities import extract_entities, load_patterns
from plan_x.intent.task_dict import validate_task_dictionary
from plan_x.pddl.model import Domain
from plan_x.prompt import backends
from plan_x.prompt.backends import HttpBackend, ScriptedBackend, complete, request_fingerprint
from plan_x.prompt.builder import build_prompt, build_schemas, load_schemas, request_of
from plan_x.prompt.output import parse_llm_output
from test_entities import SIX_TOKENS


SUMMARIZE_REPLY = """Intent: Summarize
Output:
{'text1': {'type': 'text', 'value': 'matched'},
 'text2': {'type': 'text', 'value': 'text2'},
 'init_state': {'type': 'state', 'value': ''},
 'goals': {'type': 'state', 'value': '(and (summarized text1 text2))'}}
"""


def _prompt(request: str, domain: Domain, catalog: IntentCatalog | None = None) -> str:
    catalog = catalog or load_catalog(asset_path("intents.json"), domain)
    patterns = load_patterns(asset_path("patterns.json"))
    schemas = load_schemas(asset_path("schemas.json"))
    return build_prompt(request, extract_entities(request, patterns), domain, catalog, schemas)


def test_prompt_sections_in_order(domain: Domain) -> None:
    prompt = _prompt("Summarize X", domain)

    order = [
        "You are working in an office environment.",
        "Schemas: SOR 1: [trade-id, client, isin, trade-date, status, amount]",
        "The types of the task are:",
        "\t(in ?c - contents ?c1 - contents)",
        "The actions available are: read-data,",
        "'init_state' and 'goals' are mandatory.",
        "merge their dictionaries",
        "Do not include goal literals in the initial state.",
        "Intent: Summarize",
        "Entities detected:",
        "Request: Summarize X",
    ]
    positions = [prompt.index(marker) for marker in order]
    assert positions == sorted(positions)
    assert prompt.endswith("Request: Summarize X\n")
    assert '"goals": {"type": "state", "value": "(and (summarized text1 text2))"}' in prompt


def test_prompt_with_empty_catalog_keeps_rules(domain: Domain) -> None:
    prompt = _prompt("Summarize X", domain, IntentCatalog())

    assert "Intent:" not in prompt.replace("'Intent: <intent>'", "")
    assert "'init_state' and 'goals' are mandatory." in prompt
    assert "Do not include goal literals in the initial state." in prompt


def test_prompt_lists_detected_entities(domain: Domain) -> None:
    prompt = _prompt(SIX_TOKENS, domain)

    section = prompt[prompt.index("Entities detected:") : prompt.rindex("Request: ")]
    for line in (
        "\tclient identifier: CIDTA12",
        "\tfirm identifier: F34GP5",
        "\tISIN: US1234567892",
        "\ttrade date: 16-07-24",
        "\taccount number: A12345",
        "\tportfolio id: P6763",
    ):
        assert line in section


def test_prompt_is_deterministic_and_carries_the_request(domain: Domain) -> None:
    first = _prompt(TRADE_REQUEST, domain)

    assert first == _prompt(TRADE_REQUEST, domain)
    assert first != _prompt(TRADE_REQUEST + " Thanks.", domain)
    assert request_of(first) == TRADE_REQUEST


def test_schema_file_rejects_repeated_columns() -> None:
    with pytest.raises(PlanXError, match="repeats a column"):
        build_schemas([{"name": "SOR 9", "columns": ["a", "a"]}])


def test_scripted_backend_answers_the_barchart_request(domain: Domain) -> None:
    backend = ScriptedBackend.from_file(asset_path("scripted_replies.json"))

    reply = complete(_prompt(BARCHART_REQUEST, domain), backend)

    assert json.loads(reply) == scripted_task(BARCHART_REQUEST)


def test_scripted_backend_accepts_fingerprint_keys() -> None:
    backend = ScriptedBackend({request_fingerprint("hello there"): "{}"})

    assert backend.complete("preamble\nRequest: hello there\n") == "{}"


def test_scripted_backend_without_mapping() -> None:
    backend = ScriptedBackend({})

    with pytest.raises(BackendError, match="no scripted reply") as excinfo:
        backend.complete("Request: unknown")

    assert excinfo.value.exit_code == 5


class _FakeResponse:
    def __init__(self, body: Dict[str, Any]) -> None:
        self._buffer = io.BytesIO(json.dumps(body).encode("utf-8"))

    def read(self) -> bytes:
        return self._buffer.read()

    def __enter__(self) -> "_FakeResponse":
        return self

    def __exit__(self, *exc: object) -> None:
        return None


def test_http_backend_posts_prompt(monkeypatch: pytest.MonkeyPatch) -> None:
    seen: List[Dict[str, Any]] = []

    def fake_urlopen(request: Any, timeout: float) -> _FakeResponse:
        seen.append({"url": request.full_url, "body": json.loads(request.data), "timeout": timeout})
        return _FakeResponse({"text": "{}"})

    monkeypatch.delenv(backends.ENDPOINT_ENV, raising=False)
    monkeypatch.setattr(backends.urllib.request, "urlopen", fake_urlopen)
    backend = HttpBackend("http://llm.local/complete", timeout=2.5, model="m1", temperature=0.0)

    assert backend.complete("Request: hi") == "{}"
    assert seen == [
        {
            "url": "http://llm.local/complete",
            "body": {"prompt": "Request: hi", "model": "m1", "temperature": 0.0},
            "timeout": 2.5,
        }
    ]


def test_http_backend_unreachable(monkeypatch: pytest.MonkeyPatch) -> None:
    def refuse(request: Any, timeout: float) -> None:
        raise urllib.error.URLError("connection refused")

    monkeypatch.delenv(backends.ENDPOINT_ENV, raising=False)
    monkeypatch.setattr(backends.urllib.request, "urlopen", refuse)

    with pytest.raises(BackendError, match="completion endpoint unreachable"):
        HttpBackend("http://127.0.0.1:9/complete", timeout=0.1).complete("Request: hi")


def test_http_backend_timeout(monkeypatch: pytest.MonkeyPatch) -> None:
    def stall(request: Any, timeout: float) -> None:
        raise TimeoutError("timed out")

    monkeypatch.delenv(backends.ENDPOINT_ENV, raising=False)
    monkeypatch.setattr(backends.urllib.request, "urlopen", stall)

    with pytest.raises(BackendError, match="timed out after 0.1s"):
        HttpBackend("http://llm.local/complete", timeout=0.1).complete("Request: hi")


def test_http_endpoint_from_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv(backends.ENDPOINT_ENV, "http://override.local/run")

    assert HttpBackend("http://config.local/run").endpoint == "http://override.local/run"


def test_parse_single_quoted_dictionary() -> None:
    parsed = parse_llm_output(SUMMARIZE_REPLY)

    assert sorted(parsed) == ["goals", "init_state", "text1", "text2"]
    assert parsed["goals"]["value"] == "(and (summarized text1 text2))"


def test_parse_single_quotes_with_json_literals() -> None:
    reply = "{'a': true, 'b': null, 'c': 'true or false', 'd': [false]}"

    assert parse_llm_output(reply) == {"a": True, "b": None, "c": "true or false", "d": [False]}


def test_parse_empty_object() -> None:
    assert parse_llm_output("{}") == {}


def test_parse_reply_with_leading_prose_and_fences() -> None:
    raw = scripted_task(TRADE_REQUEST)
    reply = "Here is the dictionary:\n```json\n" + json.dumps(raw) + "\n```\nLet me know!"

    assert parse_llm_output(reply) == raw


def test_parse_is_idempotent_on_strict_json() -> None:
    raw = scripted_task(LEARNING_REQUEST)

    once = parse_llm_output(json.dumps(raw))

    assert parse_llm_output(json.dumps(once)) == once


def test_braces_inside_strings_do_not_count() -> None:
    parsed = parse_llm_output('{"q": {"type": "query", "value": "a } b"}} trailing }')

    assert parsed == {"q": {"type": "query", "value": "a } b"}}


@pytest.mark.parametrize(
    ("reply", "message"),
    [
        ("no dictionary here", "no JSON object found"),
        ('{"a": {"b": 1}', "unbalanced braces"),
        ('{"a": 1, "a": 2}', "duplicate key 'a'"),
        ("{'a': undefined_name}", "neither JSON nor a dictionary literal"),
    ],
)
def test_parse_errors(reply: str, message: str) -> None:
    with pytest.raises(OutputParseError, match=message):
        parse_llm_output(reply)


def test_scripted_pipeline_validates_every_shipped_dictionary(domain: Domain) -> None:
    backend = ScriptedBackend.from_file(asset_path("scripted_replies.json"))
    dictionaries = [
        request
        for request, reply in json.loads(asset_path("scripted_replies.json").read_text("utf-8")).items()
        if isinstance(reply, dict)
    ]

    assert len(dictionaries) >= 8
    for request in dictionaries:
        reply = complete(_prompt(request, domain), backend)
        validate_task_dictionary(parse_llm_output(reply), domain)
