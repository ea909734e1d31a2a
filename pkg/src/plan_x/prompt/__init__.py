from plan_x.prompt.backends import (
    CompletionBackend,
    HttpBackend,
    ScriptedBackend,
    complete,
    request_fingerprint,
)
from plan_x.prompt.builder import SorSchema, build_prompt, build_schemas, load_schemas, request_of
from plan_x.prompt.output import parse_llm_output

__all__ = [
    "CompletionBackend",
    "HttpBackend",
    "ScriptedBackend",
    "SorSchema",
    "build_prompt",
    "build_schemas",
    "complete",
    "load_schemas",
    "parse_llm_output",
    "request_fingerprint",
    "request_of",
]
