from plan_x.intent.catalog import Intent, IntentCatalog, build_catalog, load_catalog
from plan_x.intent.entities import (
    EntityMap,
    EntityMatch,
    PatternSet,
    compile_patterns,
    extract_entities,
    find_entities,
    load_patterns,
)
from plan_x.intent.task_dict import (
    EntityRecord,
    TaskDictionary,
    merge_task_dictionaries,
    validate_task_dictionary,
)

__all__ = [
    "EntityMap",
    "EntityMatch",
    "EntityRecord",
    "Intent",
    "IntentCatalog",
    "PatternSet",
    "TaskDictionary",
    "build_catalog",
    "compile_patterns",
    "extract_entities",
    "find_entities",
    "load_catalog",
    "load_patterns",
    "merge_task_dictionaries",
    "validate_task_dictionary",
]
