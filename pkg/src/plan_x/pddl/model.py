from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union


ROOT_TYPE = "object"
TOTAL_COST = "total-cost"


@dataclass(frozen=True)
class TypedName:
    name: str
    type: str


@dataclass(frozen=True)
class Predicate:
    name: str
    params: Tuple[TypedName, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: Tuple[str, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return f"({self.predicate})"
        return f"({self.predicate} {' '.join(self.args)})"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True

    def __str__(self) -> str:
        if self.positive:
            return str(self.atom)
        return f"(not {self.atom})"


@dataclass(frozen=True)
class FluentTerm:
    """A numeric function application, e.g. ``(database-cost ?f)``."""

    name: str
    args: Tuple[str, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return f"({self.name})"
        return f"({self.name} {' '.join(self.args)})"


CostTerm = Union[int, FluentTerm]


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: Tuple[TypedName, ...] = ()
    precondition: Tuple[Literal, ...] = ()
    add_effects: Tuple[Atom, ...] = ()
    del_effects: Tuple[Atom, ...] = ()
    # None: no increase clause, the action is free.
    cost: Optional[CostTerm] = None

    @property
    def cost_term(self) -> CostTerm:
        return 0 if self.cost is None else self.cost

    @property
    def param_names(self) -> Tuple[str, ...]:
        return tuple(p.name for p in self.params)


@dataclass(frozen=True)
class Domain:
    name: str
    requirements: Tuple[str, ...] = ()
    types: Dict[str, Optional[str]] = field(default_factory=lambda: {ROOT_TYPE: None})
    constants: Tuple[TypedName, ...] = ()
    predicates: Dict[str, Predicate] = field(default_factory=dict)
    functions: Dict[str, Predicate] = field(default_factory=dict)
    actions: Tuple[ActionSchema, ...] = ()

    def is_subtype(self, type_name: str, ancestor: str) -> bool:
        current: Optional[str] = type_name
        while current is not None:
            if current == ancestor:
                return True
            current = self.types.get(current)
        return False

    def ancestors(self, type_name: str) -> Iterator[str]:
        current: Optional[str] = type_name
        while current is not None:
            yield current
            current = self.types.get(current)

    def action(self, name: str) -> ActionSchema:
        for schema in self.actions:
            if schema.name == name:
                return schema
        raise KeyError(name)

    def has_costs(self) -> bool:
        return any(schema.cost_term != 0 for schema in self.actions)

    def constant_types(self) -> Dict[str, str]:
        return {c.name: c.type for c in self.constants}


@dataclass(frozen=True)
class NumericAssignment:
    term: FluentTerm
    value: int

    def __str__(self) -> str:
        return f"(= {self.term} {self.value})"


@dataclass(frozen=True)
class Problem:
    name: str
    domain_name: str
    objects: Tuple[TypedName, ...] = ()
    init: Tuple[Atom, ...] = ()
    numeric_init: Tuple[NumericAssignment, ...] = ()
    goal: Tuple[Literal, ...] = ()
    metric: bool = False

    def object_types(self) -> Dict[str, str]:
        return {o.name: o.type for o in self.objects}

    def fluent_value(self, term: FluentTerm) -> Optional[int]:
        for assignment in self.numeric_init:
            if assignment.term == term:
                return assignment.value
        return None

    def same_as(self, other: "Problem") -> bool:
        """Structural equality up to ordering of set members."""
        return (
            self.name == other.name
            and self.domain_name == other.domain_name
            and set(self.objects) == set(other.objects)
            and len(self.objects) == len(other.objects)
            and set(self.init) == set(other.init)
            and set(self.numeric_init) == set(other.numeric_init)
            and set(self.goal) == set(other.goal)
            and self.metric == other.metric
        )


def unique(items: List) -> List:
    seen = set()
    ordered = []
    for item in items:
        if item in seen:
            continue
        seen.add(item)
        ordered.append(item)
    return ordered
