from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field, replace
from typing import AbstractSet, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from plan_x.pddl.model import (
    ActionSchema,
    Atom,
    CostTerm,
    Domain,
    FluentTerm,
    Literal,
    Problem,
    TypedName,
)


logger = logging.getLogger(__name__)

# Static cost fluents without an assignment in :init.
DEFAULT_FLUENT_COST = 1

Binding = Dict[str, str]


@dataclass(frozen=True)
class GroundedAction:
    name: str
    args: Tuple[str, ...]
    precondition: Tuple[Literal, ...] = ()
    add_effects: Tuple[Atom, ...] = ()
    del_effects: Tuple[Atom, ...] = ()
    cost: int = 0

    def __str__(self) -> str:
        if not self.args:
            return f"({self.name})"
        return f"({self.name} {' '.join(self.args)})"

    @property
    def key(self) -> Tuple[str, Tuple[str, ...]]:
        return self.name, self.args

    def unmet(self, state: AbstractSet[Atom]) -> List[Literal]:
        return [
            literal
            for literal in self.precondition
            if (literal.atom in state) != literal.positive
        ]

    def applicable(self, state: AbstractSet[Atom]) -> bool:
        return not self.unmet(state)

    def apply(self, state: AbstractSet[Atom]) -> FrozenSet[Atom]:
        return frozenset((set(state) - set(self.del_effects)) | set(self.add_effects))


@dataclass
class GroundedTask:
    domain: Domain
    problem: Problem
    atoms: Tuple[Atom, ...]
    init: FrozenSet[int]
    goal_pos: FrozenSet[int]
    goal_neg: FrozenSet[int]
    actions: Tuple[GroundedAction, ...]
    pre_pos: Tuple[FrozenSet[int], ...]
    pre_neg: Tuple[FrozenSet[int], ...]
    add: Tuple[FrozenSet[int], ...]
    delete: Tuple[FrozenSet[int], ...]
    unreachable_goals: Tuple[Atom, ...] = ()
    index: Dict[Atom, int] = field(default_factory=dict)
    _by_key: Dict[Tuple[str, Tuple[str, ...]], int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.index = {atom: i for i, atom in enumerate(self.atoms)}
        self._by_key = {action.key: i for i, action in enumerate(self.actions)}

    def find(self, name: str, args: Sequence[str]) -> Optional[int]:
        return self._by_key.get((name, tuple(args)))

    def init_atoms(self) -> FrozenSet[Atom]:
        return frozenset(self.atoms[i] for i in self.init)

    def goal_literals(self) -> Tuple[Literal, ...]:
        return self.problem.goal

    def goal_holds(self, state: AbstractSet[Atom]) -> bool:
        return all((literal.atom in state) == literal.positive for literal in self.problem.goal)

    def unmet_goals(self, state: AbstractSet[Atom]) -> List[Literal]:
        return [
            literal for literal in self.problem.goal if (literal.atom in state) != literal.positive
        ]

    def without(self, keys: AbstractSet[Tuple[str, Tuple[str, ...]]]) -> "GroundedTask":
        """Copy of the task with the given ground actions removed."""
        kept = [i for i, action in enumerate(self.actions) if action.key not in keys]
        return replace(
            self,
            actions=tuple(self.actions[i] for i in kept),
            pre_pos=tuple(self.pre_pos[i] for i in kept),
            pre_neg=tuple(self.pre_neg[i] for i in kept),
            add=tuple(self.add[i] for i in kept),
            delete=tuple(self.delete[i] for i in kept),
        )

    def instantiate(self, name: str, args: Sequence[str]) -> GroundedAction:
        """Ground one schema directly, for steps the reachability pass never produced."""
        idx = self.find(name, args)
        if idx is not None:
            return self.actions[idx]
        try:
            schema = self.domain.action(name)
        except KeyError:
            raise ValueError(f"unknown action '{name}'") from None
        if len(args) != len(schema.params):
            raise ValueError(
                f"action '{name}' takes {len(schema.params)} arguments, got {len(args)}"
            )
        types = _object_types(self.domain, self.problem)
        binding: Binding = {}
        for param, arg in zip(schema.params, args):
            arg_type = types.get(arg)
            if arg_type is None:
                raise ValueError(f"unknown object '{arg}' in ({name} ...)")
            if not self.domain.is_subtype(arg_type, param.type):
                raise ValueError(f"'{arg}' is {arg_type}, ({name} ...) expects {param.type}")
            binding[param.name] = arg
        return _ground_action(schema, binding, self.problem)


def _object_types(domain: Domain, problem: Problem) -> Dict[str, str]:
    types = domain.constant_types()
    types.update(problem.object_types())
    return types


def _substitute(atom: Atom, binding: Binding) -> Atom:
    return Atom(atom.predicate, tuple(binding.get(arg, arg) for arg in atom.args))


def _cost_of(term: CostTerm, binding: Binding, problem: Problem) -> int:
    if isinstance(term, int):
        return term
    ground = FluentTerm(term.name, tuple(binding.get(arg, arg) for arg in term.args))
    value = problem.fluent_value(ground)
    return DEFAULT_FLUENT_COST if value is None else value


def _ground_action(schema: ActionSchema, binding: Binding, problem: Problem) -> GroundedAction:
    return GroundedAction(
        name=schema.name,
        args=tuple(binding[p.name] for p in schema.params),
        precondition=tuple(
            Literal(_substitute(lit.atom, binding), lit.positive) for lit in schema.precondition
        ),
        add_effects=tuple(_substitute(atom, binding) for atom in schema.add_effects),
        del_effects=tuple(_substitute(atom, binding) for atom in schema.del_effects),
        cost=_cost_of(schema.cost_term, binding, problem),
    )


class _Instantiator:
    def __init__(self, domain: Domain, problem: Problem) -> None:
        self.domain = domain
        self.types = _object_types(domain, problem)
        self._of_type: Dict[str, List[str]] = {}

    def objects_of(self, type_name: str) -> List[str]:
        cached = self._of_type.get(type_name)
        if cached is None:
            cached = [
                name for name, t in self.types.items() if self.domain.is_subtype(t, type_name)
            ]
            self._of_type[type_name] = cached
        return cached

    def bindings(
        self, schema: ActionSchema, reached: Dict[str, List[Atom]]
    ) -> Iterator[Binding]:
        positives = [lit.atom for lit in schema.precondition if lit.positive]
        param_types = {p.name: p.type for p in schema.params}

        def match(pattern: Atom, fact: Atom, binding: Binding) -> Optional[Binding]:
            out = dict(binding)
            for term, value in zip(pattern.args, fact.args):
                if term in param_types:
                    bound = out.get(term)
                    if bound is None:
                        if not self.domain.is_subtype(self.types.get(value, ""), param_types[term]):
                            return None
                        out[term] = value
                    elif bound != value:
                        return None
                elif term != value:
                    return None
            return out

        def free(binding: Binding) -> Iterator[Binding]:
            open_params: List[TypedName] = [p for p in schema.params if p.name not in binding]
            pools = [self.objects_of(p.type) for p in open_params]
            for combo in itertools.product(*pools):
                out = dict(binding)
                out.update(zip((p.name for p in open_params), combo))
                yield out

        def extend(position: int, binding: Binding) -> Iterator[Binding]:
            if position == len(positives):
                yield from free(binding)
                return
            pattern = positives[position]
            for fact in reached.get(pattern.predicate, ()):
                matched = match(pattern, fact, binding)
                if matched is not None:
                    yield from extend(position + 1, matched)

        yield from extend(0, {})


def ground(domain: Domain, problem: Problem) -> GroundedTask:
    """Typed instantiation kept to the delete-relaxed reachable part.

    Negative preconditions are ignored while computing reachability.
    """
    logger.info("ground: start objects=%d schemas=%d", len(problem.objects), len(domain.actions))
    instantiator = _Instantiator(domain, problem)
    reached: Dict[Atom, None] = {atom: None for atom in problem.init}
    by_pred: Dict[str, List[Atom]] = {}
    for atom in reached:
        by_pred.setdefault(atom.predicate, []).append(atom)
    grounded: Dict[Tuple[str, Tuple[str, ...]], GroundedAction] = {}

    changed = True
    while changed:
        changed = False
        for schema in domain.actions:
            found = list(instantiator.bindings(schema, by_pred))
            for binding in found:
                action = _ground_action(schema, binding, problem)
                if action.key in grounded:
                    continue
                grounded[action.key] = action
                for atom in action.add_effects:
                    if atom not in reached:
                        reached[atom] = None
                        by_pred.setdefault(atom.predicate, []).append(atom)
                        changed = True

    universe: Dict[Atom, None] = dict(reached)
    for action in grounded.values():
        for literal in action.precondition:
            universe.setdefault(literal.atom, None)
        for atom in action.del_effects:
            universe.setdefault(atom, None)
    for literal in problem.goal:
        if not literal.positive:
            universe.setdefault(literal.atom, None)

    atoms = tuple(universe)
    index = {atom: i for i, atom in enumerate(atoms)}
    actions = tuple(grounded.values())
    unreachable = tuple(
        literal.atom for literal in problem.goal if literal.positive and literal.atom not in reached
    )
    task = GroundedTask(
        domain=domain,
        problem=problem,
        atoms=atoms,
        init=frozenset(index[atom] for atom in problem.init),
        goal_pos=frozenset(
            index[lit.atom] for lit in problem.goal if lit.positive and lit.atom in index
        ),
        goal_neg=frozenset(index[lit.atom] for lit in problem.goal if not lit.positive),
        actions=actions,
        pre_pos=tuple(
            frozenset(index[l.atom] for l in a.precondition if l.positive) for a in actions
        ),
        pre_neg=tuple(
            frozenset(index[l.atom] for l in a.precondition if not l.positive) for a in actions
        ),
        add=tuple(frozenset(index[atom] for atom in a.add_effects) for a in actions),
        delete=tuple(frozenset(index[atom] for atom in a.del_effects) for a in actions),
        unreachable_goals=unreachable,
    )
    logger.info("ground: ok actions=%d atoms=%d", len(actions), len(atoms))
    if unreachable:
        logger.info("ground: unreachable goals %s", " ".join(str(a) for a in unreachable))
    return task
