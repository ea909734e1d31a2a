from __future__ import annotations

import logging
import re
from typing import Dict, List, Optional, Sequence, Tuple

from plan_x.errors import Diagnostic, PddlError
from plan_x.pddl.model import (
    ROOT_TYPE,
    TOTAL_COST,
    ActionSchema,
    Atom,
    CostTerm,
    Domain,
    FluentTerm,
    Literal,
    NumericAssignment,
    Predicate,
    Problem,
    TypedName,
    unique,
)
from plan_x.pddl.sexpr import SExpr, SourceText


logger = logging.getLogger(__name__)

SUPPORTED_REQUIREMENTS = (
    ":strips",
    ":typing",
    ":action-costs",
    ":negative-preconditions",
)

_NAME_RE = re.compile(r"^[a-z][a-z0-9_-]*$")
_TYPE_RE = re.compile(r"^[a-z][a-z0-9-]*$")
_INT_RE = re.compile(r"^[0-9]+$")
_UNSUPPORTED_CONNECTIVES = {"or", "imply", "exists", "forall", "when", "either"}


class _Reader:
    def __init__(self, src: SourceText) -> None:
        self.src = src
        self.diagnostics: List[Diagnostic] = []

    def error(self, node: SExpr, message: str) -> None:
        self.diagnostics.append(self.src.diagnostic(node, message))

    def raise_if_errors(self) -> None:
        if self.diagnostics:
            raise PddlError(self.diagnostics, self.src.source)

    def name(self, node: SExpr, what: str = "name") -> Optional[str]:
        if not node.is_atom:
            self.error(node, f"expected {what}, found a list")
            return None
        value = node.value
        assert isinstance(value, str)
        if not _NAME_RE.match(value):
            self.error(node, f"invalid {what} '{value}'")
            return None
        return value

    def typed_list(self, nodes: Sequence[SExpr], variables: bool) -> List[Tuple[str, str, SExpr]]:
        """Parse ``a b - t c`` into (name, type, node) triples; untyped names get ``object``."""
        out: List[Tuple[str, str, SExpr]] = []
        pending: List[SExpr] = []
        idx = 0
        while idx < len(nodes):
            node = nodes[idx]
            if node.is_atom and node.value == "-":
                if idx + 1 >= len(nodes):
                    self.error(node, "missing type after '-'")
                    break
                type_node = nodes[idx + 1]
                if not type_node.is_atom:
                    self.error(type_node, "unsupported type expression")
                    idx += 2
                    pending = []
                    continue
                type_name = str(type_node.value)
                for item in pending:
                    out.append((str(item.value), type_name, item))
                pending = []
                idx += 2
                continue
            if not node.is_atom:
                self.error(node, "expected a name in typed list")
            else:
                value = str(node.value)
                bare = value[1:] if variables and value.startswith("?") else value
                if variables and not value.startswith("?"):
                    self.error(node, f"expected variable, found '{value}'")
                elif not _NAME_RE.match(bare):
                    self.error(node, f"lexical error: invalid identifier '{value}'")
                else:
                    pending.append(node)
            idx += 1
        for item in pending:
            out.append((str(item.value), ROOT_TYPE, item))
        return out


class _LiteralReader(_Reader):
    """Shared atom/literal handling for domains, problems and state strings."""

    def __init__(self, src: SourceText, domain: Domain) -> None:
        super().__init__(src)
        self.domain = domain

    def atom(self, node: SExpr, scope: Dict[str, str]) -> Optional[Atom]:
        if node.is_atom or not node.items:
            self.error(node, f"expected an atom, found '{node}'")
            return None
        head = node.items[0]
        if not head.is_atom:
            self.error(node, "predicate name must be a symbol")
            return None
        pred_name = str(head.value)
        if pred_name in _UNSUPPORTED_CONNECTIVES:
            self.error(node, f"unsupported connective '{pred_name}'")
            return None
        predicate = self.domain.predicates.get(pred_name)
        if predicate is None:
            self.error(head, f"undeclared predicate '{pred_name}'")
            return None
        args: List[str] = []
        for arg_node in node.items[1:]:
            if not arg_node.is_atom:
                self.error(arg_node, "nested term in atom")
                return None
            args.append(str(arg_node.value))
        if len(args) != predicate.arity:
            self.error(
                node,
                f"arity mismatch for '{pred_name}': expected {predicate.arity}, got {len(args)}",
            )
            return None
        ok = True
        for position, (arg, arg_node) in enumerate(zip(args, node.items[1:])):
            arg_type = scope.get(arg)
            if arg_type is None:
                what = "variable" if arg.startswith("?") else "object"
                self.error(arg_node, f"undeclared {what} '{arg}'")
                ok = False
                continue
            expected = predicate.params[position].type
            if not self.domain.is_subtype(arg_type, expected):
                self.error(
                    arg_node,
                    f"type mismatch: '{arg}' is {arg_type}, '{pred_name}' argument "
                    f"{position + 1} expects {expected}",
                )
                ok = False
        if not ok:
            return None
        return Atom(pred_name, tuple(args))

    def literal(self, node: SExpr, scope: Dict[str, str]) -> Optional[Literal]:
        if node.head == "not":
            if len(node.items) != 2:
                self.error(node, "'not' takes exactly one atom")
                return None
            atom = self.atom(node.items[1], scope)
            return None if atom is None else Literal(atom, positive=False)
        atom = self.atom(node, scope)
        return None if atom is None else Literal(atom)

    def conjunction(self, node: SExpr, scope: Dict[str, str], what: str) -> List[Literal]:
        if node.is_atom:
            self.error(node, f"{what} must be a conjunction of literals")
            return []
        if not node.items:
            return []
        if node.head == "and":
            children = node.items[1:]
        elif node.head in _UNSUPPORTED_CONNECTIVES:
            self.error(node, f"{what} is not a conjunction of literals ('{node.head}')")
            return []
        else:
            children = [node]
        out: List[Literal] = []
        for child in children:
            literal = self.literal(child, scope)
            if literal is not None:
                out.append(literal)
        return out

    def fluent_term(self, node: SExpr, scope: Dict[str, str]) -> Optional[FluentTerm]:
        if node.is_atom or not node.items or not node.items[0].is_atom:
            self.error(node, "expected a fluent term")
            return None
        fname = str(node.items[0].value)
        decl = self.domain.functions.get(fname)
        if decl is None:
            self.error(node, f"undeclared fluent '{fname}'")
            return None
        args = [str(a.value) for a in node.items[1:] if a.is_atom]
        if len(args) != len(node.items) - 1 or len(args) != decl.arity:
            self.error(node, f"arity mismatch for fluent '{fname}'")
            return None
        for position, (arg, arg_node) in enumerate(zip(args, node.items[1:])):
            arg_type = scope.get(arg)
            if arg_type is None:
                self.error(arg_node, f"undeclared object '{arg}'")
                return None
            if not self.domain.is_subtype(arg_type, decl.params[position].type):
                self.error(arg_node, f"type mismatch for fluent '{fname}' argument {position + 1}")
                return None
        return FluentTerm(fname, tuple(args))

    def assignment(self, node: SExpr, scope: Dict[str, str]) -> Optional[NumericAssignment]:
        if len(node.items) != 3 or not node.items[2].is_atom:
            self.error(node, "numeric assignment must be (= (f args) N)")
            return None
        term = self.fluent_term(node.items[1], scope)
        raw = str(node.items[2].value)
        if not _INT_RE.match(raw):
            self.error(node.items[2], f"numeric value must be a non-negative integer, got '{raw}'")
            return None
        if term is None:
            return None
        return NumericAssignment(term, int(raw))


class _DomainReader(_Reader):
    def read(self) -> Domain:
        root = self._define("domain")
        if root is None:
            self.raise_if_errors()
            raise AssertionError("unreachable")
        name, sections = root

        requirements: List[str] = []
        types: Dict[str, Optional[str]] = {ROOT_TYPE: None}
        type_nodes: Dict[str, SExpr] = {}
        by_key: Dict[str, List[SExpr]] = {}
        for section in sections:
            key = section.head
            if key is None or not key.startswith(":"):
                self.error(section, "expected a domain section")
                continue
            by_key.setdefault(key, []).append(section)

        for section in by_key.pop(":requirements", []):
            for req in section.items[1:]:
                value = str(req.value) if req.is_atom else str(req)
                if value not in SUPPORTED_REQUIREMENTS:
                    self.error(req, f"unsupported requirement '{value}'")
                requirements.append(value)

        for section in by_key.pop(":types", []):
            for type_name, parent, node in self.typed_list(section.items[1:], variables=False):
                if not _TYPE_RE.match(type_name):
                    self.error(node, f"invalid type name '{type_name}'")
                    continue
                if type_name == ROOT_TYPE:
                    continue
                previous = types.get(type_name)
                if type_name in types and previous != parent and previous != ROOT_TYPE:
                    self.error(node, f"type '{type_name}' declared with two parents")
                    continue
                types[type_name] = parent
                type_nodes[type_name] = node
            for type_name, parent in list(types.items()):
                if parent is not None and parent not in types:
                    types[parent] = ROOT_TYPE
        self._check_cycles(types, type_nodes)

        constants = self._constants(by_key.pop(":constants", []), types)
        predicates = self._predicates(by_key.pop(":predicates", []), types)
        functions = self._functions(by_key.pop(":functions", []), types)
        # Actions are checked against a domain without actions.
        partial = Domain(
            name=name,
            requirements=tuple(requirements),
            types=types,
            constants=tuple(constants),
            predicates=predicates,
            functions=functions,
        )
        actions = [
            self._action(node, partial) for node in by_key.pop(":action", [])
        ]
        for key, nodes in by_key.items():
            for node in nodes:
                self.error(node, f"unsupported domain section '{key}'")

        names = [a.name for a in actions if a is not None]
        for action_name in set(names):
            if names.count(action_name) > 1:
                self.error(sections[0], f"duplicate action '{action_name}'")
        self.raise_if_errors()
        domain = Domain(
            name=name,
            requirements=tuple(requirements),
            types=types,
            constants=tuple(constants),
            predicates=predicates,
            functions=functions,
            actions=tuple(a for a in actions if a is not None),
        )
        logger.info(
            "pddl: domain %s ok types=%d predicates=%d actions=%d",
            domain.name,
            len(domain.types),
            len(domain.predicates),
            len(domain.actions),
        )
        return domain

    def _define(self, kind: str) -> Optional[Tuple[str, List[SExpr]]]:
        exprs = self.src.exprs
        if len(exprs) != 1 or exprs[0].head != "define":
            node = exprs[0] if exprs else SExpr([], 0)
            self.error(node, f"expected a single (define ({kind} ...)) form")
            return None
        items = exprs[0].items
        if len(items) < 2 or items[1].head != kind or len(items[1].items) != 2:
            self.error(exprs[0], f"expected ({kind} <name>) header")
            return None
        name = self.name(items[1].items[1], f"{kind} name")
        if name is None:
            return None
        return name, items[2:]

    def _check_cycles(self, types: Dict[str, Optional[str]], nodes: Dict[str, SExpr]) -> None:
        for start in list(types):
            seen = set()
            current: Optional[str] = start
            while current is not None:
                if current in seen:
                    node = nodes.get(start, SExpr([], 0))
                    self.error(node, f"cyclic type hierarchy through '{start}'")
                    types[start] = ROOT_TYPE
                    break
                seen.add(current)
                current = types.get(current)

    def _known_type(self, type_name: str, types: Dict[str, Optional[str]], node: SExpr) -> bool:
        if type_name not in types:
            self.error(node, f"unknown type '{type_name}'")
            return False
        return True

    def _constants(self, sections: List[SExpr], types: Dict[str, Optional[str]]) -> List[TypedName]:
        out: List[TypedName] = []
        for section in sections:
            for name, type_name, node in self.typed_list(section.items[1:], variables=False):
                if self._known_type(type_name, types, node):
                    out.append(TypedName(name, type_name))
        return unique(out)

    def _signature(self, node: SExpr, types: Dict[str, Optional[str]]) -> Optional[Predicate]:
        if node.is_atom or not node.items:
            self.error(node, "expected a predicate declaration")
            return None
        name = self.name(node.items[0], "predicate name")
        if name is None:
            return None
        params: List[TypedName] = []
        seen: set = set()
        for var, type_name, var_node in self.typed_list(node.items[1:], variables=True):
            if var in seen:
                self.error(var_node, f"duplicate variable '{var}' in '{name}'")
                continue
            seen.add(var)
            if self._known_type(type_name, types, var_node):
                params.append(TypedName(var, type_name))
        return Predicate(name, tuple(params))

    def _predicates(self, sections: List[SExpr], types: Dict[str, Optional[str]]) -> Dict[str, Predicate]:
        out: Dict[str, Predicate] = {}
        for section in sections:
            for node in section.items[1:]:
                predicate = self._signature(node, types)
                if predicate is None:
                    continue
                if predicate.name in out:
                    self.error(node, f"duplicate predicate '{predicate.name}'")
                    continue
                out[predicate.name] = predicate
        return out

    def _functions(self, sections: List[SExpr], types: Dict[str, Optional[str]]) -> Dict[str, Predicate]:
        out: Dict[str, Predicate] = {}
        for section in sections:
            items = section.items[1:]
            idx = 0
            while idx < len(items):
                node = items[idx]
                if node.is_atom:
                    if node.value == "-" and idx + 1 < len(items) and items[idx + 1].value == "number":
                        idx += 2
                        continue
                    self.error(node, f"unexpected token '{node.value}' in :functions")
                    idx += 1
                    continue
                function = self._signature(node, types)
                if function is not None:
                    out[function.name] = function
                idx += 1
        return out

    def _action(self, node: SExpr, domain: Domain) -> Optional[ActionSchema]:
        items = node.items
        if len(items) < 2:
            self.error(node, "action without a name")
            return None
        name = self.name(items[1], "action name")
        if name is None:
            return None
        fields: Dict[str, SExpr] = {}
        idx = 2
        while idx < len(items):
            key = items[idx]
            if not key.is_atom or not str(key.value).startswith(":") or idx + 1 >= len(items):
                self.error(key, f"malformed action '{name}'")
                return None
            fields[str(key.value)] = items[idx + 1]
            idx += 2
        for key, value_node in fields.items():
            if key not in (":parameters", ":precondition", ":effect"):
                self.error(value_node, f"unsupported action field '{key}'")

        params: List[TypedName] = []
        scope: Dict[str, str] = domain.constant_types()
        param_node = fields.get(":parameters")
        if param_node is not None:
            if param_node.is_atom:
                self.error(param_node, ":parameters must be a list")
            else:
                for var, type_name, var_node in self.typed_list(param_node.items, variables=True):
                    if var in scope:
                        self.error(var_node, f"duplicate parameter '{var}' in '{name}'")
                        continue
                    if self._known_type(type_name, domain.types, var_node):
                        params.append(TypedName(var, type_name))
                        scope[var] = type_name

        literals = _LiteralReader(self.src, domain)
        precondition: List[Literal] = []
        pre_node = fields.get(":precondition")
        if pre_node is not None:
            precondition = literals.conjunction(pre_node, scope, f"precondition of '{name}'")

        add: List[Atom] = []
        delete: List[Atom] = []
        cost: Optional[CostTerm] = None
        eff_node = fields.get(":effect")
        if eff_node is not None and not eff_node.is_atom and eff_node.items:
            children = eff_node.items[1:] if eff_node.head == "and" else [eff_node]
            for child in children:
                if child.head == "increase":
                    if cost is not None:
                        literals.error(child, f"multiple cost increases in '{name}'")
                        continue
                    cost = self._cost(child, literals, scope, name)
                    continue
                literal = literals.literal(child, scope)
                if literal is None:
                    continue
                (add if literal.positive else delete).append(literal.atom)
        self.diagnostics.extend(literals.diagnostics)
        return ActionSchema(
            name=name,
            params=tuple(params),
            precondition=tuple(unique(precondition)),
            add_effects=tuple(unique(add)),
            del_effects=tuple(unique(delete)),
            cost=cost,
        )

    def _cost(
        self, node: SExpr, literals: _LiteralReader, scope: Dict[str, str], action: str
    ) -> Optional[CostTerm]:
        items = node.items
        if len(items) != 3 or items[1].head != TOTAL_COST:
            literals.error(node, f"only (increase (total-cost) N) is supported in '{action}'")
            return None
        amount = items[2]
        if amount.is_atom:
            raw = str(amount.value)
            if not _INT_RE.match(raw):
                literals.error(amount, f"cost must be a non-negative integer, got '{raw}'")
                return None
            return int(raw)
        return literals.fluent_term(amount, scope)


class _ProblemReader(_DomainReader):
    def __init__(self, src: SourceText, domain: Domain) -> None:
        super().__init__(src)
        self.domain = domain

    def read_problem(self) -> Problem:
        root = self._define("problem")
        if root is None:
            self.raise_if_errors()
            raise AssertionError("unreachable")
        name, sections = root
        domain_name = ""
        objects: List[TypedName] = []
        init: List[Atom] = []
        numeric: List[NumericAssignment] = []
        goal: List[Literal] = []
        metric = False
        scope: Dict[str, str] = self.domain.constant_types()
        literals = _LiteralReader(self.src, self.domain)

        ordered = sorted(sections, key=lambda s: 0 if s.head in (":domain", ":objects") else 1)
        for section in ordered:
            key = section.head
            if key == ":domain":
                if len(section.items) != 2:
                    self.error(section, "expected (:domain <name>)")
                    continue
                domain_name = self.name(section.items[1], "domain name") or ""
                if domain_name != self.domain.name:
                    self.error(section, f"problem is for domain '{domain_name}', not '{self.domain.name}'")
            elif key == ":objects":
                for obj, type_name, node in self.typed_list(section.items[1:], variables=False):
                    if obj in scope:
                        self.error(node, f"duplicate object '{obj}'")
                        continue
                    if self._known_type(type_name, self.domain.types, node):
                        objects.append(TypedName(obj, type_name))
                        scope[obj] = type_name
            elif key == ":init":
                for node in section.items[1:]:
                    if node.head == "=":
                        assignment = literals.assignment(node, scope)
                        if assignment is not None:
                            numeric.append(assignment)
                        continue
                    if node.head == "not":
                        literals.error(node, "negative literals are not allowed in :init")
                        continue
                    atom = literals.atom(node, scope)
                    if atom is not None:
                        init.append(atom)
            elif key == ":goal":
                if len(section.items) != 2:
                    self.error(section, "goal must be a single conjunction")
                    continue
                goal = literals.conjunction(section.items[1], scope, "goal")
            elif key == ":metric":
                if (
                    len(section.items) == 3
                    and section.items[1].value == "minimize"
                    and section.items[2].head == TOTAL_COST
                ):
                    metric = True
                else:
                    self.error(section, "only (:metric minimize (total-cost)) is supported")
            else:
                self.error(section, f"unsupported problem section '{key}'")
        self.diagnostics.extend(literals.diagnostics)
        self.raise_if_errors()
        return Problem(
            name=name,
            domain_name=domain_name,
            objects=tuple(objects),
            init=tuple(unique(init)),
            numeric_init=tuple(unique(numeric)),
            goal=tuple(unique(goal)),
            metric=metric,
        )


def parse_domain(text: str, source: str = "<string>") -> Domain:
    return _DomainReader(SourceText(text, source)).read()


def parse_problem(text: str, domain: Domain, source: str = "<string>") -> Problem:
    return _ProblemReader(SourceText(text, source), domain).read_problem()


def parse_state(
    text: str,
    domain: Domain,
    scope: Dict[str, str],
    source: str = "<state>",
) -> Tuple[List[Literal], List[NumericAssignment], List[Diagnostic]]:
    """Parse a state string (a bare literal sequence or an ``(and ...)`` form).

    Returns literals, numeric assignments and diagnostics instead of raising on
    semantic problems, so callers can report every violation at once.
    Syntax errors still raise ``PddlError``.
    """
    src = SourceText(text, source)
    reader = _LiteralReader(src, domain)
    nodes: List[SExpr] = []
    for expr in src.exprs:
        if expr.head == "and":
            nodes.extend(expr.items[1:])
        elif expr.is_atom:
            reader.error(expr, f"stray token '{expr.value}'")
        elif expr.items:
            nodes.append(expr)
    literals: List[Literal] = []
    numeric: List[NumericAssignment] = []
    for node in nodes:
        if node.head == "=":
            assignment = reader.assignment(node, scope)
            if assignment is not None:
                numeric.append(assignment)
            continue
        literal = reader.literal(node, scope)
        if literal is not None:
            literals.append(literal)
    return unique(literals), unique(numeric), reader.diagnostics
